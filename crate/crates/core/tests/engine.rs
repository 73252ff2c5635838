use sarkisov_core::blowup::SingularPoint;
use sarkisov_core::cones::{Position, Weight};
use sarkisov_core::cox::CoxData;
use sarkisov_core::game::{run_case, CaseInput, CaseSource, Direction, StepKind, VerdictTag};
use sarkisov_core::poly::{monomials_of_degree, Q, SparsePoly};

fn quintic(drop: impl Fn(&[u32]) -> bool) -> SparsePoly {
    let support = monomials_of_degree(&[1, 1, 1, 1, 2], 5).into_iter().filter(|m| !drop(m));
    SparsePoly::generic(5, support)
}

fn x5_input(eq: SparsePoly) -> CaseInput {
    CaseInput {
        source: CaseSource::Blowup {
            names: "x y z t s".split(' ').map(String::from).collect(),
            weights: vec![1, 1, 1, 1, 2],
            equations: vec![eq],
            point: SingularPoint { variable: 4, r: 2, a: 1 },
            tangents: vec![Some(0)],
            local_weights: None,
        },
        hints: vec![],
        flip_terminal: vec![],
        max_unprojections: 3,
        closure_depth: 2,
    }
}

#[test]
fn general_quintic_is_a_quadratic_involution() {
    // s^2 y, s^2 z, s^2 t are absent; s * a_3 survives
    let out = run_case(&x5_input(quintic(|m| m[4] == 2 && m[0] == 0)));
    assert_eq!(out.verdict.tag, VerdictTag::LinkCandidate);
    assert_eq!(out.unprojections.len(), 1);
    assert_eq!(out.unprojections[0].weight, Weight::new(3, -1));
    let flop = out
        .steps
        .iter()
        .find_map(|s| match &s.kind {
            StepKind::FlipType(d) => Some(d.clone()),
            _ => None,
        })
        .expect("a flip-type step");
    assert_eq!(flop.direction, Direction::Flop);
    assert_eq!(flop.count, Some(Q::from(15)));
    let end = out.endpoint.expect("divisorial end");
    assert_eq!(end.weights, vec![1, 1, 1, 1, 2]);
    assert_eq!(end.equations.len(), 1);
}

#[test]
fn special_quintic_sits_on_the_boundary() {
    let out = run_case(&x5_input(quintic(|m| m[0] == 0 && m[4] >= 1)));
    assert_eq!(out.position, Some(Position::Boundary));
    assert_eq!(out.verdict.tag, VerdictTag::MobilityObstruction(Position::Boundary));
    assert!(out.unprojections.is_empty());
}

#[test]
fn toric_antiflip_blocks_despite_interior_class() {
    let cox = CoxData::new(
        "a b z c d".split(' ').map(String::from).collect(),
        [(0, 1), (0, 1), (1, 0), (1, -2), (1, -2)].iter().map(|&(a, b)| Weight::new(a, b)).collect(),
    )
    .unwrap();
    let out = run_case(&CaseInput {
        source: CaseSource::Toric { cox },
        hints: vec![],
        flip_terminal: vec![],
        max_unprojections: 0,
        closure_depth: 2,
    });
    assert_eq!(out.minus_k, Some(Weight::new(3, -2)));
    assert_eq!(out.position, Some(Position::Interior));
    assert_eq!(out.verdict.tag, VerdictTag::NonTerminalAntiflip);
}

#[test]
fn bad_point_is_a_game_error() {
    let mut input = x5_input(quintic(|_| false));
    if let CaseSource::Blowup { point, .. } = &mut input.source {
        point.r = 3;
    }
    assert_eq!(run_case(&input).verdict.tag, VerdictTag::GameError);
}
