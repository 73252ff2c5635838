//! The 2-ray game: the ambient chamber walk, its restriction to the 3-fold,
//! and the verdict.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::blowup::{is_terminal_quotient, kawamata_grading, BlowupInput, BlowupResult, SingularPoint};
use crate::cones::{classify_position, wall_normal, Cone2, Position, Weight};
use crate::cox::{CoxData, DivClass, EndKind};
use crate::error::{Error, Result};
use crate::intersect::weighted_bezout;
use crate::poly::{SparsePoly, Q};
use crate::unproj::{detect_fake_divisor, eliminate_linear, specialize_one, unproject_triple, unproject_two_ratio, Model, UnprojectionStep};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Flip,
    Flop,
    Antiflip,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Flip => "flip",
            Direction::Flop => "flop",
            Direction::Antiflip => "antiflip",
        })
    }
}

/// How a fibration end looks on the 3-fold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndClass {
    DoubleCoverCandidate,
    EllipticFibration,
    ConicBundle,
    K3Fibration,
    DelPezzoFibration,
    Other,
}

impl fmt::Display for EndClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EndClass::DoubleCoverCandidate => "DoubleCoverCandidate",
            EndClass::EllipticFibration => "EllipticFibration",
            EndClass::ConicBundle => "ConicBundle",
            EndClass::K3Fibration => "K3Fibration",
            EndClass::DelPezzoFibration => "DelPezzoFibration",
            EndClass::Other => "Other",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipData {
    /// Local torus weights of the surviving coordinates.
    pub local: Vec<i64>,
    /// Weights of local hypersurfaces that could not be solved.
    pub hypersurfaces: Vec<i64>,
    pub eliminated: Vec<String>,
    pub base_dim: usize,
    /// Number of variables strictly before and after the wall.
    pub before: usize,
    pub after: usize,
    pub direction: Direction,
    /// Number of flipping loci when the base is zero-dimensional.
    pub count: Option<Q>,
    pub terminal: Option<bool>,
}

impl FlipData {
    pub fn signature(&self) -> String {
        let mut s = String::from("(");
        for (i, w) in self.local.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&format!("{w}"));
        }
        if !self.hypersurfaces.is_empty() {
            s.push(';');
            for (i, w) in self.hypersurfaces.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                s.push_str(&format!("{w}"));
            }
        }
        s.push(')');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepKind {
    DivisorialContraction { contracted: String, target: Vec<i64> },
    Fibration { base: Vec<String>, base_weights: Vec<i64>, base_dim: usize, class: Option<EndClass> },
    FlipType(FlipData),
    IsomorphismOnY { witness: String },
    FakeDivisor { ideal: Vec<String> },
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameStep {
    pub wall: Weight,
    pub kind: StepKind,
}

impl fmt::Display for GameStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StepKind::DivisorialContraction { contracted, target } => {
                write!(f, "{} divisorial contraction of {contracted} to P{}", self.wall, paren(target))
            }
            StepKind::Fibration { base_weights, base_dim, class, .. } => {
                write!(f, "{} fibration over P{} (dim {base_dim})", self.wall, paren(base_weights))?;
                if let Some(c) = class {
                    write!(f, " {c}")?;
                }
                Ok(())
            }
            StepKind::FlipType(d) => {
                write!(f, "{} {} {}", self.wall, d.direction, d.signature())?;
                if let Some(c) = d.count {
                    write!(f, " x{c}")?;
                }
                if !d.eliminated.is_empty() {
                    write!(f, " eliminating {}", d.eliminated.join(","))?;
                }
                match d.terminal {
                    Some(true) => write!(f, " terminal"),
                    Some(false) => write!(f, " non-terminal"),
                    None => Ok(()),
                }
            }
            StepKind::IsomorphismOnY { witness } => write!(f, "{} isomorphism ({witness})", self.wall),
            StepKind::FakeDivisor { ideal } => write!(f, "{} fake divisor ({})", self.wall, ideal.join(",")),
            StepKind::Error(e) => write!(f, "{} error: {e}", self.wall),
        }
    }
}

fn paren(ws: &[i64]) -> String {
    let mut s = String::from("(");
    for (i, w) in ws.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&format!("{w}"));
    }
    s.push(')');
    s
}

fn direction_of(l_minus_k: i64) -> Direction {
    match l_minus_k.signum() {
        -1 => Direction::Antiflip,
        0 => Direction::Flop,
        _ => Direction::Flip,
    }
}

/// Weights of the variables left after contracting `v`, as a weighted
/// projective space: `|det(w_i, w_v)|` divided by their gcd.
fn contraction_target(cox: &CoxData, v: usize) -> Vec<i64> {
    let wv = cox.weight(v);
    let raw: Vec<i64> = (0..cox.len()).filter(|&i| i != v).map(|i| cox.weight(i).cross(wv).abs()).collect();
    let g = raw.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g > 1 {
        raw.iter().map(|x| x / g).collect()
    } else {
        raw
    }
}

fn group_vars(cox: &CoxData, range: core::ops::Range<usize>) -> Vec<usize> {
    cox.groups()[range].iter().flat_map(|g| g.variables.iter().copied()).collect()
}

fn end_step(cox: &CoxData, group: usize, kind: &EndKind) -> GameStep {
    let ray = cox.groups()[group].ray;
    match kind {
        EndKind::Divisorial { contracted } => GameStep {
            wall: ray,
            kind: StepKind::DivisorialContraction {
                contracted: String::from(cox.name(*contracted)),
                target: contraction_target(cox, *contracted),
            },
        },
        EndKind::Fibration => {
            let vars = &cox.groups()[group].variables;
            GameStep {
                wall: ray,
                kind: StepKind::Fibration {
                    base: vars.iter().map(|&v| String::from(cox.name(v))).collect(),
                    base_weights: vars.iter().map(|&v| cox.weight(v).multiple_of(ray).unwrap_or(0)).collect(),
                    base_dim: vars.len() - 1,
                    class: None,
                },
            }
        }
    }
}

/// The walk on the ambient toric variety: the start end, one step per
/// interior wall, the final end.
pub fn play_ambient(cox: &CoxData, minus_k: DivClass) -> Result<Vec<GameStep>> {
    let mob = cox.mobile_cone()?;
    let mut steps = Vec::new();
    steps.push(end_step(cox, mob.start_group, &mob.start));
    for g in mob.start_group + 1..mob.end_group {
        let ray = cox.groups()[g].ray;
        let l = wall_normal(ray)?;
        let before = group_vars(cox, 0..g);
        let after = group_vars(cox, g + 1..cox.groups().len());
        let local: Vec<i64> = before.iter().chain(after.iter()).map(|&v| l.eval(cox.weight(v))).collect();
        steps.push(GameStep {
            wall: ray,
            kind: StepKind::FlipType(FlipData {
                local,
                hypersurfaces: Vec::new(),
                eliminated: Vec::new(),
                base_dim: cox.groups()[g].variables.len() - 1,
                before: before.len(),
                after: after.len(),
                direction: direction_of(l.eval(minus_k)),
                count: None,
                terminal: None,
            }),
        });
    }
    steps.push(end_step(cox, mob.end_group, &mob.end));
    Ok(steps)
}

/// Terminality of an antiflip with four local weights: each point on the
/// negative side is `1/|b|` of the other three weights.
pub fn antiflip_terminal(local: &[i64]) -> Option<bool> {
    if local.len() != 4 {
        return None;
    }
    for (i, &b) in local.iter().enumerate() {
        if b >= -1 {
            continue;
        }
        let others: Vec<i64> = local.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &w)| w).collect();
        if !is_terminal_quotient(-b, [others[0], others[1], others[2]]) {
            return Some(false);
        }
    }
    Some(true)
}

/// Bipartite matching of equations to variables they can eliminate.
fn match_eliminations(cands: &[Vec<usize>]) -> Vec<Option<usize>> {
    fn augment(e: usize, cands: &[Vec<usize>], owner: &mut Vec<(usize, usize)>, seen: &mut Vec<usize>) -> bool {
        for &v in &cands[e] {
            if seen.contains(&v) {
                continue;
            }
            seen.push(v);
            match owner.iter().position(|&(ov, _)| ov == v) {
                None => {
                    owner.push((v, e));
                    return true;
                }
                Some(pos) => {
                    let other = owner[pos].1;
                    if augment(other, cands, owner, seen) {
                        owner[pos] = (v, e);
                        return true;
                    }
                }
            }
        }
        false
    }
    let mut owner: Vec<(usize, usize)> = Vec::new();
    for e in 0..cands.len() {
        let mut seen = Vec::new();
        augment(e, cands, &mut owner, &mut seen);
    }
    (0..cands.len()).map(|e| owner.iter().find(|&&(_, oe)| oe == e).map(|&(v, _)| v)).collect()
}

/// Restrict the flip at wall group `g` to the 3-fold.
pub fn restrict_wall(model: &Model, g: usize, flip_terminal: &[(Weight, bool)], warnings: &mut Vec<String>) -> Result<GameStep> {
    let cox = &model.cox;
    let ray = cox.groups()[g].ray;
    let l = wall_normal(ray)?;
    let wall: Vec<usize> = cox.groups()[g].variables.clone();
    let before = group_vars(cox, 0..g);
    let after = group_vars(cox, g + 1..cox.groups().len());
    let side: Vec<usize> = before.iter().chain(after.iter()).copied().collect();
    let k = wall.len() as i64;
    let pure_wall = |m: &[u32]| (0..m.len()).all(|i| m[i] == 0 || wall.contains(&i));

    // equations cutting the base of the flip
    let mut cuts: Vec<usize> = Vec::new();
    let mut witness = None;
    for (j, e) in model.equations.iter().enumerate() {
        if let Some(m) = e.support().find(|m| pure_wall(m)) {
            cuts.push(j);
            if witness.is_none() {
                witness = Some(SparsePoly::monomial(m.clone(), crate::poly::Coeff::one()));
            }
        }
    }
    if cuts.len() as i64 > k - 1 {
        let w = witness.expect("a cut has a witness");
        return Ok(GameStep { wall: ray, kind: StepKind::IsomorphismOnY { witness: format!("{}", w.display(cox.names())) } });
    }
    let c = cuts.len() as i64;
    let rest: Vec<usize> = (0..model.equations.len()).filter(|j| !cuts.contains(j)).collect();
    let cands: Vec<Vec<usize>> = rest
        .iter()
        .map(|&j| {
            let mut vs: Vec<usize> = Vec::new();
            for m in model.equations[j].support() {
                let outside: Vec<usize> = (0..m.len()).filter(|&i| m[i] > 0 && !wall.contains(&i)).collect();
                if outside.len() == 1 && m[outside[0]] == 1 && !vs.contains(&outside[0]) {
                    vs.push(outside[0]);
                }
            }
            vs
        })
        .collect();
    let matched = match_eliminations(&cands);
    let mut eliminated: Vec<usize> = Vec::new();
    let mut hyper: Vec<i64> = Vec::new();
    let dim = |e: usize, h: usize| (k - 1 - c) + side.len() as i64 - e as i64 - h as i64 - 1;
    for v in matched.iter().flatten() {
        if dim(eliminated.len(), hyper.len()) <= 3 {
            break;
        }
        eliminated.push(*v);
    }
    for (idx, &j) in rest.iter().enumerate() {
        if dim(eliminated.len(), hyper.len()) <= 3 {
            break;
        }
        if matched[idx].is_some_and(|v| eliminated.contains(&v)) {
            continue;
        }
        hyper.push(l.eval(cox.bidegree(&model.equations[j])?));
    }
    if dim(eliminated.len(), hyper.len()) != 3 {
        return Err(Error::UnresolvedRestriction(format!(
            "local dimension {} at wall {ray}",
            dim(eliminated.len(), hyper.len())
        )));
    }
    let local: Vec<i64> = side.iter().filter(|v| !eliminated.contains(v)).map(|&v| l.eval(cox.weight(v))).collect();
    if !local.iter().any(|&w| w > 0) || !local.iter().any(|&w| w < 0) {
        return Err(Error::UnresolvedRestriction(format!("one-signed local weights at wall {ray}")));
    }
    let count = if c == k - 1 {
        let degs: Vec<Q> = cuts.iter().map(|&j| cox.bidegree(&model.equations[j]).ok().and_then(|d| d.multiple_of(ray)).map(Q::from).unwrap_or_default()).collect();
        let ws: Vec<i64> = wall.iter().map(|&v| cox.weight(v).multiple_of(ray).unwrap_or(0)).collect();
        weighted_bezout(&degs, &ws).ok()
    } else {
        None
    };
    let direction = direction_of(l.eval(model.minus_k));
    let terminal = if direction == Direction::Antiflip {
        if hyper.is_empty() {
            antiflip_terminal(&local)
        } else {
            match flip_terminal.iter().find(|(w, _)| w.same_ray(ray)) {
                Some(&(_, t)) => Some(t),
                None => {
                    warnings.push(format!("no terminality annotation for the hypersurface antiflip at {ray}; assumed terminal"));
                    None
                }
            }
        }
    } else {
        None
    };
    Ok(GameStep {
        wall: ray,
        kind: StepKind::FlipType(FlipData {
            local,
            hypersurfaces: hyper,
            eliminated: eliminated.iter().map(|&v| String::from(cox.name(v))).collect(),
            base_dim: (k - 1 - c) as usize,
            before: before.len(),
            after: after.len(),
            direction,
            count,
            terminal,
        }),
    })
}

fn classify_end(base_dim: usize, k_trivial: bool) -> EndClass {
    match (base_dim, k_trivial) {
        (3, _) => EndClass::DoubleCoverCandidate,
        (2, true) => EndClass::EllipticFibration,
        (2, false) => EndClass::ConicBundle,
        (1, true) => EndClass::K3Fibration,
        (1, false) => EndClass::DelPezzoFibration,
        _ => EndClass::Other,
    }
}

/// Restrict an end step: fibrations lose one base dimension per equation
/// living entirely on the end ray.
fn restrict_end(model: &Model, step: &GameStep) -> GameStep {
    match &step.kind {
        StepKind::Fibration { base, base_weights, base_dim, .. } => {
            let vars: Vec<usize> = base.iter().filter_map(|n| model.cox.index_of(n).ok()).collect();
            let cut = model
                .equations
                .iter()
                .filter(|e| e.support().all(|m| (0..m.len()).all(|i| m[i] == 0 || vars.contains(&i))))
                .count();
            let dim = base_dim.saturating_sub(cut);
            let k_trivial = model.minus_k.same_ray(step.wall);
            GameStep {
                wall: step.wall,
                kind: StepKind::Fibration {
                    base: base.clone(),
                    base_weights: base_weights.clone(),
                    base_dim: dim,
                    class: Some(classify_end(dim, k_trivial)),
                },
            }
        }
        _ => step.clone(),
    }
}

pub fn restrict_to_y(model: &Model, steps: &[GameStep], flip_terminal: &[(Weight, bool)], warnings: &mut Vec<String>) -> Result<Vec<GameStep>> {
    let mob = model.cox.mobile_cone()?;
    let mut out = Vec::with_capacity(steps.len());
    let last = steps.len() - 1;
    for (i, s) in steps.iter().enumerate() {
        if i == 0 || i == last {
            out.push(restrict_end(model, s));
            continue;
        }
        let g = mob.start_group + i;
        out.push(restrict_wall(model, g, flip_terminal, warnings)?);
    }
    Ok(out)
}

/// Chart of the final divisorial contraction: the contracted variable set
/// to one, linear variables eliminated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endpoint {
    pub contracted: String,
    pub variables: Vec<String>,
    pub weights: Vec<i64>,
    pub equations: Vec<String>,
}

pub fn endpoint_presentation(model: &Model, contracted: usize) -> Result<Endpoint> {
    let (mut names, mut weights, mut eqs) = specialize_one(model, contracted)?;
    loop {
        let n = names.len();
        let found = (0..n).find_map(|v| {
            let mut lone = alloc::vec![0u32; n];
            lone[v] = 1;
            eqs.iter()
                .position(|e| e.contains(&lone) && e.support().filter(|m| m[v] > 0).count() == 1)
                .map(|j| (v, j))
        });
        let Some((v, j)) = found else { break };
        let mut lone = alloc::vec![0u32; n];
        lone[v] = 1;
        let mut rest = eqs[j].clone();
        rest.remove_term(&lone);
        let value = rest.scale(crate::poly::Coeff::Generic);
        let mut next = Vec::new();
        for (k, e) in eqs.iter().enumerate() {
            if k == j {
                continue;
            }
            let s = e.substitute(v, &value);
            if !s.is_zero() {
                next.push(s.drop_var(v)?);
            }
        }
        eqs = next;
        names.remove(v);
        weights.remove(v);
    }
    let g = weights.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g > 1 {
        weights.iter_mut().for_each(|w| *w /= g);
    }
    Ok(Endpoint {
        contracted: String::from(model.cox.name(contracted)),
        equations: eqs.iter().map(|e| format!("{}", e.display(&names))).collect(),
        variables: names,
        weights,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictTag {
    LinkCandidate,
    BadLink,
    MobilityObstruction(Position),
    NonTerminalAntiflip,
    RequiresUnprojection,
    GameError,
}

impl fmt::Display for VerdictTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictTag::LinkCandidate => f.write_str("LinkCandidate"),
            VerdictTag::BadLink => f.write_str("BadLink"),
            VerdictTag::MobilityObstruction(p) => write!(f, "MobilityObstruction({p})"),
            VerdictTag::NonTerminalAntiflip => f.write_str("NonTerminalAntiflip"),
            VerdictTag::RequiresUnprojection => f.write_str("RequiresUnprojection"),
            VerdictTag::GameError => f.write_str("GameError"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub tag: VerdictTag,
    pub evidence: Vec<String>,
}

/// Extra per-unprojection guidance for cases where the split is a choice.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UnprojectionHint {
    pub name: Option<String>,
    pub target_exponent: Option<u32>,
    pub eliminate: Vec<String>,
}

/// Either an equation-defined 3-fold with a point to blow up, or bare toric
/// Cox data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseSource {
    Blowup {
        names: Vec<String>,
        weights: Vec<i64>,
        equations: Vec<SparsePoly>,
        point: SingularPoint,
        tangents: Vec<Option<usize>>,
        local_weights: Option<Vec<i64>>,
    },
    Toric { cox: CoxData },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseInput {
    pub source: CaseSource,
    pub hints: Vec<UnprojectionHint>,
    pub flip_terminal: Vec<(Weight, bool)>,
    pub max_unprojections: usize,
    pub closure_depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupSummary {
    pub local_weights: Vec<i64>,
    pub tangents: Vec<String>,
    pub valuations: Vec<Q>,
    pub grading_row: Vec<i64>,
    pub stack_row: Vec<i64>,
    pub minus_k: DivClass,
    pub discrepancy: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseOutcome {
    pub verdict: Verdict,
    pub blowup: Option<BlowupSummary>,
    pub blowup_model: Option<Model>,
    pub model: Option<Model>,
    pub mobile_cone: Option<Cone2>,
    pub chambers: Vec<Cone2>,
    pub minus_k: Option<DivClass>,
    pub position: Option<Position>,
    pub ambient_steps: Vec<GameStep>,
    pub steps: Vec<GameStep>,
    pub unprojections: Vec<UnprojectionStep>,
    pub endpoint: Option<Endpoint>,
    pub warnings: Vec<String>,
}

impl CaseOutcome {
    fn empty(verdict: Verdict) -> CaseOutcome {
        CaseOutcome {
            verdict,
            blowup: None,
            blowup_model: None,
            model: None,
            mobile_cone: None,
            chambers: Vec::new(),
            minus_k: None,
            position: None,
            ambient_steps: Vec::new(),
            steps: Vec::new(),
            unprojections: Vec::new(),
            endpoint: None,
            warnings: Vec::new(),
        }
    }
}

const DEFAULT_NAMES: [&str; 4] = ["r", "eta", "xi", "zeta"];

fn error_outcome(e: Error, mut partial: CaseOutcome) -> CaseOutcome {
    partial.verdict = Verdict { tag: VerdictTag::GameError, evidence: alloc::vec![format!("{e}")] };
    partial
}

fn unprojection_loop(
    mut model: Model,
    input: &CaseInput,
    trail: &mut Vec<UnprojectionStep>,
    warnings: &mut Vec<String>,
) -> Result<(Model, Option<String>)> {
    for iter in 0..=input.max_unprojections {
        let Some(fd) = detect_fake_divisor(&model, input.closure_depth)? else {
            return Ok((model, None));
        };
        let ideal: Vec<String> = fd.set.iter().map(|&v| String::from(model.cox.name(v))).collect();
        if iter == input.max_unprojections {
            return Ok((model, Some(format!("fake divisor ({}) remains after {iter} unprojections", ideal.join(",")))));
        }
        let hint = input.hints.get(iter).cloned().unwrap_or_default();
        let name = hint.name.clone().unwrap_or_else(|| String::from(DEFAULT_NAMES[iter.min(DEFAULT_NAMES.len() - 1)]));
        let mut work = model.clone();
        for &j in &fd.in_ideal {
            work.equations[j] = fd.closed[j].clone();
        }
        let attempt = match fd.set.len() {
            2 => match fd.in_ideal.first() {
                Some(&j) => unproject_two_ratio(&work, j, &fd.set, hint.target_exponent, &name),
                None => Err(Error::NoValidSplit(String::from("no equation in the ideal"))),
            },
            3 if fd.in_ideal.len() >= 2 => unproject_triple(&work, [fd.in_ideal[0], fd.in_ideal[1]], &fd.set, &name),
            _ => Err(Error::NoValidSplit(format!("ideal ({}) has no supported split", ideal.join(",")))),
        };
        let (mut next, step) = match attempt {
            Ok(x) => x,
            Err(e) => return Ok((model, Some(format!("{e}")))),
        };
        trail.push(step);
        for v in &hint.eliminate {
            let idx = next.cox.index_of(v)?;
            next = eliminate_linear(&next, idx)?;
        }
        if next.minus_k != model.minus_k {
            warnings.push(format!("-K changed across unprojection: {} to {}", model.minus_k, next.minus_k));
        }
        model = next;
    }
    Ok((model, None))
}

pub fn run_case(input: &CaseInput) -> CaseOutcome {
    let mut out = CaseOutcome::empty(Verdict { tag: VerdictTag::GameError, evidence: Vec::new() });
    let model = match &input.source {
        CaseSource::Blowup { names, weights, equations, point, tangents, local_weights } => {
            let b: BlowupResult = match kawamata_grading(&BlowupInput {
                names,
                weights,
                equations,
                point: *point,
                designated_tangents: tangents,
                local_weights_override: local_weights.as_deref(),
                exceptional_name: "u",
            }) {
                Ok(b) => b,
                Err(e) => return error_outcome(e, out),
            };
            out.warnings.extend(b.warnings.iter().cloned());
            out.blowup = Some(BlowupSummary {
                local_weights: b.assignment.weights.clone(),
                tangents: b.tangents.iter().map(|&t| names[t].clone()).collect(),
                valuations: b.valuations.clone(),
                grading_row: b.cox.weights().iter().map(|w| w.b).collect(),
                stack_row: b.stack_row.clone(),
                minus_k: b.minus_k,
                discrepancy: b.discrepancy,
            });
            Model { cox: b.cox, equations: b.equations, minus_k: b.minus_k, complete_intersection: true }
        }
        CaseSource::Toric { cox } => Model { cox: cox.clone(), equations: Vec::new(), minus_k: cox.anticanonical_class(), complete_intersection: true },
    };
    out.blowup_model = Some(model.clone());
    let mut trail = Vec::new();
    let mut warnings = core::mem::take(&mut out.warnings);
    let looped = unprojection_loop(model, input, &mut trail, &mut warnings);
    out.unprojections = trail;
    out.warnings = warnings;
    let (model, pending) = match looped {
        Ok(x) => x,
        Err(e) => return error_outcome(e, out),
    };
    out.minus_k = Some(model.minus_k);
    let mob = match model.cox.mobile_cone() {
        Ok(m) => m,
        Err(e) => {
            out.model = Some(model);
            return error_outcome(e, out);
        }
    };
    out.mobile_cone = Some(mob.cone);
    out.chambers = model.cox.git_chambers().map(|c| c.into_iter().map(|c| c.cone).collect()).unwrap_or_default();
    let position = match classify_position(&mob.cone, model.minus_k) {
        Ok(p) => p,
        Err(e) => return error_outcome(e, out),
    };
    out.position = Some(position);

    if let Some(reason) = pending {
        let fake = detect_fake_divisor(&model, input.closure_depth).ok().flatten();
        if let Some(fd) = fake {
            out.steps.push(GameStep {
                wall: mob.cone.r1,
                kind: StepKind::FakeDivisor { ideal: fd.set.iter().map(|&v| String::from(model.cox.name(v))).collect() },
            });
        }
        out.verdict = Verdict {
            tag: VerdictTag::RequiresUnprojection,
            evidence: alloc::vec![reason, format!("-K = {} is {position} for {}", model.minus_k, mob.cone)],
        };
        out.model = Some(model);
        return out;
    }

    let ambient = match play_ambient(&model.cox, model.minus_k) {
        Ok(s) => s,
        Err(e) => return error_outcome(e, out),
    };
    out.ambient_steps = ambient.clone();
    let mut warnings = core::mem::take(&mut out.warnings);
    let steps = restrict_to_y(&model, &ambient, &input.flip_terminal, &mut warnings);
    out.warnings = warnings;
    let steps = match steps {
        Ok(s) => s,
        Err(e) => {
            out.model = Some(model);
            return error_outcome(e, out);
        }
    };
    out.steps = steps;
    if let EndKind::Divisorial { contracted } = mob.end {
        match endpoint_presentation(&model, contracted) {
            Ok(ep) => out.endpoint = Some(ep),
            Err(e) => out.warnings.push(format!("endpoint presentation failed: {e}")),
        }
    }
    out.verdict = decide(&out.steps, &mob.cone, model.minus_k, position);
    out.model = Some(model);
    out
}

fn decide(steps: &[GameStep], cone: &Cone2, minus_k: DivClass, position: Position) -> Verdict {
    let mut evidence = Vec::new();
    evidence.push(format!("-K = {minus_k} is {position} for {cone}"));
    for s in steps {
        evidence.push(format!("{s}"));
    }
    let non_terminal = steps.iter().any(|s| matches!(&s.kind, StepKind::FlipType(d) if d.direction == Direction::Antiflip && d.terminal == Some(false)));
    if non_terminal {
        return Verdict { tag: VerdictTag::NonTerminalAntiflip, evidence };
    }
    if position == Position::Outside {
        return Verdict { tag: VerdictTag::MobilityObstruction(Position::Outside), evidence };
    }
    let last = steps.last();
    if matches!(last.map(|s| &s.kind), Some(StepKind::Fibration { class: Some(EndClass::DoubleCoverCandidate), .. })) {
        return Verdict { tag: VerdictTag::LinkCandidate, evidence };
    }
    if position == Position::Boundary {
        let interior_walls = steps.len() > 2;
        if interior_walls && minus_k.same_ray(cone.r2) {
            return Verdict { tag: VerdictTag::BadLink, evidence };
        }
        return Verdict { tag: VerdictTag::MobilityObstruction(Position::Boundary), evidence };
    }
    Verdict { tag: VerdictTag::LinkCandidate, evidence }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn cox(names: &str, ws: &[(i64, i64)]) -> CoxData {
        CoxData::new(names.split(' ').map(|s| s.to_string()).collect(), ws.iter().map(|&(a, b)| Weight::new(a, b)).collect()).unwrap()
    }

    fn remark() -> CoxData {
        cox("a b z c d", &[(0, 1), (0, 1), (1, 0), (1, -2), (1, -2)])
    }

    #[test]
    fn remark_ambient_walk() {
        let c = remark();
        let steps = play_ambient(&c, c.anticanonical_class()).unwrap();
        assert_eq!(steps.len(), 3);
        assert!(matches!(steps[0].kind, StepKind::Fibration { .. }));
        match &steps[1].kind {
            StepKind::FlipType(d) => {
                assert_eq!(d.local, vec![1, 1, -2, -2]);
                assert_eq!(d.direction, Direction::Antiflip);
                assert_eq!(d.base_dim, 0);
            }
            k => panic!("unexpected {k:?}"),
        }
        assert!(matches!(steps[2].kind, StepKind::Fibration { .. }));
    }

    #[test]
    fn remark_case_is_non_terminal() {
        let input = CaseInput {
            source: CaseSource::Toric { cox: remark() },
            hints: vec![],
            flip_terminal: vec![],
            max_unprojections: 3,
            closure_depth: 2,
        };
        let out = run_case(&input);
        assert_eq!(out.position, Some(Position::Interior));
        assert_eq!(out.minus_k, Some(Weight::new(3, -2)));
        assert_eq!(out.verdict.tag, VerdictTag::NonTerminalAntiflip);
    }

    #[test]
    fn antiflip_terminality() {
        assert_eq!(antiflip_terminal(&[7, 1, -1, -8]), Some(true));
        assert_eq!(antiflip_terminal(&[1, 1, -2, -2]), Some(false));
        assert_eq!(antiflip_terminal(&[4, 1, -1, -5]), Some(true));
        assert_eq!(antiflip_terminal(&[1, 2, 3]), None);
    }

    #[test]
    fn matching_prefers_complete_assignment() {
        let m = match_eliminations(&[vec![0, 1], vec![0]]);
        assert_eq!(m, vec![Some(1), Some(0)]);
    }

    #[test]
    fn end_classes() {
        assert_eq!(classify_end(3, false), EndClass::DoubleCoverCandidate);
        assert_eq!(classify_end(2, true), EndClass::EllipticFibration);
        assert_eq!(classify_end(1, true), EndClass::K3Fibration);
        assert_eq!(classify_end(1, false), EndClass::DelPezzoFibration);
    }
}
