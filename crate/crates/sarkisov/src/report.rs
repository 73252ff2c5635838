//! Case reports, batch runs and their summaries.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use sarkisov_core::cones::{Cone2, Weight};
use sarkisov_core::game::{run_case, CaseOutcome, Direction, StepKind, GameStep, VerdictTag};
use sarkisov_core::intersect::{curve_divisor_numbers, family_mobility_exclusion};
use sarkisov_core::poly::Q;
use sarkisov_core::unproj::UnprojectionKind;

use crate::schema::{FamilySpec, SpecError};

pub type Pair = [i64; 2];

fn pair(w: Weight) -> Pair {
    [w.a, w.b]
}

fn cone_pair(c: &Cone2) -> [Pair; 2] {
    [pair(c.r1), pair(c.r2)]
}

fn q(x: Q) -> String {
    x.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupReport {
    pub local_weights: BTreeMap<String, i64>,
    pub tangents: Vec<String>,
    pub valuations: Vec<String>,
    pub grading: Vec<(String, Pair)>,
    pub stack_row: Vec<i64>,
    pub minus_k: Pair,
    pub discrepancy: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayLabel {
    pub ray: Pair,
    pub variables: Vec<(String, Pair)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeReport {
    pub rays: Vec<RayLabel>,
    pub mobile: Option<[Pair; 2]>,
    pub chambers: Vec<[Pair; 2]>,
    pub minus_k: Option<Pair>,
    pub position: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub wall: Pair,
    pub kind: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub local: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hypersurfaces: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eliminated: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminal: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end_class: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub target: Vec<i64>,
}

impl StepReport {
    fn from_step(s: &GameStep) -> StepReport {
        let mut r = StepReport {
            wall: pair(s.wall),
            kind: String::new(),
            text: s.to_string(),
            direction: None,
            local: vec![],
            hypersurfaces: vec![],
            eliminated: vec![],
            count: None,
            terminal: None,
            witness: None,
            end_class: None,
            target: vec![],
        };
        match &s.kind {
            StepKind::DivisorialContraction { target, .. } => {
                r.kind = "DivisorialContraction".into();
                r.target = target.clone();
            }
            StepKind::Fibration { base_weights, class, .. } => {
                r.kind = "Fibration".into();
                r.target = base_weights.clone();
                r.end_class = class.map(|c| c.to_string());
            }
            StepKind::FlipType(d) => {
                r.kind = "FlipType".into();
                r.direction = Some(d.direction.to_string());
                r.local = d.local.clone();
                r.hypersurfaces = d.hypersurfaces.clone();
                r.eliminated = d.eliminated.clone();
                r.count = d.count.map(q);
                r.terminal = d.terminal;
            }
            StepKind::IsomorphismOnY { witness } => {
                r.kind = "IsomorphismOnY".into();
                r.witness = Some(witness.clone());
            }
            StepKind::FakeDivisor { ideal } => {
                r.kind = "FakeDivisor".into();
                r.witness = Some(ideal.join(","));
            }
            StepKind::Error(e) => {
                r.kind = "Error".into();
                r.witness = Some(e.clone());
            }
        }
        r
    }

    /// Short label used in step-kind lists: `Isomorphism(s^2)`, `Antiflip`, `End`.
    pub fn short(&self) -> String {
        match self.kind.as_str() {
            "IsomorphismOnY" => format!("Isomorphism({})", self.witness.as_deref().unwrap_or("")),
            "FlipType" => match self.direction.as_deref() {
                Some("antiflip") => "Antiflip".into(),
                Some("flop") => "Flop".into(),
                _ => "Flip".into(),
            },
            "FakeDivisor" => "FakeDivisor".into(),
            "Error" => "Error".into(),
            _ => "End".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnprojectionReport {
    pub kind: String,
    pub ideal: Vec<String>,
    pub name: String,
    pub weight: Pair,
    pub ratios: Vec<(String, String)>,
    pub equations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointReport {
    pub contracted: String,
    pub variables: Vec<String>,
    pub weights: Vec<i64>,
    pub equations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveReport {
    pub c_e: String,
    pub c_d: String,
    pub c_k: String,
    pub excluded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdvisoryItem {
    pub printed: String,
    pub derived: Option<String>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub id: String,
    pub verdict: String,
    pub expected: Option<String>,
    pub matches: Option<bool>,
    pub evidence: Vec<String>,
    pub blowup: Option<BlowupReport>,
    pub cone: ConeReport,
    pub ambient_steps: Vec<StepReport>,
    pub steps: Vec<StepReport>,
    pub unprojections: Vec<UnprojectionReport>,
    pub final_variables: Vec<(String, Pair)>,
    pub final_equations: Vec<String>,
    pub endpoint: Option<EndpointReport>,
    pub curve: Option<CurveReport>,
    pub advisory: Vec<AdvisoryItem>,
    pub warnings: Vec<String>,
}

impl CaseReport {
    pub fn step_kinds(&self) -> Vec<String> {
        self.steps.iter().skip(1).map(|s| s.short()).collect()
    }

    pub fn antiflips(&self) -> Vec<&StepReport> {
        self.steps.iter().filter(|s| s.direction.as_deref() == Some("antiflip")).collect()
    }

    pub fn final_step(&self) -> Option<&StepReport> {
        self.steps.last()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub max_unprojections: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { max_unprojections: 3 }
    }
}

/// Parse `(a,b,...)` with an optional `n x` or `n×` multiplicity prefix.
fn parse_label(label: &str) -> Option<Vec<i64>> {
    let body = label.rsplit(['x', '×']).next()?.trim();
    let body = body.trim_start_matches('(').trim_end_matches(')');
    let body = body.split(';').next()?;
    body.split(',').map(|t| t.trim().replace('−', "-").parse::<i64>().ok()).collect()
}

fn same_up_to_sign(a: &[i64], b: &[i64]) -> bool {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_unstable();
    y.sort_unstable();
    if x == y {
        return true;
    }
    let mut z: Vec<i64> = b.iter().map(|v| -v).collect();
    z.sort_unstable();
    x == z
}

fn advisory(spec: &FamilySpec, steps: &[StepReport]) -> Vec<AdvisoryItem> {
    let flips: Vec<&StepReport> = steps.iter().filter(|s| s.kind == "FlipType").collect();
    spec.annotations
        .printed_flips
        .iter()
        .enumerate()
        .map(|(i, printed)| {
            let parsed = parse_label(printed);
            let hit = flips.iter().find(|s| parsed.as_deref().is_some_and(|p| same_up_to_sign(p, &s.local)));
            let shown = hit.or_else(|| flips.get(i)).map(|s| signature(s));
            AdvisoryItem { printed: printed.clone(), derived: shown, matches: hit.is_some() }
        })
        .collect()
}

fn signature(s: &StepReport) -> String {
    let l: Vec<String> = s.local.iter().map(|v| v.to_string()).collect();
    if s.hypersurfaces.is_empty() {
        format!("({})", l.join(","))
    } else {
        let h: Vec<String> = s.hypersurfaces.iter().map(|v| v.to_string()).collect();
        format!("({};{})", l.join(","), h.join(","))
    }
}

fn cone_report(out: &CaseOutcome) -> ConeReport {
    let mut rays = Vec::new();
    if let Some(m) = &out.model {
        for g in m.cox.groups() {
            rays.push(RayLabel {
                ray: pair(g.ray),
                variables: g.variables.iter().map(|&v| (m.cox.name(v).to_string(), pair(m.cox.weight(v)))).collect(),
            });
        }
    }
    ConeReport {
        rays,
        mobile: out.mobile_cone.as_ref().map(cone_pair),
        chambers: out.chambers.iter().map(cone_pair).collect(),
        minus_k: out.minus_k.map(pair),
        position: out.position.map(|p| p.to_string()),
    }
}

pub fn run_family(spec: &FamilySpec, opts: RunOptions) -> Result<CaseReport, SpecError> {
    let input = spec.case_input(opts.max_unprojections)?;
    let out = run_case(&input);
    let mut warnings = out.warnings.clone();
    let blowup = out.blowup.as_ref().map(|b| {
        let names = &spec.variables;
        let grading = out
            .blowup_model
            .as_ref()
            .map(|m| (0..m.cox.len()).map(|i| (m.cox.name(i).to_string(), pair(m.cox.weight(i)))).collect())
            .unwrap_or_default();
        BlowupReport {
            local_weights: names.iter().cloned().zip(b.local_weights.iter().copied()).collect(),
            tangents: b.tangents.clone(),
            valuations: b.valuations.iter().map(|&v| q(v)).collect(),
            grading,
            stack_row: b.stack_row.clone(),
            minus_k: pair(b.minus_k),
            discrepancy: q(b.discrepancy),
        }
    });
    if let (Some(b), Some(p)) = (&blowup, spec.annotations.asserted_minus_k) {
        if b.minus_k != p {
            warnings.push(format!(
                "adjunction gives -K = ({},{}) but the source asserts ({},{})",
                b.minus_k[0], b.minus_k[1], p[0], p[1]
            ));
        }
    }
    let curve = match (&out.blowup_model, spec.curve_spec(out.blowup.as_ref().map_or(Weight::new(1, 0), |b| b.minus_k))) {
        (Some(m), Some(cs)) => match curve_divisor_numbers(&m.cox, &cs) {
            Ok(n) => Some(CurveReport {
                c_e: q(n.c_e),
                c_d: q(n.c_d),
                c_k: q(n.c_k),
                excluded: cs.moves && family_mobility_exclusion(n.c_e, n.c_k),
            }),
            Err(e) => {
                warnings.push(format!("curve numbers unavailable: {e}"));
                None
            }
        },
        _ => None,
    };
    if let (Some(c), Some(expected)) = (&curve, &spec.annotations.curve_numbers) {
        let got = [c.c_e.clone(), c.c_d.clone(), c.c_k.clone()];
        if got != *expected {
            warnings.push(format!("curve numbers {got:?} differ from the annotated {expected:?}"));
        }
    }
    let steps: Vec<StepReport> = out.steps.iter().map(StepReport::from_step).collect();
    let advisory = advisory(spec, &steps);
    for a in &advisory {
        if !a.matches {
            warnings.push(format!(
                "printed flip label {} differs from derived {} (labels follow a different sign and ordering convention)",
                a.printed,
                a.derived.as_deref().unwrap_or("none")
            ));
        }
    }
    let verdict = out.verdict.tag.to_string();
    let expected = spec.annotations.expected_verdict.clone();
    let matches = expected.as_ref().map(|e| *e == verdict);
    let (final_variables, final_equations) = match &out.model {
        Some(m) => (
            (0..m.cox.len()).map(|i| (m.cox.name(i).to_string(), pair(m.cox.weight(i)))).collect(),
            m.display_equations(),
        ),
        None => (vec![], vec![]),
    };
    Ok(CaseReport {
        id: spec.id.clone(),
        verdict,
        expected,
        matches,
        evidence: out.verdict.evidence.clone(),
        blowup,
        cone: cone_report(&out),
        ambient_steps: out.ambient_steps.iter().map(StepReport::from_step).collect(),
        steps,
        unprojections: out
            .unprojections
            .iter()
            .map(|u| UnprojectionReport {
                kind: match u.kind {
                    UnprojectionKind::TwoRatio => "TwoRatio".into(),
                    UnprojectionKind::Triple => "Triple".into(),
                },
                ideal: u.ideal.clone(),
                name: u.name.clone(),
                weight: pair(u.weight),
                ratios: u.ratios.clone(),
                equations: u.equations.clone(),
            })
            .collect(),
        final_variables,
        final_equations,
        endpoint: out.endpoint.as_ref().map(|e| EndpointReport {
            contracted: e.contracted.clone(),
            variables: e.variables.clone(),
            weights: e.weights.clone(),
            equations: e.equations.clone(),
        }),
        curve,
        advisory,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub id: String,
    pub verdict: String,
    pub expected: Option<String>,
    pub matches: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub rows: Vec<SummaryRow>,
    pub mismatches: Vec<String>,
    pub advisory_mismatches: Vec<String>,
}

impl BatchSummary {
    pub fn all_match(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let mark = match r.matches {
                Some(true) => "ok",
                Some(false) => "MISMATCH",
                None => "-",
            };
            s.push_str(&format!(
                "{:<24} {:<36} {:<36} {}\n",
                r.id,
                r.verdict,
                r.expected.as_deref().unwrap_or("-"),
                mark
            ));
        }
        s.push_str(&format!("{} cases, {} mismatches\n", self.rows.len(), self.mismatches.len()));
        s
    }
}

/// Run every family; reports come back sorted by id so that the result does
/// not depend on input order.
pub fn run_batch(specs: &[FamilySpec], opts: RunOptions) -> Result<(Vec<CaseReport>, BatchSummary), SpecError> {
    let mut reports = std::thread::scope(|scope| {
        let handles: Vec<_> = specs.iter().map(|s| scope.spawn(move || run_family(s, opts))).collect();
        handles.into_iter().map(|h| h.join().expect("case thread panicked")).collect::<Result<Vec<_>, _>>()
    })?;
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    let rows = reports
        .iter()
        .map(|r| SummaryRow { id: r.id.clone(), verdict: r.verdict.clone(), expected: r.expected.clone(), matches: r.matches })
        .collect();
    let mismatches = reports.iter().filter(|r| r.matches == Some(false)).map(|r| r.id.clone()).collect();
    let advisory_mismatches = reports.iter().filter(|r| r.advisory.iter().any(|a| !a.matches)).map(|r| r.id.clone()).collect();
    Ok((reports, BatchSummary { rows, mismatches, advisory_mismatches }))
}

/// Exact test used by callers that need the typed tag.
pub fn is_tag(report: &CaseReport, tag: VerdictTag) -> bool {
    report.verdict == tag.to_string()
}

pub fn direction_name(d: Direction) -> String {
    d.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_parsing() {
        assert_eq!(parse_label("(-7,-1,1,8)"), Some(vec![-7, -1, 1, 8]));
        assert_eq!(parse_label("3x(-3,-1,1,5)"), Some(vec![-3, -1, 1, 5]));
        assert_eq!(parse_label("(2,1,-5,-3,-2;-8)"), Some(vec![2, 1, -5, -3, -2]));
        assert!(same_up_to_sign(&[-7, -1, 1, 8], &[7, 1, -1, -8]));
        assert!(!same_up_to_sign(&[-3, -1, 1, 5], &[4, 1, -1, -5]));
    }

    #[test]
    fn empty_batch() {
        let (reports, summary) = run_batch(&[], RunOptions::default()).unwrap();
        assert!(reports.is_empty());
        assert!(summary.all_match());
    }
}
