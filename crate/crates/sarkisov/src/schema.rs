//! The family-file format and its conversion into engine input.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use sarkisov_core::blowup::SingularPoint;
use sarkisov_core::cones::Weight;
use sarkisov_core::cox::CoxData;
use sarkisov_core::game::{CaseInput, CaseSource, UnprojectionHint};
use sarkisov_core::intersect::{CurveChart, CurveSpec};
use sarkisov_core::poly::{monomials_of_degree, Monomial, SparsePoly};

/// Exponents keyed by variable name; unnamed variables have exponent zero.
pub type Exponents = BTreeMap<String, u32>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialSpec {
    pub exponents: Exponents,
    #[serde(default = "yes")]
    pub present: bool,
}

fn yes() -> bool {
    true
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationSpec {
    pub name: String,
    /// Start from every monomial of the degree, then drop the absent ones.
    #[serde(default, skip_serializing_if = "is_false")]
    pub complete: bool,
    #[serde(default)]
    pub monomials: Vec<MonomialSpec>,
    /// Partial exponent patterns; a monomial matching any of them is dropped.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub absent_patterns: Vec<Exponents>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSpec {
    pub variable: String,
    pub r: i64,
    pub a: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_weights: Option<BTreeMap<String, i64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HintSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_exponent: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eliminate: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub zero: Vec<String>,
    pub one: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFileSpec {
    pub equations: Vec<[i64; 2]>,
    pub e_chart: ChartSpec,
    pub d_chart: ChartSpec,
    pub e_class: [i64; 2],
    pub d_class: [i64; 2],
    /// `[k, d, e]` meaning `k(-K) = dD + eE`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<[i64; 3]>,
    pub moves: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricSpec {
    pub variables: Vec<String>,
    pub weights: Vec<[i64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipFlag {
    pub ray: [i64; 2],
    pub terminal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_verdict: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub printed_flips: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flip_terminal: Vec<FlipFlag>,
    /// Class the source asserts for `-K` of the blow-up.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asserted_minus_k: Option<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expected_unprojections: Vec<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_end: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve_numbers: Option<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ambient_weights: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub equations: Vec<EquationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<PointSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tangent: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "is_default_overrides")]
    pub overrides: Overrides,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hints: Vec<HintSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveFileSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cox: Option<ToricSpec>,
    #[serde(default)]
    pub annotations: Annotations,
}

fn is_default_overrides(o: &Overrides) -> bool {
    *o == Overrides::default()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecError {
    Schema(String),
    DegreeMismatch { equation: String, monomial: String, found: i64, expected: i64 },
    UnknownVariable(String),
    Invalid(String),
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Schema(s) => write!(f, "schema error: {s}"),
            SpecError::DegreeMismatch { equation, monomial, found, expected } => {
                write!(f, "degree mismatch in {equation}: {monomial} has degree {found}, expected {expected}")
            }
            SpecError::UnknownVariable(v) => write!(f, "unknown variable {v}"),
            SpecError::Invalid(s) => write!(f, "invalid family: {s}"),
        }
    }
}

impl std::error::Error for SpecError {}

pub fn parse_family(text: &str) -> Result<FamilySpec, SpecError> {
    let spec: FamilySpec = serde_json::from_str(text).map_err(|e| SpecError::Schema(e.to_string()))?;
    spec.validate()?;
    Ok(spec)
}

pub fn serialize_family(spec: &FamilySpec) -> String {
    serde_json::to_string_pretty(spec).expect("family specs always serialize")
}

fn render_exponents(e: &Exponents) -> String {
    if e.is_empty() {
        return "1".into();
    }
    e.iter().map(|(v, k)| if *k == 1 { v.clone() } else { format!("{v}^{k}") }).collect::<Vec<_>>().join("*")
}

impl FamilySpec {
    fn index(&self, name: &str) -> Result<usize, SpecError> {
        self.variables.iter().position(|v| v == name).ok_or_else(|| SpecError::UnknownVariable(name.into()))
    }

    fn to_monomial(&self, e: &Exponents) -> Result<Monomial, SpecError> {
        let mut m = vec![0u32; self.variables.len()];
        for (v, k) in e {
            m[self.index(v)?] = *k;
        }
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.cox.is_some() {
            return Ok(());
        }
        if self.ambient_weights.len() != self.variables.len() {
            return Err(SpecError::Invalid("ambient_weights and variables differ in length".into()));
        }
        if self.degrees.len() != self.equations.len() {
            return Err(SpecError::Invalid("one degree per equation is required".into()));
        }
        if self.degrees.windows(2).any(|w| w[0] > w[1]) {
            return Err(SpecError::Invalid("degrees must be nondecreasing".into()));
        }
        if self.ambient_weights.iter().skip(1).collect::<Vec<_>>().windows(2).any(|w| w[0] > w[1]) {
            return Err(SpecError::Invalid("ambient weights must be nondecreasing".into()));
        }
        for (eq, &d) in self.equations.iter().zip(&self.degrees) {
            for m in &eq.monomials {
                let mono = self.to_monomial(&m.exponents)?;
                let found: i64 = mono.iter().zip(&self.ambient_weights).map(|(&e, &w)| e as i64 * w).sum();
                if found != d {
                    return Err(SpecError::DegreeMismatch {
                        equation: eq.name.clone(),
                        monomial: render_exponents(&m.exponents),
                        found,
                        expected: d,
                    });
                }
            }
            for p in &eq.absent_patterns {
                self.to_monomial(p)?;
            }
        }
        if let Some(p) = &self.point {
            self.index(&p.variable)?;
        }
        for v in self.tangent.values() {
            self.index(v)?;
        }
        Ok(())
    }

    /// Supports of the equations after applying presence flags and patterns.
    pub fn equations(&self) -> Result<Vec<SparsePoly>, SpecError> {
        let n = self.variables.len();
        let mut out = Vec::new();
        for (eq, &d) in self.equations.iter().zip(&self.degrees) {
            let mut support: Vec<Monomial> = if eq.complete { monomials_of_degree(&self.ambient_weights, d) } else { Vec::new() };
            let patterns: Vec<Vec<Option<u32>>> = eq
                .absent_patterns
                .iter()
                .map(|p| {
                    let mut pat = vec![None; n];
                    for (v, k) in p {
                        pat[self.index(v)?] = Some(*k);
                    }
                    Ok(pat)
                })
                .collect::<Result<_, SpecError>>()?;
            support.retain(|m| !patterns.iter().any(|p| p.iter().zip(m).all(|(pe, &e)| pe.is_none_or(|k| k == e))));
            for m in &eq.monomials {
                let mono = self.to_monomial(&m.exponents)?;
                if m.present {
                    if !support.contains(&mono) {
                        support.push(mono);
                    }
                } else {
                    support.retain(|x| *x != mono);
                }
            }
            out.push(SparsePoly::generic(n, support));
        }
        Ok(out)
    }

    fn toric_cox(&self) -> Result<Option<CoxData>, SpecError> {
        match &self.cox {
            None => Ok(None),
            Some(t) => CoxData::new(t.variables.clone(), t.weights.iter().map(|w| Weight::new(w[0], w[1])).collect())
                .map(Some)
                .map_err(|e| SpecError::Invalid(e.to_string())),
        }
    }

    pub fn case_input(&self, max_unprojections: usize) -> Result<CaseInput, SpecError> {
        let source = match self.toric_cox()? {
            Some(cox) => CaseSource::Toric { cox },
            None => {
                let p = self.point.as_ref().ok_or_else(|| SpecError::Invalid("missing point".into()))?;
                let variable = self.index(&p.variable)?;
                let tangents = self
                    .equations
                    .iter()
                    .map(|e| self.tangent.get(&e.name).map(|v| self.index(v)).transpose())
                    .collect::<Result<Vec<_>, _>>()?;
                let local_weights = match &self.overrides.local_weights {
                    None => None,
                    Some(map) => {
                        let mut row = vec![0i64; self.variables.len()];
                        for (i, v) in self.variables.iter().enumerate() {
                            row[i] = *map.get(v).ok_or_else(|| SpecError::Invalid(format!("override misses {v}")))?;
                        }
                        Some(row)
                    }
                };
                CaseSource::Blowup {
                    names: self.variables.clone(),
                    weights: self.ambient_weights.clone(),
                    equations: self.equations()?,
                    point: SingularPoint { variable, r: p.r, a: p.a },
                    tangents,
                    local_weights,
                }
            }
        };
        Ok(CaseInput {
            source,
            hints: self
                .hints
                .iter()
                .map(|h| UnprojectionHint { name: h.name.clone(), target_exponent: h.target_exponent, eliminate: h.eliminate.clone() })
                .collect(),
            flip_terminal: self.annotations.flip_terminal.iter().map(|f| (Weight::new(f.ray[0], f.ray[1]), f.terminal)).collect(),
            max_unprojections,
            closure_depth: 2,
        })
    }

    pub fn curve_spec(&self, minus_k: Weight) -> Option<CurveSpec> {
        let c = self.curve.as_ref()?;
        let chart = |s: &ChartSpec| CurveChart { zero: s.zero.clone(), one: s.one.clone(), weights: s.weights.clone(), degrees: s.degrees.clone() };
        Some(CurveSpec {
            equations: c.equations.iter().map(|w| Weight::new(w[0], w[1])).collect(),
            e_chart: chart(&c.e_chart),
            d_chart: chart(&c.d_chart),
            e_class: Weight::new(c.e_class[0], c.e_class[1]),
            d_class: Weight::new(c.d_class[0], c.d_class[1]),
            minus_k,
            relation: c.relation.map(|r| (r[0], r[1], r[2])),
            moves: c.moves,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
        "id": "toy",
        "ambient_weights": [1, 1, 2],
        "variables": ["x", "y", "s"],
        "degrees": [4],
        "equations": [{"name": "f", "complete": true,
            "monomials": [{"exponents": {"s": 2}, "present": true}, {"exponents": {"x": 4}, "present": false}],
            "absent_patterns": [{"s": 1}]}],
        "point": {"variable": "s", "r": 2, "a": 1}
    }"#;

    #[test]
    fn supports_follow_flags_and_patterns() {
        let f = parse_family(SMALL).unwrap();
        let eqs = f.equations().unwrap();
        let e = &eqs[0];
        assert!(e.contains(&[0, 0, 2]));
        assert!(!e.contains(&[4, 0, 0]));
        assert!(!e.contains(&[1, 1, 1]));
        assert!(e.contains(&[3, 1, 0]));
    }

    #[test]
    fn degree_mismatch_named() {
        let bad = SMALL.replace(r#"{"s": 2}"#, r#"{"s": 1}"#);
        match parse_family(&bad) {
            Err(SpecError::DegreeMismatch { monomial, .. }) => assert_eq!(monomial, "s"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_family("{"), Err(SpecError::Schema(_))));
    }

    #[test]
    fn round_trip() {
        let f = parse_family(SMALL).unwrap();
        assert_eq!(parse_family(&serialize_family(&f)).unwrap(), f);
    }
}
