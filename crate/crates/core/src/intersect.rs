//! Weighted Bezout counts and the mobility test for covering curve families.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::cones::Weight;
use crate::cox::{CoxData, DivClass};
use crate::error::{Error, Result};
use crate::poly::Q;

/// Degree of a zero-dimensional complete intersection in a weighted
/// projective space: `prod(degrees) / prod(weights)`.
pub fn weighted_bezout(degrees: &[Q], weights: &[i64]) -> Result<Q> {
    if degrees.len() + 1 != weights.len() || weights.iter().any(|&w| w <= 0) {
        return Err(Error::DimensionMismatch { equations: degrees.len(), weights: weights.len() });
    }
    let num: Q = degrees.iter().product();
    let den: i64 = weights.iter().product();
    Ok(num / Q::from(den))
}

/// A localization of the curve: some variables set to zero, one set to 1,
/// the rest forming a weighted projective space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveChart {
    pub zero: Vec<String>,
    pub one: String,
    /// Residual weights as worked out by hand; required.
    pub weights: Option<Vec<i64>>,
    /// Residual equation degrees; computed from the grading when absent.
    pub degrees: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSpec {
    /// Classes of the equations cutting the curve inside the ambient.
    pub equations: Vec<DivClass>,
    pub e_chart: CurveChart,
    pub d_chart: CurveChart,
    pub e_class: DivClass,
    pub d_class: DivClass,
    pub minus_k: DivClass,
    /// `(k, d, e)` with `k(-K) = dD + eE`, checked against the classes.
    pub relation: Option<(i64, i64, i64)>,
    /// The curve moves in a family of dimension at least one.
    pub moves: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveNumbers {
    pub c_e: Q,
    pub c_d: Q,
    pub c_k: Q,
}

/// Residual weights and degrees of a chart, from the grading.
pub fn chart_data(cox: &CoxData, equations: &[DivClass], chart: &CurveChart) -> Result<(Vec<i64>, Vec<i64>)> {
    let one = cox.index_of(&chart.one)?;
    let mut zero = Vec::new();
    for z in &chart.zero {
        zero.push(cox.index_of(z)?);
    }
    let w1 = cox.weight(one);
    let weights: Vec<i64> = (0..cox.len())
        .filter(|i| *i != one && !zero.contains(i))
        .map(|i| cox.weight(i).cross(w1).abs())
        .collect();
    let degrees: Vec<i64> = equations.iter().map(|d| d.cross(w1).abs()).collect();
    Ok((weights, degrees))
}

/// Count the points of the curve in one chart, checking the declared
/// residual data against the grading.
pub fn chart_count(cox: &CoxData, equations: &[DivClass], chart: &CurveChart) -> Result<Q> {
    let declared = chart
        .weights
        .as_ref()
        .ok_or_else(|| Error::ChartUnderspecified(format!("chart at {} = 1 lists no weights", chart.one)))?;
    let (weights, degrees) = chart_data(cox, equations, chart)?;
    if *declared != weights {
        return Err(Error::InconsistentWeights(format!(
            "chart at {} = 1 declares weights {declared:?}, grading gives {weights:?}",
            chart.one
        )));
    }
    if let Some(d) = &chart.degrees {
        if *d != degrees {
            return Err(Error::InconsistentWeights(format!(
                "chart at {} = 1 declares degrees {d:?}, grading gives {degrees:?}",
                chart.one
            )));
        }
    }
    let degs: Vec<Q> = degrees.iter().map(|&d| Q::from(d)).collect();
    weighted_bezout(&degs, &weights)
}

/// Coefficients `(a, b)` with `target = a*d + b*e`.
fn solve_in_basis(target: Weight, d: Weight, e: Weight) -> Option<(Q, Q)> {
    let det = d.cross(e);
    if det == 0 {
        return None;
    }
    let a = Q::new(target.cross(e), det);
    let b = Q::new(d.cross(target), det);
    Some((a, b))
}

/// Intersection of the curve with any class, given `C.D` and `C.E`.
pub fn curve_class_number(numbers: &CurveNumbers, spec: &CurveSpec, class: DivClass) -> Result<Q> {
    if class.is_zero() {
        return Ok(Q::from(0));
    }
    let (a, b) = solve_in_basis(class, spec.d_class, spec.e_class)
        .ok_or_else(|| Error::InconsistentWeights(String::from("D and E are proportional")))?;
    Ok(a * numbers.c_d + b * numbers.c_e)
}

pub fn curve_divisor_numbers(cox: &CoxData, spec: &CurveSpec) -> Result<CurveNumbers> {
    let c_e = chart_count(cox, &spec.equations, &spec.e_chart)?;
    let c_d = chart_count(cox, &spec.equations, &spec.d_chart)?;
    if let Some((k, d, e)) = spec.relation {
        if spec.minus_k * k != spec.d_class * d + spec.e_class * e {
            return Err(Error::InconsistentWeights(format!("{k}(-K) is not {d}D + {e}E at class level")));
        }
    }
    let mut out = CurveNumbers { c_e, c_d, c_k: Q::from(0) };
    out.c_k = curve_class_number(&out, spec, spec.minus_k)?;
    Ok(out)
}

/// A covering family with `C.E > 0` and `C.(-K) <= 0` rules the centre out.
pub fn family_mobility_exclusion(c_e: Q, c_k: Q) -> bool {
    c_e > Q::from(0) && c_k <= Q::from(0)
}
