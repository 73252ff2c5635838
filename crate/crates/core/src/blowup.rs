//! Kawamata blow-up of a cyclic quotient point on a weighted complete
//! intersection, realized torically.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::cones::Weight;
use crate::cox::{normalize_stack_grading, CoxData, DivClass};
use crate::error::{Error, Result};
use crate::poly::{Monomial, SparsePoly, Q};

/// A point `1/r(1,a,r-a)` at the coordinate vertex of `variable`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularPoint {
    pub variable: usize,
    pub r: i64,
    pub a: i64,
}

impl SingularPoint {
    pub fn validate(&self, weights: &[i64]) -> Result<()> {
        if self.r < 2 || self.a <= 0 || self.a >= self.r || self.a.gcd(&self.r) != 1 {
            return Err(Error::InvalidPoint(format!("1/{}({}, {}, {}) is not a terminal germ", self.r, 1, self.a, self.r - self.a)));
        }
        match weights.get(self.variable) {
            Some(&w) if w == self.r => Ok(()),
            Some(&w) => Err(Error::InvalidPoint(format!("vertex weight {w} differs from r = {}", self.r))),
            None => Err(Error::InvalidPoint(String::from("point variable out of range"))),
        }
    }
}

/// Local blow-up weight of every ambient variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupAssignment {
    pub weights: Vec<i64>,
}

impl BlowupAssignment {
    /// `sum w_i e_i` over a monomial in the ambient variables.
    pub fn value(&self, m: &[u32]) -> i64 {
        m.iter().zip(&self.weights).map(|(&e, &w)| e as i64 * w).sum()
    }
}

/// Blow-up weights for each variable: residues, tangents, and the vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupResult {
    pub cox: CoxData,
    /// Proper transforms, with `u` as variable 0.
    pub equations: Vec<SparsePoly>,
    pub assignment: BlowupAssignment,
    pub tangents: Vec<usize>,
    pub valuations: Vec<Q>,
    pub exceptional: DivClass,
    pub minus_k: DivClass,
    pub discrepancy: Q,
    /// Unnormalized second row `(-r, w_i)` kept for audits.
    pub stack_row: Vec<i64>,
    pub warnings: Vec<String>,
}

/// `x_p^k * v` monomials of `eq`, returning the candidates `v`.
pub fn tangent_candidates(eq: &SparsePoly, point: &SingularPoint) -> Vec<usize> {
    let mut out = Vec::new();
    for m in eq.support() {
        if m[point.variable] == 0 {
            continue;
        }
        let others: Vec<usize> = (0..m.len()).filter(|&i| i != point.variable && m[i] > 0).collect();
        if others.len() == 1 && m[others[0]] == 1 && !out.contains(&others[0]) {
            out.push(others[0]);
        }
    }
    out.sort_unstable();
    out
}

/// The tangent variable of `eq` at the point: the designated one if given
/// (validated), else the first candidate.
pub fn find_tangent_variable(eq: &SparsePoly, point: &SingularPoint, equation: usize, designated: Option<usize>) -> Result<usize> {
    let cands = tangent_candidates(eq, point);
    match designated {
        Some(v) if cands.contains(&v) => Ok(v),
        Some(_) => Err(Error::NoTangentMonomial { equation }),
        None => cands.first().copied().ok_or(Error::NoTangentMonomial { equation }),
    }
}

/// `min over monomials of value / r`.
pub fn blowup_valuation(eq: &SparsePoly, assign: &BlowupAssignment, r: i64) -> Result<Q> {
    let v = eq.support().map(|m| assign.value(m)).min().ok_or(Error::EmptyPolynomial)?;
    Ok(Q::new(v, r))
}

/// Proper transform in the variables `(u, x_0, ..., x_n)`.
pub fn proper_transform(eq: &SparsePoly, assign: &BlowupAssignment, m: Q, r: i64) -> Result<SparsePoly> {
    let base = m * Q::from(r);
    if !base.is_integer() {
        return Err(Error::NonIntegralExponent);
    }
    let base = base.to_integer();
    let mut out = SparsePoly::zero(eq.nvars() + 1);
    for (mono, c) in eq.terms() {
        let d = assign.value(mono) - base;
        if d < 0 || d % r != 0 {
            return Err(Error::NonIntegralExponent);
        }
        let mut nm: Monomial = Vec::with_capacity(mono.len() + 1);
        nm.push((d / r) as u32);
        nm.extend_from_slice(mono);
        out.add_term(nm, *c);
    }
    Ok(out)
}

/// The standard criterion: `1/r(1,a,r-a)` is terminal iff `gcd(a,r) = 1`.
pub fn is_terminal_cyclic(r: i64, a: i64) -> bool {
    r >= 2 && a.gcd(&r) == 1
}

/// A three-dimensional cyclic quotient `1/r(w1,w2,w3)` is terminal iff,
/// up to order, `w1 + w2 = 0 mod r` with `w1` and `w3` units mod `r`.
pub fn is_terminal_quotient(r: i64, w: [i64; 3]) -> bool {
    if r <= 1 {
        return true;
    }
    let m: [i64; 3] = [w[0].rem_euclid(r), w[1].rem_euclid(r), w[2].rem_euclid(r)];
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        if (m[i] + m[j]) % r == 0 && m[i].gcd(&r) == 1 && m[k].gcd(&r) == 1 {
            return true;
        }
    }
    false
}

/// Tangent weights by a decreasing fixpoint: each `alpha_v` is the least
/// value of a `v`-free monomial of its equation, ignoring monomials whose
/// value is still unknown.
fn tangent_alphas(eqs: &[SparsePoly], tangents: &[usize], base: &[Option<i64>]) -> Vec<Option<i64>> {
    let mut cur: Vec<Option<i64>> = base.to_vec();
    for _ in 0..64 {
        let mut changed = false;
        for (j, &v) in tangents.iter().enumerate() {
            let mut best: Option<i64> = None;
            for m in eqs[j].support() {
                if m[v] > 0 {
                    continue;
                }
                let mut total = 0i64;
                let mut known = true;
                for (i, &e) in m.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    match cur[i] {
                        Some(w) => total += w * e as i64,
                        None => {
                            known = false;
                            break;
                        }
                    }
                }
                if known {
                    best = Some(best.map_or(total, |b: i64| b.min(total)));
                }
            }
            if let Some(b) = best {
                if cur[v].is_none_or(|old| b < old) {
                    cur[v] = Some(b);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    cur
}

pub struct BlowupInput<'a> {
    pub names: &'a [String],
    pub weights: &'a [i64],
    pub equations: &'a [SparsePoly],
    pub point: SingularPoint,
    pub designated_tangents: &'a [Option<usize>],
    pub local_weights_override: Option<&'a [i64]>,
    pub exceptional_name: &'a str,
}

pub fn kawamata_grading(input: &BlowupInput<'_>) -> Result<BlowupResult> {
    let n = input.weights.len();
    let p = input.point;
    p.validate(input.weights)?;
    let mut warnings = Vec::new();

    let mut tangents = Vec::with_capacity(input.equations.len());
    for (j, eq) in input.equations.iter().enumerate() {
        let designated = input.designated_tangents.get(j).copied().flatten();
        let v = find_tangent_variable(eq, &p, j, designated)?;
        if designated.is_none() && tangent_candidates(eq, &p).len() > 1 {
            warnings.push(format!("equation {j}: several tangent candidates, chose {}", input.names[v]));
        }
        if tangents.contains(&v) {
            return Err(Error::InvalidPoint(format!("variable {} is tangent for two equations", input.names[v])));
        }
        tangents.push(v);
    }

    let weights: Vec<i64> = match input.local_weights_override {
        Some(row) => {
            if row.len() != n {
                return Err(Error::InconsistentWeights(String::from("local weight override has wrong length")));
            }
            row.to_vec()
        }
        None => {
            let mut base: Vec<Option<i64>> = alloc::vec![None; n];
            base[p.variable] = Some(0);
            let mut residues = Vec::new();
            for (i, slot) in base.iter_mut().enumerate() {
                if i == p.variable || tangents.contains(&i) {
                    continue;
                }
                let res = input.weights[i].rem_euclid(p.r);
                if res == 0 {
                    return Err(Error::ResidueMismatch(format!(
                        "{} has weight divisible by r; supply local weights",
                        input.names[i]
                    )));
                }
                *slot = Some(res);
                residues.push(res);
            }
            let mut expect = alloc::vec![1, p.a, p.r - p.a];
            expect.sort_unstable();
            residues.sort_unstable();
            if residues != expect {
                return Err(Error::ResidueMismatch(format!("local residues {residues:?}, germ wants {expect:?}")));
            }
            let solved = tangent_alphas(input.equations, &tangents, &base);
            let mut row = Vec::with_capacity(n);
            for (i, w) in solved.iter().enumerate() {
                match w {
                    Some(w) => row.push(*w),
                    None => {
                        return Err(Error::ReducibleExceptional {
                            variable: i,
                            detail: String::from("no tangent-free monomial determines alpha"),
                        })
                    }
                }
            }
            for &v in &tangents {
                if row[v] <= 0 || (row[v] - input.weights[v]).rem_euclid(p.r) != 0 {
                    return Err(Error::ReducibleExceptional {
                        variable: v,
                        detail: format!("alpha = {} is not congruent to {} mod {}", row[v], input.weights[v], p.r),
                    });
                }
            }
            row
        }
    };
    let assignment = BlowupAssignment { weights };

    // Lemma-alpha consistency: every tangent monomial realizes the valuation.
    let mut valuations = Vec::with_capacity(input.equations.len());
    for (j, eq) in input.equations.iter().enumerate() {
        let m = blowup_valuation(eq, &assignment, p.r)?;
        let v = tangents[j];
        let tangent_value = assignment.weights[v];
        if Q::from(tangent_value) != m * Q::from(p.r) {
            return Err(Error::ReducibleExceptional {
                variable: v,
                detail: format!("valuation {m} differs from alpha/r = {}/{}", tangent_value, p.r),
            });
        }
        valuations.push(m);
    }

    let row1: Vec<i64> = core::iter::once(0).chain(input.weights.iter().copied()).collect();
    let stack_row: Vec<i64> = core::iter::once(-p.r).chain(assignment.weights.iter().copied()).collect();
    let row2 = normalize_stack_grading(&row1, &stack_row, p.r)?;
    let names: Vec<String> = core::iter::once(String::from(input.exceptional_name)).chain(input.names.iter().cloned()).collect();
    let ws: Vec<Weight> = row1.iter().zip(&row2).map(|(&a, &b)| Weight::new(a, b)).collect();
    let cox = CoxData::new(names, ws)?;

    let mut equations = Vec::with_capacity(input.equations.len());
    let mut degrees = Vec::with_capacity(input.equations.len());
    for (eq, m) in input.equations.iter().zip(&valuations) {
        let t = proper_transform(eq, &assignment, *m, p.r)?;
        degrees.push(cox.bidegree(&t)?);
        equations.push(t);
    }
    let minus_k = cox.adjunction_class(&degrees);
    Ok(BlowupResult {
        cox,
        equations,
        assignment,
        tangents,
        valuations,
        exceptional: Weight::new(0, 1),
        minus_k,
        discrepancy: Q::new(1, p.r),
        stack_row,
        warnings,
    })
}
