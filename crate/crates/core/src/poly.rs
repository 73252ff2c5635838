//! Sparse polynomials over "generic" coefficients.
//!
//! The engine reasons about supports: a coefficient is either an exact
//! rational or an unknown nonzero constant. Two unknown constants never
//! cancel, which is the standing genericity assumption for every equation.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::cones::Weight;
use crate::error::{Error, Result};

pub type Q = Ratio<i64>;
pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coeff {
    Generic,
    Exact(Q),
}

impl Coeff {
    pub fn one() -> Coeff {
        Coeff::Exact(Q::one())
    }

    fn add(self, other: Coeff) -> Option<Coeff> {
        match (self, other) {
            (Coeff::Exact(a), Coeff::Exact(b)) => {
                let s = a + b;
                if s.is_zero() {
                    None
                } else {
                    Some(Coeff::Exact(s))
                }
            }
            _ => Some(Coeff::Generic),
        }
    }

    fn mul(self, other: Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Coeff::Exact(a * b),
            _ => Coeff::Generic,
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Generic => f.write_str("c"),
            Coeff::Exact(q) => write!(f, "{q}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Coeff>,
}

pub fn monomial_degree(m: &[u32], weights: &[Weight]) -> Weight {
    m.iter().zip(weights).map(|(&e, &w)| w * e as i64).sum()
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(m: Monomial, c: Coeff) -> Self {
        let mut p = SparsePoly::zero(m.len());
        p.add_term(m, c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = alloc::vec![0; nvars];
        m[i] = 1;
        SparsePoly::monomial(m, Coeff::one())
    }

    /// Polynomial with the given support and generic coefficients.
    pub fn generic<I: IntoIterator<Item = Monomial>>(nvars: usize, support: I) -> Self {
        let mut p = SparsePoly::zero(nvars);
        for m in support {
            p.add_term(m, Coeff::Generic);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn contains(&self, m: &[u32]) -> bool {
        self.terms.contains_key(m)
    }

    pub fn coeff(&self, m: &[u32]) -> Option<Coeff> {
        self.terms.get(m).copied()
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        debug_assert_eq!(m.len(), self.nvars);
        if let Coeff::Exact(q) = c {
            if q.is_zero() {
                return;
            }
        }
        match self.terms.get(&m).copied() {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => match old.add(c) {
                Some(n) => {
                    self.terms.insert(m, n);
                }
                None => {
                    self.terms.remove(&m);
                }
            },
        }
    }

    pub fn remove_term(&mut self, m: &[u32]) -> Option<Coeff> {
        self.terms.remove(m)
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn scale(&self, c: Coeff) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (m, d) in &self.terms {
            out.add_term(m.clone(), d.mul(c));
        }
        out
    }

    pub fn neg(&self) -> SparsePoly {
        self.scale(Coeff::Exact(-Q::one()))
    }

    pub fn mul_monomial(&self, m: &[u32]) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (k, c) in &self.terms {
            let nm: Monomial = k.iter().zip(m).map(|(a, b)| a + b).collect();
            out.terms.insert(nm, *c);
        }
        out
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let m: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(m, ca.mul(*cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        let mut out = SparsePoly::monomial(alloc::vec![0; self.nvars], Coeff::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Divide every term by `m`; `None` if some term is not divisible.
    pub fn div_monomial(&self, m: &[u32]) -> Option<SparsePoly> {
        let mut out = SparsePoly::zero(self.nvars);
        for (k, c) in &self.terms {
            if !divides(m, k) {
                return None;
            }
            let nm: Monomial = k.iter().zip(m).map(|(a, b)| a - b).collect();
            out.terms.insert(nm, *c);
        }
        Some(out)
    }

    /// Terms accepted by `pred`.
    pub fn filter<F: Fn(&Monomial) -> bool>(&self, pred: F) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| pred(m)).map(|(m, c)| (m.clone(), *c)).collect(),
        }
    }

    pub fn min_exponent(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m[var]).min()
    }

    pub fn max_exponent(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m[var]).max()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m[var] > 0)
    }

    /// Set `var` to zero.
    pub fn set_zero(&self, var: usize) -> SparsePoly {
        self.filter(|m| m[var] == 0)
    }

    /// Set `var` to one (dehomogenize).
    pub fn set_one(&self, var: usize) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut nm = m.clone();
            nm[var] = 0;
            out.add_term(nm, *c);
        }
        out
    }

    /// Substitute `var := value`.
    pub fn substitute(&self, var: usize, value: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        let mut powers: Vec<SparsePoly> = Vec::new();
        for (m, c) in &self.terms {
            let e = m[var] as usize;
            let mut rest = m.clone();
            rest[var] = 0;
            if e == 0 {
                out.add_term(rest, *c);
                continue;
            }
            while powers.len() < e {
                let next = match powers.last() {
                    Some(p) => p.mul(value),
                    None => value.clone(),
                };
                powers.push(next);
            }
            let t = powers[e - 1].mul_monomial(&rest).scale(*c);
            out = out.add(&t);
        }
        out
    }

    /// Append new variables (exponent 0) at the end.
    pub fn extend_vars(&self, extra: usize) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars + extra);
        for (m, c) in &self.terms {
            let mut nm = m.clone();
            nm.resize(self.nvars + extra, 0);
            out.terms.insert(nm, *c);
        }
        out
    }

    /// Drop a variable that no longer occurs.
    pub fn drop_var(&self, var: usize) -> Result<SparsePoly> {
        let mut out = SparsePoly::zero(self.nvars - 1);
        for (m, c) in &self.terms {
            if m[var] != 0 {
                return Err(Error::InconsistentWeights(String::from(
                    "dropping a variable that still occurs",
                )));
            }
            let mut nm = m.clone();
            nm.remove(var);
            out.terms.insert(nm, *c);
        }
        Ok(out)
    }

    /// The common bidegree of all terms.
    pub fn bidegree(&self, weights: &[Weight]) -> Result<Weight> {
        let mut it = self.terms.keys();
        let first = it.next().ok_or(Error::EmptyPolynomial)?;
        let d = monomial_degree(first, weights);
        for m in it {
            let e = monomial_degree(m, weights);
            if e != d {
                return Err(Error::NotHomogeneous {
                    expected: (d.a, d.b),
                    found: (e.a, e.b),
                    monomial: m.clone(),
                });
            }
        }
        Ok(d)
    }

    /// Render with variable names; generic coefficients print as `c`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { p: self, names }
    }
}

pub struct PolyDisplay<'a> {
    p: &'a SparsePoly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return f.write_str("0");
        }
        // Highest total degree first reads more naturally.
        let mut terms: Vec<_> = self.p.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (i, (m, c)) in terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let mut wrote = false;
            if let Coeff::Exact(q) = c {
                if !q.is_one() || m.iter().all(|&e| e == 0) {
                    write!(f, "{q}")?;
                    wrote = true;
                }
            }
            for (v, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote {
                    f.write_str("*")?;
                }
                f.write_str(&self.names[v])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}

/// All exponent vectors of total weighted degree `d` for positive integer
/// weights.
pub fn monomials_of_degree(weights: &[i64], d: i64) -> Vec<Monomial> {
    fn rec(weights: &[i64], i: usize, left: i64, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[i];
        let mut e = 0;
        while e * w <= left {
            cur[i] = e as u32;
            rec(weights, i + 1, left - e * w, cur, out);
            e += 1;
            if w == 0 {
                break;
            }
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if d < 0 || weights.iter().any(|&w| w <= 0) {
        return out;
    }
    let mut cur = alloc::vec![0; weights.len()];
    rec(weights, 0, d, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn w(a: i64, b: i64) -> Weight {
        Weight::new(a, b)
    }

    #[test]
    fn generic_terms_never_cancel() {
        let mut p = SparsePoly::zero(2);
        p.add_term(vec![1, 0], Coeff::Generic);
        p.add_term(vec![1, 0], Coeff::Exact(-Q::one()));
        assert!(p.contains(&[1, 0]));
        let mut q = SparsePoly::zero(2);
        q.add_term(vec![1, 0], Coeff::one());
        q.add_term(vec![1, 0], Coeff::Exact(-Q::one()));
        assert!(q.is_zero());
    }

    #[test]
    fn bidegree_of_family64_equations() {
        // u z s t w y x
        let ws = [w(0, 1), w(5, 1), w(6, 1), w(7, 1), w(8, 1), w(2, 0), w(1, -1)];
        let f = SparsePoly::generic(7, [vec![0, 0, 2, 0, 0, 0, 0], vec![0, 1, 0, 1, 0, 0, 0]]);
        assert_eq!(f.bidegree(&ws).unwrap(), w(12, 2));
        let g = SparsePoly::generic(7, [vec![0, 0, 0, 0, 2, 0, 0]]);
        assert_eq!(g.bidegree(&ws).unwrap(), w(16, 2));
        let one = SparsePoly::monomial(vec![0; 7], Coeff::one());
        assert_eq!(one.bidegree(&ws).unwrap(), w(0, 0));
        let bad = SparsePoly::generic(7, [vec![0, 0, 2, 0, 0, 0, 0], vec![0, 0, 0, 0, 2, 0, 0]]);
        assert!(matches!(bad.bidegree(&ws), Err(Error::NotHomogeneous { .. })));
        assert_eq!(SparsePoly::zero(7).bidegree(&ws), Err(Error::EmptyPolynomial));
    }

    #[test]
    fn substitution_expands() {
        // x := y + z in x^2 gives three generic terms
        let x2 = SparsePoly::monomial(vec![2, 0, 0], Coeff::one());
        let v = SparsePoly::generic(3, [vec![0, 1, 0], vec![0, 0, 1]]);
        let s = x2.substitute(0, &v);
        assert_eq!(s.len(), 3);
        assert!(s.contains(&[0, 1, 1]));
    }

    #[test]
    fn enumerates_weighted_monomials() {
        let ms = monomials_of_degree(&[1, 1, 2], 2);
        assert_eq!(ms.len(), 4);
        assert!(monomials_of_degree(&[2], 3).is_empty());
    }

    #[test]
    fn dehomogenize_merges_terms() {
        let p = SparsePoly::generic(2, [vec![1, 1], vec![1, 2]]);
        assert_eq!(p.set_one(1).len(), 1);
        assert_eq!(p.set_zero(0).len(), 0);
    }
}
