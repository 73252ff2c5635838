//! Fake divisors and the unprojection rewrites that remove them.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::cones::Weight;
use crate::cox::{CoxData, DivClass, EndKind};
use crate::error::{Error, Result};
use crate::poly::{divides, Coeff, Monomial, SparsePoly, Q};

/// A 3-fold presented by equations in a rank-2 toric ambient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub cox: CoxData,
    pub equations: Vec<SparsePoly>,
    /// Carried forward explicitly; equals adjunction while the model is a
    /// complete intersection.
    pub minus_k: DivClass,
    pub complete_intersection: bool,
}

impl Model {
    pub fn new(cox: CoxData, equations: Vec<SparsePoly>) -> Result<Model> {
        let mut degs = Vec::with_capacity(equations.len());
        for e in &equations {
            degs.push(cox.bidegree(e)?);
        }
        let minus_k = cox.adjunction_class(&degs);
        Ok(Model { cox, equations, minus_k, complete_intersection: true })
    }

    pub fn degrees(&self) -> Result<Vec<DivClass>> {
        self.equations.iter().map(|e| self.cox.bidegree(e)).collect()
    }

    /// Adjunction must reproduce the carried `-K` on complete intersections.
    pub fn check_canonical(&self) -> Result<()> {
        if !self.complete_intersection {
            return Ok(());
        }
        let k = self.cox.adjunction_class(&self.degrees()?);
        if k != self.minus_k {
            return Err(Error::InconsistentWeights(format!("adjunction gives {k}, carried class is {}", self.minus_k)));
        }
        Ok(())
    }

    pub fn display_equations(&self) -> Vec<String> {
        self.equations.iter().map(|e| format!("{}", e.display(self.cox.names()))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnprojectionKind {
    TwoRatio,
    Triple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnprojectionStep {
    pub kind: UnprojectionKind,
    pub ideal: Vec<String>,
    pub name: String,
    pub weight: Weight,
    /// `(numerator, denominator variable)` pairs, rendered.
    pub ratios: Vec<(String, String)>,
    pub equations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FakeDivisor {
    pub set: Vec<usize>,
    /// Equations after substitution closure, same indexing as the model.
    pub closed: Vec<SparsePoly>,
    /// Indices of closed equations lying in the ideal of `set`.
    pub in_ideal: Vec<usize>,
}

pub fn monomial_in_ideal(m: &[u32], set: &[usize]) -> bool {
    set.iter().any(|&v| m[v] > 0)
}

pub fn poly_in_ideal(p: &SparsePoly, set: &[usize]) -> bool {
    !p.is_zero() && p.support().all(|m| monomial_in_ideal(m, set))
}

fn quotient(b: &[u32], q: &[u32]) -> Monomial {
    b.iter().zip(q).map(|(x, y)| x - y).collect()
}

/// Rewrite `eq` modulo `pivot = c*q + rest`: each monomial `b` accepted by
/// `wants` and divisible by `q` becomes `(b/q) * rest` with generic sign.
fn substitute_pivot<F: Fn(&Monomial) -> bool>(eq: &SparsePoly, pivot: &SparsePoly, q: &Monomial, wants: F) -> SparsePoly {
    let rest = {
        let mut r = pivot.clone();
        r.remove_term(q);
        r
    };
    let mut out = eq.clone();
    let targets: Vec<Monomial> = eq.support().filter(|b| wants(b) && divides(q, b)).cloned().collect();
    for b in targets {
        out.remove_term(&b);
        let add = rest.mul_monomial(&quotient(&b, q)).scale(Coeff::Generic);
        out = out.add(&add);
    }
    out
}

/// Syntactic substitution closure: an equation with a single monomial `q`
/// outside the ideal of `set` is used to rewrite every other equation's
/// outside monomials divisible by `q`.
pub fn substitution_closure(eqs: &[SparsePoly], set: &[usize], depth: usize) -> Vec<SparsePoly> {
    let mut cur = eqs.to_vec();
    for _ in 0..depth {
        let mut changed = false;
        for k in 0..cur.len() {
            let bad: Vec<Monomial> = cur[k].support().filter(|m| !monomial_in_ideal(m, set)).cloned().collect();
            if bad.len() != 1 {
                continue;
            }
            let q = &bad[0];
            for j in 0..cur.len() {
                if j == k {
                    continue;
                }
                let next = substitute_pivot(&cur[j], &cur[k], q, |b| !monomial_in_ideal(b, set));
                if next != cur[j] {
                    cur[j] = next;
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

/// Look for a component of the irrelevant ideal of some chamber whose zero
/// locus on the 3-fold has dimension two.
pub fn detect_fake_divisor(model: &Model, depth: usize) -> Result<Option<FakeDivisor>> {
    let n = model.cox.len();
    let codim = n.saturating_sub(5);
    let mob = model.cox.mobile_cone()?;
    let chambers = model.cox.git_chambers()?;
    let last = chambers.len().saturating_sub(1);
    let mut seen: Vec<Vec<usize>> = Vec::new();
    for (i, ch) in chambers.iter().enumerate() {
        for (right, side) in [(false, &ch.left), (true, &ch.right)] {
            if side.len() < 2 {
                continue;
            }
            // The locus away from a fibration ray is cut by degree alone; a
            // generically finite fibration there is classified at the end
            // of the game instead.
            let fibre_side = (!right && i == last && mob.end == EndKind::Fibration)
                || (right && i == 0 && mob.start == EndKind::Fibration);
            if fibre_side {
                continue;
            }
            let mut set = side.clone();
            set.sort_unstable();
            if seen.contains(&set) {
                continue;
            }
            seen.push(set.clone());
            let closed = substitution_closure(&model.equations, &set, depth);
            let in_ideal: Vec<usize> = (0..closed.len()).filter(|&j| poly_in_ideal(&closed[j], &set)).collect();
            let cutting = closed.len() - in_ideal.len();
            if n as i64 - set.len() as i64 - cutting.min(codim) as i64 >= 4 {
                // priority order for splits: the exceptional variable first
                let mut ordered = side.clone();
                ordered.sort_by_key(|&v| (v != 0, v));
                return Ok(Some(FakeDivisor { set: ordered, closed, in_ideal }));
            }
        }
    }
    Ok(None)
}

fn render_ratio(num: &SparsePoly, den: &str, names: &[String]) -> (String, String) {
    (format!("{}", num.display(names)), String::from(den))
}

/// Raise the `p`-exponent of the `q`-free monomials of `eq` to `target`
/// by rewriting with pivots taken from the other equations.
fn raise_exponent(eqs: &[SparsePoly], eq: usize, q: usize, p: usize, target: u32) -> Result<SparsePoly> {
    let ok = |m: &Monomial| m[q] > 0 || m[p] >= target;
    let mut cur = eqs[eq].clone();
    for _ in 0..4 {
        let bad: Vec<Monomial> = cur.support().filter(|m| !ok(m)).cloned().collect();
        if bad.is_empty() {
            return Ok(cur);
        }
        for b in bad {
            let mut done = false;
            for (k, piv) in eqs.iter().enumerate() {
                if k == eq {
                    continue;
                }
                for qm in piv.support() {
                    if !divides(qm, &b) {
                        continue;
                    }
                    let scale = quotient(&b, qm);
                    let clean = piv.support().filter(|m| *m != qm).all(|m| {
                        let prod: Monomial = m.iter().zip(&scale).map(|(x, y)| x + y).collect();
                        ok(&prod)
                    });
                    if clean {
                        let qm = qm.clone();
                        cur = substitute_pivot(&cur, piv, &qm, |x| *x == b);
                        done = true;
                        break;
                    }
                }
                if done {
                    break;
                }
            }
            if !done {
                return Err(Error::NoValidSplit(format!("no pivot lifts a monomial to exponent {target}")));
            }
        }
    }
    Err(Error::NoValidSplit(String::from("exponent lifting did not terminate")))
}

/// Split `eq = p^i A + q B` over the ideal `(q, p)` and introduce
/// `rho = A/q = -B/p^i`.
pub fn unproject_two_ratio(model: &Model, eq: usize, set: &[usize], target: Option<u32>, name: &str) -> Result<(Model, UnprojectionStep)> {
    if set.len() != 2 {
        return Err(Error::NoValidSplit(format!("two-ratio split needs two variables, got {}", set.len())));
    }
    let q = if set.contains(&0) { 0 } else { set[0] };
    let p = if set[0] == q { set[1] } else { set[0] };
    let poly = match target {
        Some(t) => raise_exponent(&model.equations, eq, q, p, t)?,
        None => model.equations[eq].clone(),
    };
    if !poly_in_ideal(&poly, &[q, p]) {
        return Err(Error::NoValidSplit(String::from("equation is not in the ideal")));
    }
    let u0 = poly.filter(|m| m[q] == 0);
    let rest = poly.filter(|m| m[q] > 0);
    if u0.is_zero() || rest.is_zero() {
        return Err(Error::NoValidSplit(String::from("one side of the split is empty")));
    }
    let i = u0.min_exponent(p).unwrap_or(0);
    let n = model.cox.len();
    let mut pi: Monomial = alloc::vec![0; n];
    pi[p] = i;
    let mut qm: Monomial = alloc::vec![0; n];
    qm[q] = 1;
    let a = u0.div_monomial(&pi).ok_or_else(|| Error::NoValidSplit(String::from("p-part not divisible")))?;
    let b = rest.div_monomial(&qm).ok_or_else(|| Error::NoValidSplit(String::from("q-part not divisible")))?;
    let deg = model.cox.bidegree(&poly)?;
    let rho = deg - model.cox.weight(p) * i as i64 - model.cox.weight(q);
    let da = model.cox.bidegree(&a)?;
    let db = model.cox.bidegree(&b)?;
    if da - model.cox.weight(q) != rho || db - model.cox.weight(p) * i as i64 != rho {
        return Err(Error::InconsistentWeights(format!("ratio degrees {da} and {db} disagree")));
    }
    let cox = model.cox.with_variable(String::from(name), rho)?;
    let a = a.extend_vars(1);
    let b = b.extend_vars(1);
    let mut rq: Monomial = alloc::vec![0; n + 1];
    rq[n] = 1;
    rq[q] = 1;
    let mut rp: Monomial = alloc::vec![0; n + 1];
    rp[n] = 1;
    rp[p] = i;
    let e1 = SparsePoly::monomial(rq, Coeff::one()).add(&a.neg());
    let e2 = SparsePoly::monomial(rp, Coeff::one()).add(&b);
    let mut equations: Vec<SparsePoly> = model.equations.iter().map(|e| e.extend_vars(1)).collect();
    equations[eq] = e1;
    equations.push(e2);
    let out = Model { cox, equations, minus_k: model.minus_k, complete_intersection: model.complete_intersection };
    out.check_canonical()?;
    let names = out.cox.names();
    let step = UnprojectionStep {
        kind: UnprojectionKind::TwoRatio,
        ideal: alloc::vec![String::from(model.cox.name(q)), String::from(model.cox.name(p))],
        name: String::from(name),
        weight: rho,
        ratios: alloc::vec![
            render_ratio(&a, model.cox.name(q), names),
            render_ratio(&b.neg(), &pow_name(model.cox.name(p), i), names),
        ],
        equations: out.display_equations(),
    };
    Ok((out, step))
}

fn pow_name(v: &str, i: u32) -> String {
    if i == 1 {
        String::from(v)
    } else {
        format!("{v}^{i}")
    }
}

/// Write `e = sum v_k c_k` over the ideal of `set`, assigning each monomial
/// to the first variable of `set` dividing it.
fn decompose(e: &SparsePoly, set: &[usize]) -> Result<Vec<SparsePoly>> {
    let n = e.nvars();
    let mut parts: Vec<SparsePoly> = set.iter().map(|_| SparsePoly::zero(n)).collect();
    for (m, c) in e.terms() {
        let k = set.iter().position(|&v| m[v] > 0).ok_or_else(|| Error::NoValidSplit(String::from("equation leaves the ideal")))?;
        let mut mm = m.clone();
        mm[set[k]] -= 1;
        parts[k].add_term(mm, *c);
    }
    Ok(parts)
}

/// Two equations in the ideal of three variables `v`: the vector `v` is
/// proportional to `c1 x c2`, and the factor `eta` is a new generator.
pub fn unproject_triple(model: &Model, eqs: [usize; 2], set: &[usize], name: &str) -> Result<(Model, UnprojectionStep)> {
    if set.len() != 3 {
        return Err(Error::NoValidSplit(format!("triple split needs three variables, got {}", set.len())));
    }
    let c1 = decompose(&model.equations[eqs[0]], set)?;
    let c2 = decompose(&model.equations[eqs[1]], set)?;
    let cross = |i: usize, j: usize| c1[i].mul(&c2[j]).add(&c1[j].mul(&c2[i]).neg());
    let x = [cross(1, 2), cross(2, 0), cross(0, 1)];
    let d1 = model.cox.bidegree(&model.equations[eqs[0]])?;
    let d2 = model.cox.bidegree(&model.equations[eqs[1]])?;
    let eta = d1 + d2 - set.iter().map(|&v| model.cox.weight(v)).sum();
    for (k, xk) in x.iter().enumerate() {
        if xk.is_zero() {
            return Err(Error::NoValidSplit(format!("ratio over {} vanishes", model.cox.name(set[k]))));
        }
        let d = model.cox.bidegree(xk)?;
        if d - model.cox.weight(set[k]) != eta {
            return Err(Error::InconsistentWeights(format!("ratio over {} has degree {d}", model.cox.name(set[k]))));
        }
    }
    let n = model.cox.len();
    let cox = model.cox.with_variable(String::from(name), eta)?;
    let mut equations: Vec<SparsePoly> = model.equations.iter().map(|e| e.extend_vars(1)).collect();
    let mut ratios = Vec::new();
    for (k, xk) in x.iter().enumerate() {
        let mut m: Monomial = alloc::vec![0; n + 1];
        m[n] = 1;
        m[set[k]] = 1;
        let xe = xk.extend_vars(1);
        ratios.push(render_ratio(&xe, model.cox.name(set[k]), cox.names()));
        equations.push(SparsePoly::monomial(m, Coeff::one()).add(&xe.neg()));
    }
    let out = Model { cox, equations, minus_k: model.minus_k, complete_intersection: false };
    let step = UnprojectionStep {
        kind: UnprojectionKind::Triple,
        ideal: set.iter().map(|&v| String::from(model.cox.name(v))).collect(),
        name: String::from(name),
        weight: eta,
        ratios,
        equations: out.display_equations(),
    };
    Ok((out, step))
}

/// Solve an equation `c*v + rest = 0` (with `v` absent from `rest`) for `v`
/// and substitute it everywhere, dropping the variable and the equation.
pub fn eliminate_linear(model: &Model, var: usize) -> Result<Model> {
    let n = model.cox.len();
    let mut lone: Monomial = alloc::vec![0; n];
    lone[var] = 1;
    let j = model
        .equations
        .iter()
        .position(|e| e.contains(&lone) && e.support().filter(|m| m[var] > 0).count() == 1)
        .ok_or(Error::NotLinearlySolvable { variable: var })?;
    let eq = &model.equations[j];
    let c = eq.coeff(&lone).ok_or(Error::NotLinearlySolvable { variable: var })?;
    let mut rest = eq.clone();
    rest.remove_term(&lone);
    let value = match c {
        Coeff::Exact(c) => rest.scale(Coeff::Exact(-Q::from(1) / c)),
        Coeff::Generic => rest.scale(Coeff::Generic),
    };
    let mut equations = Vec::with_capacity(model.equations.len() - 1);
    for (k, e) in model.equations.iter().enumerate() {
        if k == j {
            continue;
        }
        let s = if e.involves(var) { e.substitute(var, &value) } else { e.clone() };
        if s.is_zero() {
            continue;
        }
        equations.push(s.drop_var(var)?);
    }
    let cox = model.cox.without_variable(var)?;
    let out = Model { cox, equations, minus_k: model.minus_k, complete_intersection: model.complete_intersection };
    out.check_canonical()?;
    Ok(out)
}

/// Set `var = 1` and forget it; used to present an endpoint chart.
pub fn specialize_one(model: &Model, var: usize) -> Result<(Vec<String>, Vec<i64>, Vec<SparsePoly>)> {
    let mut names = Vec::new();
    let mut eqs = Vec::new();
    for e in &model.equations {
        eqs.push(e.set_one(var).drop_var(var)?);
    }
    let wv = model.cox.weight(var);
    let mut weights = Vec::new();
    for i in 0..model.cox.len() {
        if i == var {
            continue;
        }
        names.push(String::from(model.cox.name(i)));
        weights.push(model.cox.weight(i).cross(wv).abs());
    }
    Ok((names, weights, eqs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn cox(names: &str, ws: &[(i64, i64)]) -> CoxData {
        CoxData::new(names.split(' ').map(|s| s.to_string()).collect(), ws.iter().map(|&(a, b)| Weight::new(a, b)).collect()).unwrap()
    }

    fn mono(e: &[u32]) -> Monomial {
        e.to_vec()
    }

    /// X_5 general after blow-up, variables u s y z t x:
    /// s^2 x + s y^3 + u y^5 shape (one representative per block).
    fn x5_general() -> Model {
        let c = cox("u s y z t x", &[(0, 1), (2, 1), (1, 0), (1, 0), (1, 0), (1, -1)]);
        let f = SparsePoly::generic(6, [mono(&[0, 2, 0, 0, 0, 1]), mono(&[0, 1, 3, 0, 0, 0]), mono(&[0, 1, 0, 1, 2, 0]), mono(&[1, 0, 5, 0, 0, 0]), mono(&[2, 0, 4, 0, 0, 1])]);
        Model::new(c, vec![f]).unwrap()
    }

    #[test]
    fn x5_fake_divisor_and_unprojection() {
        let m = x5_general();
        assert_eq!(m.minus_k, Weight::new(1, 0));
        let fd = detect_fake_divisor(&m, 2).unwrap().unwrap();
        assert_eq!(fd.set, vec![0, 1]);
        let (m2, step) = unproject_two_ratio(&m, 0, &fd.set, None, "r").unwrap();
        assert_eq!(step.weight, Weight::new(3, -1));
        assert_eq!(m2.equations.len(), 2);
        assert_eq!(m2.minus_k, Weight::new(1, 0));
        m2.check_canonical().unwrap();
        assert!(detect_fake_divisor(&m2, 2).unwrap().is_none());
    }

    #[test]
    fn closure_substitutes_single_outside_monomial() {
        // variables u z s t w r: pivot r u + z w + s t, target s t x-free
        let set = [0, 1];
        let piv = SparsePoly::generic(6, [mono(&[1, 0, 0, 0, 0, 1]), mono(&[0, 1, 0, 0, 1, 0]), mono(&[0, 0, 1, 1, 0, 0])]);
        let e = SparsePoly::generic(6, [mono(&[0, 0, 2, 2, 0, 0]), mono(&[1, 0, 0, 0, 2, 0])]);
        let out = substitution_closure(&[e.clone(), piv], &set, 2);
        assert!(!poly_in_ideal(&e, &set));
        assert!(poly_in_ideal(&out[0], &set));
    }

    #[test]
    fn triple_with_unit_coefficients() {
        let c = cox("u z s x y", &[(0, 1), (1, 1), (2, 1), (1, 0), (1, 0)]);
        // identical equations give a vanishing cross product
        let e1 = SparsePoly::generic(5, [mono(&[1, 0, 0, 0, 0]), mono(&[0, 1, 0, 0, 0]), mono(&[0, 0, 1, 0, 0])]);
        let c_bad = Model { cox: c.clone(), equations: vec![e1.clone(), e1.clone()], minus_k: Weight::ZERO, complete_intersection: true };
        assert!(unproject_triple(&c_bad, [0, 1], &[0, 1, 2], "eta").is_err());
        // e1 = u x^2 + z x + s, e2 = u x^2 y + z x y + s y + z y^2
        let e1 = SparsePoly::generic(5, [mono(&[1, 0, 0, 2, 0]), mono(&[0, 1, 0, 1, 0]), mono(&[0, 0, 1, 0, 0])]);
        let e2 = SparsePoly::generic(5, [mono(&[1, 0, 0, 2, 1]), mono(&[0, 1, 0, 1, 1]), mono(&[0, 0, 1, 0, 1]), mono(&[0, 1, 0, 0, 2])]);
        let m = Model { cox: c, equations: vec![e1, e2], minus_k: Weight::ZERO, complete_intersection: true };
        let (m2, step) = unproject_triple(&m, [0, 1], &[0, 1, 2], "eta").unwrap();
        assert_eq!(step.weight, Weight::new(2, -1));
        assert_eq!(m2.equations.len(), 5);
        assert!(!m2.complete_intersection);
    }

    #[test]
    fn elimination() {
        // variables a b c with b appearing alone in the first equation
        let c = cox("a b c", &[(1, 0), (2, 0), (0, 1)]);
        let e1 = SparsePoly::generic(3, [mono(&[0, 1, 0]), mono(&[2, 0, 0])]);
        let e2 = SparsePoly::generic(3, [mono(&[0, 2, 1]), mono(&[4, 0, 1])]);
        let m = Model::new(c, vec![e1, e2]).unwrap();
        let k = m.minus_k;
        let out = eliminate_linear(&m, 1).unwrap();
        assert_eq!(out.equations.len(), 1);
        assert_eq!(out.cox.len(), 2);
        assert_eq!(out.minus_k, k);
        assert!(out.equations[0].contains(&[4, 1]));
        assert_eq!(eliminate_linear(&out, 0), Err(Error::NotLinearlySolvable { variable: 0 }));
    }
}
