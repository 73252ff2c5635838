//! Rank-2 Cox data: graded variables, the mobile cone and its GIT chambers.

use alloc::string::String;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::cones::{sort_rays_clockwise, Cone2, RayGroup, Weight};
use crate::error::{Error, Result};
use crate::poly::SparsePoly;

/// A divisor class in the rank-2 class group.
pub type DivClass = Weight;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxData {
    names: Vec<String>,
    weights: Vec<Weight>,
    groups: Vec<RayGroup>,
}

/// How the game ends on one side of the mobile cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndKind {
    /// Several variables share the extreme ray.
    Fibration,
    /// A lone variable beyond the extreme ray is contracted.
    Divisorial { contracted: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobileCone {
    pub cone: Cone2,
    pub start_group: usize,
    pub end_group: usize,
    pub start: EndKind,
    pub end: EndKind,
}

/// Nef chamber between two consecutive sorted rays, with the two
/// components of its irrelevant ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    pub cone: Cone2,
    pub left_group: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl CoxData {
    pub fn new(names: Vec<String>, weights: Vec<Weight>) -> Result<CoxData> {
        if names.len() != weights.len() {
            return Err(Error::InconsistentWeights(String::from("names and weights differ in length")));
        }
        let groups = sort_rays_clockwise(&weights)?;
        Ok(CoxData { names, weights, groups })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> Weight {
        self.weights[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownVariable(String::from(name)))
    }

    pub fn groups(&self) -> &[RayGroup] {
        &self.groups
    }

    /// Index of the sorted group containing variable `v`.
    pub fn group_of(&self, v: usize) -> usize {
        self.groups.iter().position(|g| g.variables.contains(&v)).expect("every variable is grouped")
    }

    pub fn with_variable(&self, name: String, w: Weight) -> Result<CoxData> {
        let mut names = self.names.clone();
        let mut weights = self.weights.clone();
        names.push(name);
        weights.push(w);
        CoxData::new(names, weights)
    }

    pub fn without_variable(&self, v: usize) -> Result<CoxData> {
        let mut names = self.names.clone();
        let mut weights = self.weights.clone();
        names.remove(v);
        weights.remove(v);
        CoxData::new(names, weights)
    }

    pub fn bidegree(&self, p: &SparsePoly) -> Result<DivClass> {
        p.bidegree(&self.weights)
    }

    pub fn anticanonical_class(&self) -> DivClass {
        anticanonical_class(&self.weights)
    }

    pub fn adjunction_class(&self, equation_degrees: &[DivClass]) -> DivClass {
        adjunction_class(&self.weights, equation_degrees)
    }

    /// gcd of all nonzero 2x2 minors of the grading matrix.
    pub fn well_formedness(&self) -> i64 {
        let mut g = 0i64;
        for i in 0..self.weights.len() {
            for j in i + 1..self.weights.len() {
                g = g.gcd(&self.weights[i].cross(self.weights[j]));
            }
        }
        g
    }

    pub fn mobile_cone(&self) -> Result<MobileCone> {
        let gs = &self.groups;
        if gs.len() < 3 {
            return Err(Error::FewerThanThreeRayGroups);
        }
        let last = gs.len() - 1;
        let (start_group, start) = if gs[0].variables.len() >= 2 {
            (0, EndKind::Fibration)
        } else {
            (1, EndKind::Divisorial { contracted: gs[0].variables[0] })
        };
        let (end_group, end) = if gs[last].variables.len() >= 2 {
            (last, EndKind::Fibration)
        } else {
            (last - 1, EndKind::Divisorial { contracted: gs[last].variables[0] })
        };
        if start_group >= end_group {
            return Err(Error::DegenerateMobileCone);
        }
        let cone = Cone2::new(gs[start_group].ray, gs[end_group].ray)?;
        Ok(MobileCone { cone, start_group, end_group, start, end })
    }

    pub fn git_chambers(&self) -> Result<Vec<Chamber>> {
        let mob = self.mobile_cone()?;
        let mut out = Vec::new();
        for i in mob.start_group..mob.end_group {
            let left: Vec<usize> = self.groups[..=i].iter().flat_map(|g| g.variables.iter().copied()).collect();
            let right: Vec<usize> = self.groups[i + 1..].iter().flat_map(|g| g.variables.iter().copied()).collect();
            out.push(Chamber {
                cone: Cone2::new(self.groups[i].ray, self.groups[i + 1].ray)?,
                left_group: i,
                left,
                right,
            });
        }
        Ok(out)
    }
}

pub fn anticanonical_class(weights: &[Weight]) -> DivClass {
    weights.iter().copied().sum()
}

pub fn adjunction_class(weights: &[Weight], equation_degrees: &[DivClass]) -> DivClass {
    anticanonical_class(weights) - equation_degrees.iter().copied().sum()
}

/// Turn the unnormalized stack grading into a well-formed second row:
/// `(row1 - row2) / r`, column by column.
pub fn normalize_stack_grading(row1: &[i64], row2: &[i64], r: i64) -> Result<Vec<i64>> {
    if row1.len() != row2.len() || r <= 0 {
        return Err(Error::InconsistentWeights(String::from("grading rows of unequal length")));
    }
    row1.iter()
        .zip(row2)
        .enumerate()
        .map(|(column, (a, b))| {
            let d = a - b;
            if d % r != 0 {
                Err(Error::NonIntegralResult { column })
            } else {
                Ok(d / r)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn cox(names: &str, ws: &[(i64, i64)]) -> CoxData {
        CoxData::new(
            names.split(' ').map(|s| s.to_string()).collect(),
            ws.iter().map(|&(a, b)| Weight::new(a, b)).collect(),
        )
        .unwrap()
    }

    fn family64() -> CoxData {
        cox("u z s t w y x", &[(0, 1), (5, 1), (6, 1), (7, 1), (8, 1), (2, 0), (1, -1)])
    }

    fn remark() -> CoxData {
        cox("a b z c d", &[(0, 1), (0, 1), (1, 0), (1, -2), (1, -2)])
    }

    #[test]
    fn normalizes_x5_rows() {
        let r1 = [0, 2, 1, 1, 1, 1];
        assert_eq!(normalize_stack_grading(&r1, &[-2, 0, 1, 1, 1, 5], 2).unwrap(), vec![1, 1, 0, 0, 0, -2]);
        assert_eq!(normalize_stack_grading(&r1, &[-2, 0, 1, 1, 1, 3], 2).unwrap(), vec![1, 1, 0, 0, 0, -1]);
        assert_eq!(normalize_stack_grading(&r1, &r1, 2).unwrap(), vec![0; 6]);
        assert_eq!(
            normalize_stack_grading(&r1, &[-2, 0, 1, 1, 1, 4], 2),
            Err(Error::NonIntegralResult { column: 5 })
        );
    }

    #[test]
    fn anticanonical_and_adjunction() {
        assert_eq!(remark().anticanonical_class(), Weight::new(3, -2));
        let c = family64();
        assert_eq!(c.anticanonical_class(), Weight::new(29, 4));
        assert_eq!(c.adjunction_class(&[Weight::new(12, 2), Weight::new(16, 2)]), Weight::new(1, 0));
        assert_eq!(c.adjunction_class(&[]), c.anticanonical_class());
        assert_eq!(anticanonical_class(&[]), Weight::ZERO);
        let x5 = cox("u s t z y x", &[(0, 1), (2, 1), (1, 0), (1, 0), (1, 0), (1, -2)]);
        assert_eq!(x5.anticanonical_class() - Weight::new(5, 0), Weight::new(1, 0));
    }

    #[test]
    fn mobile_cones_of_examples() {
        assert_eq!(family64().mobile_cone().unwrap().cone, Cone2::new(Weight::new(5, 1), Weight::new(2, 0)).unwrap());
        let x5 = cox("u s t z y x", &[(0, 1), (2, 1), (1, 0), (1, 0), (1, 0), (1, -2)]);
        assert_eq!(x5.mobile_cone().unwrap().cone, Cone2::new(Weight::new(2, 1), Weight::new(1, 0)).unwrap());
        let m = remark().mobile_cone().unwrap();
        assert_eq!(m.cone, Cone2::new(Weight::new(0, 1), Weight::new(1, -2)).unwrap());
        assert_eq!(m.start, EndKind::Fibration);
        assert_eq!(m.end, EndKind::Fibration);
    }

    #[test]
    fn chambers_of_examples() {
        let ch = family64().git_chambers().unwrap();
        let rays: Vec<_> = ch.iter().map(|c| (c.cone.r1, c.cone.r2)).collect();
        let w = Weight::new;
        assert_eq!(
            rays,
            vec![(w(5, 1), w(6, 1)), (w(6, 1), w(7, 1)), (w(7, 1), w(8, 1)), (w(8, 1), w(1, 0))]
        );
        let ch = remark().git_chambers().unwrap();
        assert_eq!(ch.len(), 2);
        assert_eq!(ch[0].left, vec![0, 1]);
        assert_eq!(ch[1].right, vec![3, 4]);
        let two = cox("a b", &[(1, 0), (0, 1)]);
        assert_eq!(two.git_chambers(), Err(Error::FewerThanThreeRayGroups));
    }

    #[test]
    fn well_formedness_reported() {
        assert_eq!(family64().well_formedness(), 1);
    }
}
