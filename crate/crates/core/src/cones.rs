//! Exact cone geometry in the plane of bidegrees.
//!
//! Everything here works on integer pairs; rays are kept primitive so that
//! `(2,0)` and `(1,0)` are never compared as different directions.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;

use crate::error::{Error, Result};

/// A bidegree, or a divisor class in the rank-2 class group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight {
    pub a: i64,
    pub b: i64,
}

impl Weight {
    pub const ZERO: Weight = Weight { a: 0, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        Weight { a, b }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// `self.a * other.b - self.b * other.a`; positive when `other` is
    /// counterclockwise of `self`.
    pub fn cross(self, other: Weight) -> i64 {
        self.a * other.b - self.b * other.a
    }

    pub fn primitive(self) -> Result<Weight> {
        if self.is_zero() {
            return Err(Error::ZeroWeight);
        }
        let g = self.a.gcd(&self.b);
        Ok(Weight::new(self.a / g, self.b / g))
    }

    /// The positive integer `m` with `self = m * ray`, if `self` lies on `ray`.
    pub fn multiple_of(self, ray: Weight) -> Option<i64> {
        if self.cross(ray) != 0 {
            return None;
        }
        let m = if ray.a != 0 { self.a / ray.a } else { self.b / ray.b };
        if m > 0 && ray * m == self {
            Some(m)
        } else {
            None
        }
    }

    /// Same direction (positive proportionality).
    pub fn same_ray(self, other: Weight) -> bool {
        !self.is_zero()
            && !other.is_zero()
            && self.cross(other) == 0
            && (self.a * other.a + self.b * other.b) > 0
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, o: Weight) -> Weight {
        Weight::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, o: Weight) -> Weight {
        Weight::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight::new(-self.a, -self.b)
    }
}

impl Mul<i64> for Weight {
    type Output = Weight;
    fn mul(self, k: i64) -> Weight {
        Weight::new(self.a * k, self.b * k)
    }
}

impl core::iter::Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::ZERO, |acc, w| acc + w)
    }
}

/// Variables sharing one primitive ray, in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayGroup {
    pub ray: Weight,
    pub variables: Vec<usize>,
}

/// Closed convex cone spanned by two primitive rays; `r1 == r2` encodes a
/// single ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cone2 {
    pub r1: Weight,
    pub r2: Weight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Position {
    Interior,
    Boundary,
    Outside,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Position::Interior => "Interior",
            Position::Boundary => "Boundary",
            Position::Outside => "Outside",
        })
    }
}

impl Cone2 {
    pub fn new(r1: Weight, r2: Weight) -> Result<Cone2> {
        let r1 = r1.primitive()?;
        let r2 = r2.primitive()?;
        if r1.cross(r2) == 0 && r1 != r2 {
            // opposite rays span a line
            return Err(Error::NonConvexSpan);
        }
        Ok(Cone2 { r1, r2 })
    }

    pub fn ray(r: Weight) -> Result<Cone2> {
        let r = r.primitive()?;
        Ok(Cone2 { r1: r, r2: r })
    }

    pub fn is_ray(&self) -> bool {
        self.r1 == self.r2
    }

    pub fn classify(&self, w: Weight) -> Result<Position> {
        classify_position(self, w)
    }
}

impl fmt::Display for Cone2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.r1, self.r2)
    }
}

/// Half-plane index used for the angular sort: 0 for angles in [0, pi), 1 otherwise.
fn half(w: Weight) -> u8 {
    if w.b > 0 || (w.b == 0 && w.a > 0) {
        0
    } else {
        1
    }
}

fn ccw_angle_cmp(x: Weight, y: Weight) -> Ordering {
    half(x).cmp(&half(y)).then_with(|| 0.cmp(&x.cross(y)))
}

/// Group weights by primitive ray and order the groups clockwise, starting
/// from the most counterclockwise ray of the (pointed) cone they span.
pub fn sort_rays_clockwise(weights: &[Weight]) -> Result<Vec<RayGroup>> {
    let mut groups: Vec<RayGroup> = Vec::new();
    for (i, w) in weights.iter().enumerate() {
        let ray = w.primitive()?;
        match groups.iter_mut().find(|g| g.ray == ray) {
            Some(g) => g.variables.push(i),
            None => groups.push(RayGroup { ray, variables: alloc::vec![i] }),
        }
    }
    if groups.len() <= 1 {
        return Ok(groups);
    }
    groups.sort_by(|x, y| ccw_angle_cmp(x.ray, y.ray));
    // Find the gap wider than pi; the ray just before it is the ccw-most.
    let n = groups.len();
    let mut start = None;
    for i in 0..n {
        let a = groups[i].ray;
        let b = groups[(i + 1) % n].ray;
        let c = a.cross(b);
        if c < 0 {
            if start.is_some() {
                return Err(Error::NonConvexSpan);
            }
            start = Some(i);
        } else if c == 0 {
            // distinct primitive rays with zero cross product are opposite
            return Err(Error::NonConvexSpan);
        }
    }
    let start = match start {
        Some(s) => s,
        // two rays exactly opposite handled above; with n >= 2 and no
        // negative gap the rays wind all the way around
        None => return Err(Error::NonConvexSpan),
    };
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let idx = (start + n - k) % n;
        out.push(groups[idx].clone());
    }
    Ok(out)
}

/// Where `w` sits relative to the closed cone.
pub fn classify_position(cone: &Cone2, w: Weight) -> Result<Position> {
    if w.is_zero() {
        return Err(Error::ZeroWeight);
    }
    if cone.is_ray() {
        return Ok(if w.same_ray(cone.r1) { Position::Boundary } else { Position::Outside });
    }
    let det = cone.r1.cross(cone.r2);
    // w = c1 r1 + c2 r2 with c1 = (w x r2)/det, c2 = (r1 x w)/det
    let n1 = w.cross(cone.r2);
    let n2 = cone.r1.cross(w);
    let (s1, s2) = if det > 0 { (n1.signum(), n2.signum()) } else { (-n1.signum(), -n2.signum()) };
    Ok(match (s1, s2) {
        (1, 1) => Position::Interior,
        (s1, s2) if s1 >= 0 && s2 >= 0 => Position::Boundary,
        _ => Position::Outside,
    })
}

/// Primitive linear form vanishing on `ray`, positive on rays sorted before
/// it (counterclockwise side).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WallNormal {
    ray: Weight,
}

impl WallNormal {
    pub fn eval(&self, w: Weight) -> i64 {
        w.b * self.ray.a - w.a * self.ray.b
    }

    pub fn ray(&self) -> Weight {
        self.ray
    }
}

pub fn wall_normal(ray: Weight) -> Result<WallNormal> {
    Ok(WallNormal { ray: ray.primitive()? })
}
