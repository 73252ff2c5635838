use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Every failure the engine can report. Variants carry enough context to
/// locate the offending input without a debugger.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    ZeroWeight,
    NonConvexSpan,
    FewerThanThreeRayGroups,
    DegenerateMobileCone,
    NonIntegralResult { column: usize },
    NotHomogeneous { expected: (i64, i64), found: (i64, i64), monomial: Vec<u32> },
    EmptyPolynomial,
    NoTangentMonomial { equation: usize },
    ReducibleExceptional { variable: usize, detail: String },
    NonIntegralExponent,
    InvalidPoint(String),
    ResidueMismatch(String),
    NoValidSplit(String),
    InconsistentWeights(String),
    NotLinearlySolvable { variable: usize },
    UnresolvedRestriction(String),
    DimensionMismatch { equations: usize, weights: usize },
    ChartUnderspecified(String),
    UnknownVariable(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroWeight => write!(f, "zero weight used as a ray"),
            Error::NonConvexSpan => write!(f, "weights do not lie in an open half-plane"),
            Error::FewerThanThreeRayGroups => write!(f, "fewer than three ray groups"),
            Error::DegenerateMobileCone => write!(f, "mobile cone is degenerate"),
            Error::NonIntegralResult { column } => {
                write!(f, "normalized grading is not integral in column {column}")
            }
            Error::NotHomogeneous { expected, found, monomial } => write!(
                f,
                "polynomial not bihomogeneous: expected {expected:?}, monomial {monomial:?} has {found:?}"
            ),
            Error::EmptyPolynomial => write!(f, "empty polynomial"),
            Error::NoTangentMonomial { equation } => {
                write!(f, "equation {equation} has no tangent monomial at the point")
            }
            Error::ReducibleExceptional { variable, detail } => {
                write!(f, "exceptional divisor not irreducible (variable {variable}): {detail}")
            }
            Error::NonIntegralExponent => write!(f, "non-integral u-exponent in proper transform"),
            Error::InvalidPoint(s) => write!(f, "invalid singular point: {s}"),
            Error::ResidueMismatch(s) => write!(f, "residue weights do not match the germ: {s}"),
            Error::NoValidSplit(s) => write!(f, "no valid unprojection split: {s}"),
            Error::InconsistentWeights(s) => write!(f, "inconsistent weights: {s}"),
            Error::NotLinearlySolvable { variable } => {
                write!(f, "variable {variable} is not linearly solvable")
            }
            Error::UnresolvedRestriction(s) => write!(f, "unresolved restriction: {s}"),
            Error::DimensionMismatch { equations, weights } => write!(
                f,
                "dimension mismatch: {equations} equations in a space with {weights} weights"
            ),
            Error::ChartUnderspecified(s) => write!(f, "chart underspecified: {s}"),
            Error::UnknownVariable(s) => write!(f, "unknown variable {s}"),
        }
    }
}

#[cfg(feature = "std")]
extern crate std;

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
