use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroInput,
    #[error("root finder did not converge (residual {residual:e})")]
    NonConvergence { residual: f64 },
    #[error("precision exhausted after {0} partial quotients")]
    PrecisionExhausted(usize),
    #[error("pole at {location}")]
    PoleHit {
        location: Complex64,
        generator: Option<Complex64>,
        exponent: Option<i64>,
    },
    #[error("natural boundary: {} unimodular root(s) that are not roots of unity", .roots.len())]
    NaturalBoundary { roots: Vec<Complex64> },
    #[error("{0} is not a pole")]
    NotAPole(Complex64),
    #[error("pole generators are ambiguous")]
    AmbiguousGenerators,
    #[error("torsion vanishes at r = {0}")]
    RootOfUnityCollision(u64),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("periodic function has nonzero mean")]
    NonzeroMean,
    #[error("argument is a pole of the gamma function")]
    PoleOfGamma,
    #[error("cyclic resultant vanishes at m = {0}")]
    ZeroResultant(u64),
    #[error("no decomposition exists")]
    NoDecomposition,
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("a conjugate lies on the unit circle")]
    UnimodularConjugate,
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn pole(location: Complex64) -> Self {
        Error::PoleHit {
            location,
            generator: None,
            exponent: None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
