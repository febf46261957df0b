use thiserror::Error;

/// Errors raised by the library. Mathematical failures that are expected
/// outcomes (a relation that does not hold, a non-morphism) are reported
/// through report types instead.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown basis element `{0}`")]
    UnknownBasis(String),

    #[error("duplicate basis element `{0}`")]
    DuplicateBasis(String),

    #[error("length mismatch: {what} has length {got}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),

    #[error("weight must be at least 1, got {0}")]
    ZeroWeight(usize),

    #[error("degree mismatch: {context}: expected degree {expected}, got {got}")]
    DegreeMismatch {
        context: String,
        expected: i64,
        got: i64,
    },

    #[error("structure map Q_{weight} has degree {got}, expected {expected}")]
    StructureDegree {
        weight: usize,
        expected: i64,
        got: i64,
    },

    #[error("weight {weight} exceeds the cap {cap}")]
    AboveCap { weight: usize, cap: usize },

    #[error("cap mismatch: {0} vs {1}")]
    CapMismatch(usize, usize),

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("not a Maurer-Cartan element: curvature {residual}")]
    NotMaurerCartan { residual: String },

    #[error("algebra is not nilpotent within depth {depth_bound}; the Maurer-Cartan sum is not justified")]
    NotNilpotent { depth_bound: usize },

    #[error("Picard iteration did not reach a fixpoint within {bound} steps (the algebra is not nilpotent on this orbit)")]
    NonTermination { bound: usize },

    #[error("polynomial degree {degree} exceeds t-cap {t_cap}")]
    PolynomialOverflow { degree: usize, t_cap: usize },

    #[error("Q_1 does not square to zero in degree {0}")]
    NotADifferential(i64),

    #[error("the weight-1 component is not a chain map: {0}")]
    NotAChainMap(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cannot read {0}")]
    Io(String),

    #[error("invalid request: {0}")]
    Invalid(String),
}

impl Error {
    /// Whether the error reports a mathematical obstruction rather than
    /// malformed input.
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::NotMaurerCartan { .. }
                | Error::NotNilpotent { .. }
                | Error::NonTermination { .. }
                | Error::NotADifferential(_)
                | Error::NotAChainMap(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
