use thiserror::Error;

/// Errors raised by label construction and the calculators built on them.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QkError {
    #[error("quaternionic dimension must satisfy n >= 2, got {0}")]
    QuatDimTooSmall(u32),

    #[error("invalid irreducible label (k={k}, a={a}, b={b}) for n={n}: need n >= a >= b >= 0")]
    InvalidIrrep { n: u32, k: u32, a: u32, b: u32 },

    #[error("invalid twist (l={l}, d={d}) for n={n}: need 0 <= d <= n")]
    InvalidTwist { n: u32, l: u32, d: u32 },

    #[error("invalid weight {parts:?}: entries must be nonnegative and weakly decreasing")]
    InvalidWeight { parts: Vec<i64> },

    #[error("weight {parts:?} has length {len} > rank {n}")]
    WeightTooLong { parts: Vec<u32>, len: usize, n: u32 },

    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("weight multiset is not Weyl invariant: highest remaining weight {0:?} is not dominant")]
    NotWeylInvariant(Vec<i32>),

    #[error("power {k} exceeds dimension {dim}")]
    PowerTooLarge { k: usize, dim: usize },

    #[error("{what} is outside the supported range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("representation {0} does not occur in the differential forms")]
    NotInForms(String),

    #[error("negative-curvature Dirac kernels are an extrapolation; pass the extrapolation flag to compute them")]
    ExtrapolationNotEnabled,

    #[error("malformed Betti table: {0}")]
    MalformedTable(String),

    #[error("kernel dimension given for {0}, which is not a harmonic candidate in this regime")]
    NotACandidate(String),
}

pub type Result<T> = std::result::Result<T, QkError>;
