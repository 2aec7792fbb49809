use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("basis is not linearly independent: element {index} lies in the span of the previous ones")]
    DependentBasis { index: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("group generator {index} is singular")]
    SingularGenerator { index: usize },

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("malformed rational {0:?}")]
    MalformedRational(String),

    #[error("input triple already carries torsion; add_torsion expects T = 0")]
    NonzeroTorsion,

    #[error("torsion is not h-invariant: {0}")]
    NonInvariantTorsion(String),

    #[error("bracket component is not in h ({condition}) for {location}; re-check {recheck}")]
    Membership {
        condition: &'static str,
        location: String,
        recheck: &'static str,
    },

    #[error("unsupported realization: {0}")]
    Unsupported(String),

    #[error("matrix exponential overflow (reduce the step or the sample radius)")]
    ExpOverflow,

    #[error("invalid realization config: {0}")]
    Config(String),

    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
