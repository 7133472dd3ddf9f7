use thiserror::Error;

/// Errors raised by constructors and checks throughout the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("not a chain map in degree {degree}: {detail}")]
    NotChainMap { degree: i32, detail: String },

    #[error("homotopy identity `{what}` fails in degree {degree}")]
    HomotopyIdentity { degree: i32, what: String },

    #[error("complex is not acyclic: H_{degree} is nonzero")]
    NotAcyclic { degree: i32 },

    #[error("map is not a weak equivalence: homology differs in degree {degree}")]
    NotWeakEquivalence { degree: i32 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("degree {degree}: `{inequality}` violated ({lhs} > {rhs})")]
    QualityViolation {
        degree: i32,
        inequality: String,
        lhs: String,
        rhs: String,
    },

    #[error("degree {degree}: `{inequality}` within guard band ({lhs} vs {rhs})")]
    Indeterminate {
        degree: i32,
        inequality: String,
        lhs: String,
        rhs: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
