use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("operation is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("homomorphism admits no extension to the whole source group")]
    NoExtension,
    #[error("irreducible decomposition failed after {0} attempts")]
    DecompositionFailed(usize),
    #[error("multiplicity {0} is not an integer")]
    NonIntegerMultiplicity(f64),
    #[error("Frobenius reciprocity check failed: restriction gives {restriction}, coset representation gives {induced}")]
    ReciprocityMismatch { restriction: usize, induced: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("incomplete Fourier table: {0}")]
    IncompleteTable(String),
    #[error("enumeration of {required} cases exceeds the cap of {cap}")]
    CapExceeded { required: u128, cap: u128 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("variable {0} is missing from the assignment")]
    MissingVariable(String),
    #[error("no non-trivial irreducible representation has a non-negative penalized margin")]
    NoOmega,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 3,
            Error::NoOmega => 4,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}
