use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(u8, u8),

    #[error("genus must be at least 1")]
    InvalidGenus,

    #[error("letter index {index} out of range for genus {genus}")]
    LetterOutOfRange { index: u8, genus: u8 },

    #[error("tensor is not rotation-invariant in weight {weight}")]
    NotCyclic { weight: usize },

    #[error("series precondition violated: {0}")]
    SeriesDomain(&'static str),

    #[error("deformation element is not in the kernel of the bracket")]
    NotInN,

    #[error("conjugating element has a component of weight {0} < 3")]
    MinWeightTooLow(usize),

    #[error("requested weight {requested} exceeds the exact range {limit} of the handle")]
    BeyondCutoff { requested: usize, limit: usize },

    #[error("operator is not a chain map at cell (p={p}, w={w})")]
    NotChainMap { p: usize, w: usize },

    #[error("deformation condition failed: {0}")]
    ConditionFailed(String),

    #[error("expansion solver failed at degree {0}")]
    SolveFailed(usize),

    #[error("expansions are not related by a symplectic derivation: {0}")]
    Inconsistent(String),

    #[error("syntax error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
