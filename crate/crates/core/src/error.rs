use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown standard lattice `{0}`")]
    UnknownLattice(String),

    #[error("rescaling factor must be nonzero")]
    ZeroScale,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("gram matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("degenerate gram matrix")]
    Degenerate,

    #[error("reflection vector must have square 2 or -2, got {0}")]
    NotReflective(String),

    #[error("no integral characteristic vector")]
    NoCharacteristic,

    #[error("zero vector where a nonzero one is required")]
    ZeroVector,

    #[error("form out of scope: discriminant group {0:?} is not 2-periodic")]
    NotTwoPeriodic(Vec<String>),

    #[error("odd lattice requires a characteristic vector")]
    MissingCharacteristic,

    #[error("vector is not characteristic")]
    NotCharacteristic,

    #[error("finite form of rank {d} exceeds the enumeration limit {limit}")]
    GroupTooLarge { d: usize, limit: usize },

    #[error("malformed finite quadratic form: {0}")]
    MalformedForm(String),

    #[error("catalog entry {entry}: {reason}")]
    Catalog { entry: String, reason: String },

    #[error("no such vertex {0}")]
    NoSuchVertex(String),

    #[error("witness construction failed for {vertex} (square {square}, class {class})")]
    WitnessFailed {
        vertex: String,
        square: i64,
        class: String,
    },

    #[error("search space of {size} vectors exceeds the budget {budget}; reduce rank or bound")]
    SearchBudget { size: u128, budget: u128 },

    #[error("invalid flip triple: {0}")]
    InvalidFlipTriple(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("verification failed: {0}")]
    Verification(String),
}
