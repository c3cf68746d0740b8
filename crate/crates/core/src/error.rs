use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("no image given for generator {0}")]
    MissingImage(usize),
    #[error("a left-normed commutator needs at least two entries, got {0}")]
    CommutatorArity(usize),
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("placeholders must be contiguous from _0; missing _{0}")]
    Placeholders(usize),
    #[error("placeholder _{0} is not allowed in a word")]
    PlaceholderInWord(usize),
    #[error("term expects {expected} arguments, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("ring elements live over different groups ({0} vs {1})")]
    AmbientMismatch(String, String),
    #[error("resource budget exceeded: {what} needs more than {limit} terms")]
    Budget { what: &'static str, limit: usize },
    #[error("map is not a bijection of the generators")]
    NotBijective,
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("factor endomorphism sends generator {0} outside its factor")]
    FactorEscape(usize),
    #[error("endomorphism carries no invertibility certificate")]
    NotInvertible,
    #[error("unsupported variety for {op}: {variety}")]
    UnsupportedVariety { op: &'static str, variety: String },
    #[error("invalid variety descriptor `{0}`")]
    BadDescriptor(String),
    #[error("{0}")]
    Json(String),
}

impl Error {
    pub fn syntax(position: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            position,
            message: message.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
