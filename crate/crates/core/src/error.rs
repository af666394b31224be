use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("permutation degrees differ ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("image array is not a bijection: {0:?}")]
    NotBijection(Vec<usize>),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("letter `{0}` repeated within one cycle")]
    RepeatedLetterInCycle(String),
    #[error("malformed cycle notation: {0}")]
    MalformedSyntax(String),
    #[error("duplicate letter `{0}` in alphabet")]
    DuplicateLetter(String),
    #[error("invalid letter token `{0}`")]
    InvalidLetter(String),
    #[error("search over {required} permutations exceeds the limit {limit}; raise the brute-force bound")]
    AlphabetTooLarge { required: u128, limit: u128 },
    #[error("alphabet needs at least two letters")]
    DegenerateAlphabet,
    #[error("invalid shape: {0}")]
    BadShape(String),
    #[error("rule for `{letter}` has {found} entries, expected {expected}")]
    ShapeMismatch { letter: String, found: usize, expected: usize },
    #[error("no rule given for letter `{0}`")]
    MissingRule(String),
    #[error("column at position {0:?} is not a bijection")]
    NotBijectiveColumn(Vec<usize>),
    #[error("position {coords:?} lies outside the level-{level} support")]
    OutOfSupport { coords: Vec<usize>, level: usize },
    #[error("level-{level} supertile needs {cells} cells, over the bound {limit}")]
    LevelTooLarge { level: usize, cells: u128, limit: u128 },
    #[error("legal blocks did not stabilize by level {0}")]
    NotStabilized(usize),
    #[error("operation needs a one-dimensional substitution")]
    NotOneDimensional,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("substitution is not primitive")]
    NotPrimitive,
    #[error("substitution is not known to be aperiodic: {0}")]
    NotAperiodic(String),
    #[error("dimension {dim} exceeds the bound {bound}")]
    DimensionTooLarge { dim: usize, bound: usize },
    #[error("matrix {0} does not commute with the expansion")]
    NotCheckable(String),
    #[error("guaranteed property violated: {0}")]
    ViolationDetected(String),
    #[error("matrix generators do not close to a subgroup: {0}")]
    PNotSubgroup(String),
    #[error("cube too small for the requested shells")]
    ShellTooSmall,
    #[error("construction failed verification: {0}")]
    VerificationFailed(String),
    #[error("group is trivial")]
    TrivialGroup,
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Precondition,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NotPrimitive
            | Error::NotAperiodic(_)
            | Error::NotOneDimensional
            | Error::NotCheckable(_)
            | Error::AlphabetTooLarge { .. }
            | Error::LevelTooLarge { .. }
            | Error::NotStabilized(_)
            | Error::DimensionTooLarge { .. }
            | Error::Unsupported(_) => ErrorClass::Precondition,
            Error::ViolationDetected(_) | Error::VerificationFailed(_) | Error::ShellTooSmall => {
                ErrorClass::Internal
            }
            _ => ErrorClass::Input,
        }
    }
}
