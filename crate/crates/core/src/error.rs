use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("matrix is singular mod {0}")]
    SingularMatrix(usize),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid register system: {0}")]
    InvalidSystem(String),
    #[error("label {label} out of range for register {register} of dimension {dim}")]
    LabelOutOfRange { register: usize, label: usize, dim: usize },
    #[error("register {0} does not exist")]
    RegisterOutOfRange(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid register permutation")]
    InvalidPermutation,
    #[error("partial trace needs at least one kept register")]
    EmptyKeepSet,
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("code parameters violated: {0}")]
    ParamViolation(String),
    #[error("decoding needs exactly {expected} coordinates, got {got}")]
    WrongSubsetSize { expected: usize, got: usize },
    #[error("enumeration of {size} items exceeds cap {cap}")]
    TooLarge { size: u128, cap: u128 },
    #[error("no-cloning violation: n >= 2k (k={k}, n={n})")]
    NoCloningViolation { k: usize, n: usize },
    #[error("cannot discard below the threshold (n = k = {0})")]
    ThresholdFloor(usize),
    #[error("invalid share partition: {0}")]
    InvalidPartition(String),
    #[error("secret dimension {got} not supported (max {max})")]
    BadSecretDimension { got: usize, max: usize },
    #[error("unknown share label {0:?}")]
    UnknownShareLabel(String),
    #[error("subset of {got} coordinates is below the threshold {k}")]
    SubsetTooSmall { got: usize, k: usize },
    #[error("encoding is globally mixed (retained-state rank {rank})")]
    NotPureScheme { rank: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
