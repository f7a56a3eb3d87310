use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {p}^{r} exceeds the configured maximum {max}")]
    Overflow { p: u64, r: u32, max: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element encoding {encoding} does not belong to a field of order {q}")]
    FieldMismatch { encoding: u64, q: u64 },
    #[error("curve is singular (discriminant vanishes)")]
    Singular,
    #[error("even characteristic is not supported here")]
    EvenCharacteristic,
    #[error("field order {q} exceeds the curve scan limit {limit}")]
    ScanLimitExceeded { q: u64, limit: u64 },
    #[error("psi index {0} is below 2")]
    BadIndex(usize),
    #[error("k = {k} outside the admissible range [3, {max}]")]
    KOutOfRange { k: usize, max: usize },
    #[error("arc property violated: a hyperplane meets {count} points (k = {k})")]
    ArcPropertyViolated { k: usize, count: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("budget exceeded for {what}: estimated {estimate} element operations, limit {limit}")]
    BudgetExceeded {
        what: String,
        estimate: u64,
        limit: u64,
    },
    #[error("point lies on the curve")]
    PointOnCurve,
    #[error("point lies on the arc")]
    PointOnArc,
    #[error("no frame satisfying the line conditions was found")]
    NoFrameFound,
    #[error("no witness hyperplane found for the point")]
    NoWitnessFound,
    #[error("witness hyperplane failed verification: {0}")]
    WitnessInvalid(String),
    #[error("frame condition violated: {0}")]
    FrameViolation(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("code has dimension zero")]
    ZeroDimension,
    #[error("generator rows are linearly dependent (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },
    #[error("parse error: {0}")]
    Parse(String),
}
