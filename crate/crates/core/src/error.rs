use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("extension degree {0} out of range (supported: 1..=28)")]
    Capacity(u32),

    #[error("polynomial {poly:#x} is not a degree-{n} polynomial with constant term 1")]
    BadPolynomial { n: u32, poly: u64 },

    #[error("polynomial {poly:#x} is not primitive (exp table repeats after {period} steps)")]
    NotPrimitive { poly: u64, period: u32 },

    #[error("zero element has no logarithm or inverse")]
    ZeroElement,

    #[error("Zech logarithm undefined at 0")]
    ZechAtZero,

    #[error("degenerate line: ({0:#x}, {1:#x})")]
    DegenerateLine(u32, u32),

    #[error("{m} does not divide {n}")]
    Divisibility { n: u32, m: u32 },

    #[error("n - m = {n} - {m} is not divisible by 6; no Singer-invariant design exists")]
    ModSix { n: u32, m: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("orbit collision: {0}")]
    OrbitCollision(String),

    #[error("group line in triangle: {0}")]
    GroupLineInTriangle(String),

    #[error("exact cover instance is unsatisfiable")]
    Unsatisfiable,

    #[error("search limit exceeded after {nodes} nodes")]
    LimitExceeded { nodes: u64 },

    #[error("stratum infeasible: {count} cyclotomic classes of size {t} is not divisible by 18")]
    StratumInfeasible { t: u32, count: u64 },

    #[error("both factor dimensions ({0}, {1}) are odd; the product needs an even factor")]
    Parity(u32, u32),

    #[error("invalid spread: {0}")]
    Spread(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: u32, got: u32 },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("unknown dataset {0:?}")]
    UnknownDataset(String),

    #[error("dataset {0:?} is external; re-derive it with `search frobenius --n 19 --allow-long`")]
    ExternalDataset(String),

    #[error("dataset {name} corrupted: {reason}")]
    CorruptDataset { name: String, reason: String },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
