use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a unit rotation: {0}")]
    NotUnit(String),
    #[error("anchor {anchor} out of range for patch of {len} tiles")]
    AnchorOutOfRange { anchor: usize, len: usize },
    #[error("tile {0} is too close to the patch boundary to certify its corona")]
    BoundaryUncertain(usize),
    #[error("level {level} exceeds the configured maximum {max}")]
    LevelCap { level: u32, max: u32 },
    #[error("class set did not stabilize by level {0}")]
    NonStabilized(u32),
    #[error("child corona not in the enumerated class set: {0}")]
    IncompleteEnumeration(String),
    #[error("matrix is not primitive within {0} powers")]
    NotPrimitive(u32),
    #[error("eigenspace for {lambda} has dimension {dim}, expected 1")]
    EigenspaceDim { lambda: i64, dim: usize },
    #[error("column sums are {column_sum}, not {lambda}")]
    WrongEigenvalue { lambda: i64, column_sum: String },
    #[error("no strictly positive eigenvector")]
    NoPositiveSolution,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown class id {0}")]
    UnknownClass(usize),
    #[error("non-simplicial adjacency: {0}")]
    NonSimplicialAdjacency(String),
    #[error("cell map is not cellular: {0}")]
    NonCellular(String),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
