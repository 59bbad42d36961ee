use thiserror::Error;

/// Errors raised by the analysis toolkit.
///
/// Indices carried in messages are 1-based, matching the numbering used in
/// code files and reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry at position {0}")]
    NonFinite(usize),

    #[error("basis matrix {index} is not invertible")]
    SingularBasisMatrix { index: usize },

    #[error("basis matrices are not real-linearly independent (rank {rank} < {expected}); first dependent matrix is {index}")]
    DependentBasis { rank: usize, expected: usize, index: usize },

    #[error("invalid code basis: {0}")]
    InvalidBasis(String),

    #[error("invalid constellation: {0}")]
    InvalidConstellation(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("rank deficient lattice matrix: column {column} collapsed (norm {norm:e})")]
    RankDeficient { column: usize, norm: f64 },

    #[error("channel matrix is numerically singular")]
    SingularChannel,

    #[error("channel sampling exhausted {0} retries without an invertible draw")]
    ChannelRetriesExhausted(usize),

    #[error("brute-force search over {size} candidates exceeds the cap of {cap}; use a smaller constellation or the fast decoder")]
    SearchTooLarge { size: u128, cap: u128 },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed input: {0}")]
    Malformed(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
