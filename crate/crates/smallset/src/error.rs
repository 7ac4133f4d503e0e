use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("word domains overlap on coordinate {0}")]
    OverlappingDomains(u32),
    #[error("word domain does not cover block starting at coordinate {0}")]
    DomainTooSmall(u32),
    #[error("malformed cylinder cover: {0}")]
    MalformedCover(String),
    #[error("block of {len} coordinates exceeds the materialization cap of {cap}")]
    BlockTooLarge { len: usize, cap: usize },
    #[error("invalid grouping: {0}")]
    InvalidGrouping(String),
    #[error("fine blocks are not a refinement of the coarse blocks (fine block index {0})")]
    NotARefinement(usize),
    #[error("target entry {0} has a full word-set; no witness exists at truncation")]
    ImproperTarget(usize),
    #[error("precondition failed: left-hand side is not block-wise contained in the target")]
    NotContained,
    #[error("input too large for the naive oracle (n = {0}, cap = {1})")]
    TooLarge(u32, u32),
    #[error("truncation {0} exceeds the cap of {1}")]
    TruncationExceeded(u32, u32),
    #[error("hitting failure: rectangle at target entry {0} misses the word-set")]
    HittingFailure(usize),
    #[error("cannot regroup: window exhausted with {got} of {want} requested blocks")]
    CannotRegroup { got: usize, want: usize },
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("enclosure straddles zero at maximum precision (n = {0})")]
    Inconclusive(u32),
    #[error("no hitting set found for block {0} within the try budget")]
    NotFound(usize),
    #[error("regrouped entry {0} has relative density above 1/2")]
    DensityTooHigh(usize),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
