use thiserror::Error;

/// Errors raised by the algebraic and verification layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("generator x{0} has no assigned image")]
    UnassignedGenerator(usize),

    #[error("element does not belong to {0}")]
    GroupMismatch(String),

    #[error("search radius {cap} exhausted before reaching the target")]
    RadiusCapExceeded { cap: u32 },

    #[error("no sample pair has source distance at least {0}")]
    NoQualifyingPair(f64),

    #[error("the set must be nonempty")]
    EmptySet,

    #[error("coordinate {0} lies outside the finite list of factors")]
    InfiniteSupport(usize),

    #[error("domain does not enumerate the ball of radius {0}")]
    NotEnumerable(u64),

    #[error("cancellation pairing infeasible: {0}")]
    PairingInfeasible(String),

    #[error("bound violated: {0}")]
    BoundViolation(String),

    #[error("word does not evaluate into the embedded copy of H: {0}")]
    NotInImage(String),

    #[error("parallelogram-free strata insufficient: {0}")]
    InsufficientStrata(String),

    #[error("invalid length function: {0}")]
    InvalidLength(String),

    #[error("invalid group description: {0}")]
    InvalidGroup(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
