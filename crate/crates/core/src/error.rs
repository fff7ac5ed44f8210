use thiserror::Error;

/// Errors raised by the auction engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty bid vector")]
    EmptyBids,
    #[error("rank {k} out of range for {len} values")]
    RankOutOfRange { k: usize, len: usize },
    #[error("player {player} out of range for {n} players")]
    PlayerOutOfRange { player: usize, n: usize },
    #[error("at least {min} players required, got {n}")]
    TooFewPlayers { min: usize, n: usize },
    #[error("BC requires n ≥ 3 (got {0})")]
    BcRequiresThree(usize),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("negative value {0} where a non-negative one is required")]
    Negative(String),
    #[error("cannot parse rational {0:?}")]
    ParseValue(String),
    #[error("unknown mechanism selector {0:?}")]
    UnknownMechanism(String),
    #[error("unknown strategy selector {0:?}")]
    UnknownStrategy(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("value {0} is not a grid point")]
    NotInGrid(String),
    #[error("strategy for player {strategy} placed at position {position}")]
    ProfileOrder { strategy: usize, position: usize },
    #[error("last player needs at least two earlier bids, got {0}")]
    ShortPrefix(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
