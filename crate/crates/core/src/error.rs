use thiserror::Error;

use crate::game::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("game is not a DAG")]
    NotDag,

    #[error("invalid game: {}", format_violations(.0))]
    InvalidGame(Vec<Violation>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("bid {bid} exceeds the opponent budget {budget}")]
    BidTooLarge { bid: usize, budget: usize },

    #[error("budget {budget} is outside the solved range 0..={b_max}")]
    OutOfRange { budget: usize, b_max: usize },

    #[error("threshold is infinite: no winning budget exists")]
    NoWinningBudget,

    #[error("oracle search space {size} exceeds the configured limit {limit}")]
    OracleLimit { size: u128, limit: u128 },

    #[error("value does not fit the integer type: {0}")]
    Overflow(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
