//! Threshold budgets for reachability games with poorman discrete bidding.
//!
//! Each turn both players bid from their integer budgets; the higher bid
//! (ties to Player 1) pays the bank and moves the token. Player 1 wants to
//! reach the target, Player 2 the sink. The threshold of a vertex against an
//! opponent budget `B` is the least budget with which Player 1 wins.

pub mod budget;
pub mod closed_form;
pub mod dag;
pub mod error;
pub mod game;
pub mod iteration;
pub mod oracle;
pub mod period;
pub mod ratio;

pub use budget::{Budget, BudgetInt};
pub use error::{Error, Result};
pub use game::{Configuration, Game, VertexId};
pub use iteration::{BidInterval, SearchMode, Solution, ThresholdTable};

/// Thresholds with 64-bit budgets.
pub type Threshold = Budget<u64>;
pub type Table = ThresholdTable<u64>;
/// Exact continuous ratios.
pub type Rational = ratio::ExtRatio<num_bigint::BigInt>;
pub type Ratios = ratio::RatioMap<num_bigint::BigInt>;
pub type Period = period::PeriodSpec<u64>;
