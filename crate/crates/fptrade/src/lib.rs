//! Pairs-trading backtest engine built around a first-passage trading game.
//!
//! The pipeline: load or synthesize a price universe ([`market_data`]),
//! derive rescaled rates, correlations and volatilities over rolling windows
//! ([`indicators`]), play a three-threshold entry/exit game on the rate
//! spread of each correlated pair ([`pairgame`]), and sweep the threshold
//! grid over every pair of the universe in parallel ([`sweep`]).
//!
//! Day indexing convention used throughout: a universe reserves its first
//! `warm_up` calendar days for rolling statistics; evaluation day `t = 0` is
//! the day right after the warm-up. Raw series index = `warm_up + t`.

pub mod error;
pub mod indicators;
pub mod market_data;
pub mod pairgame;
pub mod rolling;
pub mod sweep;

pub use error::{Error, Result};
