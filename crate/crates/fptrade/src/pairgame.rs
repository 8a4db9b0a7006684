//! The three-threshold trading game on a pair's rate spread.
//!
//! A pair opens on the first evaluation day whose statistics pass the
//! filters (correlation above rho0, both legs' volatilities strictly inside
//! the band) while the spread d sits in [theta, omega]. A day where d has
//! already overshot omega cannot open; the scan just moves on. After the
//! start the position resolves on the first day d <= epsilon (win) or
//! d > omega (loss-cut), and is unresolved if neither happens by the
//! horizon. One trade per pair per threshold cell, no recycling.

use crate::error::{Error, Result};
use crate::indicators::VolatilityMode;
use crate::market_data::PriceUniverse;
use crate::rolling::{FullPairView, TickerStats};

/// Thresholds are stored in basis points (1e-4 fraction units). Grid values
/// are two-decimal percents, so the representation is exact, integer
/// comparisons cost nothing, and the neutral construction omega = 2*theta -
/// epsilon gives alpha = 1 exactly instead of within an ulp.
const BP_SCALE: f64 = 10_000.0;

fn frac_to_bp(x: f64, what: &str) -> Result<u32> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidThresholds(format!(
            "{what} must be a non-negative finite fraction, got {x}"
        )));
    }
    let scaled = x * BP_SCALE;
    let r = scaled.round();
    if (scaled - r).abs() > 1e-6 || r > u32::MAX as f64 {
        return Err(Error::InvalidThresholds(format!(
            "{what} = {x} is not representable at 1e-4 resolution"
        )));
    }
    Ok(r as u32)
}

/// Entry, profit-take and loss-cut levels: 0 <= epsilon < theta < omega.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThresholdSet {
    theta_bp: u32,
    epsilon_bp: u32,
    omega_bp: u32,
}

impl ThresholdSet {
    pub fn from_bp(theta_bp: u32, epsilon_bp: u32, omega_bp: u32) -> Result<Self> {
        if !(epsilon_bp < theta_bp && theta_bp < omega_bp) {
            return Err(Error::InvalidThresholds(format!(
                "need epsilon < theta < omega, got epsilon={epsilon_bp}bp theta={theta_bp}bp \
                 omega={omega_bp}bp"
            )));
        }
        Ok(Self {
            theta_bp,
            epsilon_bp,
            omega_bp,
        })
    }

    /// Builds from fractional values (resolution 1e-4).
    pub fn new(theta: f64, epsilon: f64, omega: f64) -> Result<Self> {
        Self::from_bp(
            frac_to_bp(theta, "theta")?,
            frac_to_bp(epsilon, "epsilon")?,
            frac_to_bp(omega, "omega")?,
        )
    }

    /// The marginal strategy: omega = 2*theta - epsilon, so the loss-cut
    /// distance equals the profit-take distance and alpha == 1 exactly.
    pub fn neutral(theta: f64, epsilon: f64) -> Result<Self> {
        let theta_bp = frac_to_bp(theta, "theta")?;
        let epsilon_bp = frac_to_bp(epsilon, "epsilon")?;
        if epsilon_bp >= theta_bp {
            return Err(Error::InvalidThresholds(format!(
                "need epsilon < theta, got epsilon={epsilon} theta={theta}"
            )));
        }
        Self::from_bp(theta_bp, epsilon_bp, 2 * theta_bp - epsilon_bp)
    }

    pub fn neutral_bp(theta_bp: u32, epsilon_bp: u32) -> Result<Self> {
        if epsilon_bp >= theta_bp {
            return Err(Error::InvalidThresholds(format!(
                "need epsilon < theta, got epsilon={epsilon_bp}bp theta={theta_bp}bp"
            )));
        }
        Self::from_bp(theta_bp, epsilon_bp, 2 * theta_bp - epsilon_bp)
    }

    pub fn theta_bp(&self) -> u32 {
        self.theta_bp
    }

    pub fn epsilon_bp(&self) -> u32 {
        self.epsilon_bp
    }

    pub fn omega_bp(&self) -> u32 {
        self.omega_bp
    }

    pub fn theta(&self) -> f64 {
        self.theta_bp as f64 / BP_SCALE
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon_bp as f64 / BP_SCALE
    }

    pub fn omega(&self) -> f64 {
        self.omega_bp as f64 / BP_SCALE
    }

    /// Loss-cut to profit-take distance ratio (omega - theta) / (theta -
    /// epsilon); computed on the integer representation, so a neutral set
    /// returns exactly 1.0.
    pub fn alpha(&self) -> f64 {
        (self.omega_bp - self.theta_bp) as f64 / (self.theta_bp - self.epsilon_bp) as f64
    }
}

/// The loss-cut level implied by the marginal strategy, as a fraction.
pub fn omega_from(theta: f64, epsilon: f64) -> Result<f64> {
    Ok(ThresholdSet::neutral(theta, epsilon)?.omega())
}

/// Pair-selection filters and windows.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterParams {
    /// Minimum correlation (strict) at the start day.
    pub rho0: f64,
    /// Volatility band (both strict) applied to both legs at the start day.
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Rolling window in trading days; must equal the universe warm-up.
    pub tau: usize,
    /// Horizon: latest evaluation day a start or a decision may fall on.
    pub tau_max: usize,
}

impl Default for FilterParams {
    fn default() -> Self {
        Self {
            rho0: 0.6,
            sigma_min: 0.05,
            sigma_max: 0.2,
            tau: 250,
            tau_max: 250,
        }
    }
}

impl FilterParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho0.is_finite() && self.rho0 > -1.0 && self.rho0 < 1.0) {
            return Err(Error::InvalidFilters(format!("rho0 {} outside (-1, 1)", self.rho0)));
        }
        if !(self.sigma_min.is_finite() && self.sigma_min >= 0.0) {
            return Err(Error::InvalidFilters(format!(
                "sigma_min {} must be non-negative",
                self.sigma_min
            )));
        }
        if !(self.sigma_max.is_finite() && self.sigma_max > self.sigma_min) {
            return Err(Error::InvalidFilters(format!(
                "need sigma_min < sigma_max, got {} and {}",
                self.sigma_min, self.sigma_max
            )));
        }
        if self.tau < 2 {
            return Err(Error::InvalidFilters(format!("tau {} must be at least 2", self.tau)));
        }
        if self.tau_max == 0 {
            return Err(Error::InvalidFilters("tau_max must be at least 1".into()));
        }
        Ok(())
    }
}

/// Pair statistics at one evaluation day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DayStats {
    pub rho: f64,
    pub sigma_a: f64,
    pub sigma_b: f64,
}

/// Per-day view of one pair: spread everywhere, statistics where defined.
///
/// `stats` returns None on days where a rolling window is not fully
/// populated or has zero variance; the scan skips such days and moves on.
pub trait PairDayView {
    fn eval_len(&self) -> usize;

    /// Absolute rate spread at evaluation day `t` (defined on every day).
    fn spread(&self, t: usize) -> f64;

    /// Statistics at day `t`, or None when undefined.
    fn stats(&mut self, t: usize) -> Option<DayStats>;

    /// First day >= `from` worth examining as a start candidate.
    /// Implementations may skip days that provably cannot open (undefined
    /// stats or failing filters); they must never skip a day that could.
    fn next_candidate(&self, from: usize) -> Option<usize> {
        (from < self.eval_len()).then_some(from)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TradeKind {
    Win,
    Lose,
    Unresolved,
}

impl TradeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TradeKind::Win => "win",
            TradeKind::Lose => "lose",
            TradeKind::Unresolved => "unresolved",
        }
    }
}

/// One play of the game on one pair under one threshold cell.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeOutcome {
    /// Ticker indices, canonical low < high.
    pub pair: (u32, u32),
    pub t_start: usize,
    pub d_start: f64,
    pub kind: TradeKind,
    /// Decision day; None iff unresolved.
    pub t_decision: Option<usize>,
    pub d_decision: Option<f64>,
    /// Statistics at the start day.
    pub rho_start: f64,
    pub sigma_a: f64,
    pub sigma_b: f64,
}

impl TradeOutcome {
    /// Signed profit d_start - d_decision; None for unresolved trades,
    /// which stay out of every aggregate.
    pub fn profit(&self) -> Option<f64> {
        self.d_decision.map(|d| self.d_start - d)
    }

    /// First-passage time t_decision - t_start in days.
    pub fn passage_days(&self) -> Option<usize> {
        self.t_decision.map(|t| t - self.t_start)
    }
}

/// Result of a start scan: the day, the spread and the stats that passed.
#[derive(Debug, Clone, Copy)]
pub struct StartEvent {
    pub t: usize,
    pub d: f64,
    pub stats: DayStats,
}

/// Finds the first day >= `from` (and <= tau_max) where the filters pass and
/// theta <= d <= omega. Days with undefined stats are skipped.
pub fn start_scan<V: PairDayView + ?Sized>(
    view: &mut V,
    filters: &FilterParams,
    thresholds: &ThresholdSet,
    from: usize,
) -> Option<StartEvent> {
    if view.eval_len() == 0 {
        return None;
    }
    let horizon = filters.tau_max.min(view.eval_len() - 1);
    let theta = thresholds.theta();
    let omega = thresholds.omega();
    let mut from = from;
    while let Some(t) = view.next_candidate(from) {
        if t > horizon {
            return None;
        }
        if let Some(stats) = view.stats(t) {
            let band = |s: f64| s > filters.sigma_min && s < filters.sigma_max;
            if band(stats.sigma_a) && band(stats.sigma_b) && stats.rho > filters.rho0 {
                let d = view.spread(t);
                if d >= theta && d <= omega {
                    return Some(StartEvent { t, d, stats });
                }
            }
        }
        from = t + 1;
    }
    None
}

/// Walks the spread forward from a start day until profit-take, loss-cut or
/// the horizon. The horizon caps the decision day itself: a crossing that
/// would land after `tau_max` (or after the data) leaves the trade
/// unresolved.
pub fn resolve_trade<V: PairDayView + ?Sized>(
    view: &V,
    t_start: usize,
    thresholds: &ThresholdSet,
    tau_max: usize,
) -> (TradeKind, Option<usize>, Option<f64>) {
    let horizon = tau_max.min(view.eval_len() - 1);
    let epsilon = thresholds.epsilon();
    let omega = thresholds.omega();
    for t in t_start + 1..=horizon {
        let d = view.spread(t);
        if d <= epsilon {
            return (TradeKind::Win, Some(t), Some(d));
        }
        if d > omega {
            return (TradeKind::Lose, Some(t), Some(d));
        }
    }
    (TradeKind::Unresolved, None, None)
}

/// Plays the full game on a view: one start scan from day 0, one resolution,
/// no recycling. None when no start occurs within the horizon.
pub fn play_pair_view<V: PairDayView + ?Sized>(
    view: &mut V,
    pair: (u32, u32),
    filters: &FilterParams,
    thresholds: &ThresholdSet,
) -> Option<TradeOutcome> {
    let start = start_scan(view, filters, thresholds, 0)?;
    let (kind, t_decision, d_decision) = resolve_trade(view, start.t, thresholds, filters.tau_max);
    debug_assert!(t_decision.map_or(true, |t| t > start.t));
    Some(TradeOutcome {
        pair,
        t_start: start.t,
        d_start: start.d,
        kind,
        t_decision,
        d_decision,
        rho_start: start.stats.rho,
        sigma_a: start.stats.sigma_a,
        sigma_b: start.stats.sigma_b,
    })
}

/// Plays one pair of a universe. Legs are canonicalized to (low, high)
/// before any computation, so argument order cannot change the outcome.
pub fn play_pair(
    universe: &PriceUniverse,
    leg_a: usize,
    leg_b: usize,
    filters: &FilterParams,
    thresholds: &ThresholdSet,
    mode: VolatilityMode,
) -> Result<Option<TradeOutcome>> {
    filters.validate()?;
    if filters.tau != universe.warm_up() {
        return Err(Error::InvalidFilters(format!(
            "tau {} must equal the universe warm-up {}",
            filters.tau,
            universe.warm_up()
        )));
    }
    if leg_a == leg_b {
        return Err(Error::InvalidUniverse("pair legs must be two distinct tickers".into()));
    }
    let n = universe.n_tickers();
    if leg_a >= n || leg_b >= n {
        return Err(Error::InvalidUniverse(format!(
            "pair ({leg_a}, {leg_b}) out of range for {n} tickers"
        )));
    }
    let (lo, hi) = (leg_a.min(leg_b), leg_a.max(leg_b));
    let stats_lo = TickerStats::compute(universe.ticker(lo).prices(), filters.tau, universe.warm_up(), mode)?;
    let stats_hi = TickerStats::compute(universe.ticker(hi).prices(), filters.tau, universe.warm_up(), mode)?;
    let mut view = FullPairView::new(&stats_lo, &stats_hi, filters.tau, universe.warm_up());
    Ok(play_pair_view(
        &mut view,
        (lo as u32, hi as u32),
        filters,
        thresholds,
    ))
}
