//! Per-ticker rolling statistics cached per evaluation day, plus a sliding
//! cross-product cursor for pair correlations.
//!
//! Per-ticker quantities (volatility, log-return window mean and centered
//! sum of squares) are recomputed two-pass for every day with the same
//! helpers a direct evaluation would use, so cached values are bit-identical
//! to naive recomputation. Only the pair-level cross sum slides
//! incrementally; it is refreshed from scratch periodically to stop rounding
//! drift, keeping the correlation within ~1e-12 of the two-pass value.

use crate::error::Result;
use crate::indicators::{
    centered_sum_sq, volatility_window, window_mean, LogReturnSeries, RateSeries, VolatilityMode,
};
use crate::pairgame::{DayStats, PairDayView};

/// Full recompute of the sliding cross sum after this many one-day slides.
const RESYNC_SLIDES: u32 = 1000;

/// Rolling statistics of one ticker, indexed by evaluation day.
///
/// A day's volatility uses the `tau` rates ending that day; the correlation
/// window statistics use the `tau - 1` log-returns ending the previous day.
/// Both need `2 * (tau - 1)` raw days of history, so with a warm-up of
/// `tau` the first defined evaluation day is `tau - 2`.
#[derive(Debug, Clone)]
pub struct TickerStats {
    rates: RateSeries,
    log_returns: LogReturnSeries,
    /// Volatility per evaluation day; NaN before `stat_start`.
    sigma: Vec<f64>,
    /// Mean of the day's log-return window; NaN before `stat_start`.
    dg_mean: Vec<f64>,
    /// Centered sum of squares of the same window; NaN before `stat_start`.
    dg_ss: Vec<f64>,
    tau: usize,
    warm_up: usize,
    eval_len: usize,
    stat_start: usize,
}

impl TickerStats {
    pub fn compute(
        prices: &[f64],
        tau: usize,
        warm_up: usize,
        mode: VolatilityMode,
    ) -> Result<Self> {
        let rates = RateSeries::compute(prices, tau)?;
        let log_returns = LogReturnSeries::compute(prices, tau)?;
        let eval_len = prices.len().saturating_sub(warm_up);
        let stat_start = (2 * (tau - 1)).saturating_sub(warm_up);
        let mut sigma = vec![f64::NAN; eval_len];
        let mut dg_mean = vec![f64::NAN; eval_len];
        let mut dg_ss = vec![f64::NAN; eval_len];
        for t in stat_start..eval_len {
            let raw = warm_up + t;
            let vol_win = rates
                .window(raw + 1 - tau, tau)
                .expect("volatility window in range past stat_start");
            sigma[t] = volatility_window(vol_win, mode);
            let dg_win = log_returns
                .window(raw + 1 - tau, tau - 1)
                .expect("log-return window in range past stat_start");
            let m = window_mean(dg_win);
            dg_mean[t] = m;
            dg_ss[t] = centered_sum_sq(dg_win, m);
        }
        Ok(Self {
            rates,
            log_returns,
            sigma,
            dg_mean,
            dg_ss,
            tau,
            warm_up,
            eval_len,
            stat_start,
        })
    }

    pub fn eval_len(&self) -> usize {
        self.eval_len
    }

    /// First evaluation day with defined statistics (may be >= eval_len,
    /// meaning no day qualifies).
    pub fn stat_start(&self) -> usize {
        self.stat_start
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn rates(&self) -> &RateSeries {
        &self.rates
    }

    pub fn log_returns(&self) -> &LogReturnSeries {
        &self.log_returns
    }

    /// Rate at evaluation day `t` (defined for every evaluation day).
    pub fn gamma_eval(&self, t: usize) -> f64 {
        self.gamma_eval_slice()[t]
    }

    /// Rates for evaluation days 0..eval_len as a contiguous slice.
    pub fn gamma_eval_slice(&self) -> &[f64] {
        let start = self.warm_up + 1 - self.tau;
        &self.rates.values()[start..start + self.eval_len]
    }

    pub fn sigma_at(&self, t: usize) -> Option<f64> {
        (t >= self.stat_start && t < self.eval_len).then(|| self.sigma[t])
    }

    pub fn sigma_slice(&self) -> &[f64] {
        &self.sigma
    }

    /// Mean and centered sum of squares of day `t`'s log-return window.
    pub fn dg_moments(&self, t: usize) -> Option<(f64, f64)> {
        (t >= self.stat_start && t < self.eval_len).then(|| (self.dg_mean[t], self.dg_ss[t]))
    }

    /// Index into `log_returns().values()` where day `t`'s window starts.
    /// Only valid for `t >= stat_start`.
    fn dg_win_start(&self, t: usize) -> usize {
        // raw window start (warm_up + t - tau + 1) minus the series offset
        // (tau - 1); non-negative from stat_start on.
        self.warm_up + t + 2 - 2 * self.tau
    }

    /// Day `t`'s log-return window as a slice.
    pub fn dg_window(&self, t: usize) -> &[f64] {
        let s = self.dg_win_start(t);
        &self.log_returns.values()[s..s + self.tau - 1]
    }
}

/// Sliding cross-product cursor for the correlation of one pair.
///
/// Queries must be for days at or past `stat_start`. Consecutive-day
/// queries slide in O(1); anything else recomputes the window.
pub struct PairCursor<'a> {
    a: &'a TickerStats,
    b: &'a TickerStats,
    win: usize,
    cur: Option<usize>,
    cross: f64,
    slides: u32,
}

impl<'a> PairCursor<'a> {
    pub fn new(a: &'a TickerStats, b: &'a TickerStats) -> Self {
        assert_eq!(a.tau, b.tau, "pair legs must share the window length");
        assert_eq!(a.warm_up, b.warm_up, "pair legs must share the warm-up");
        assert_eq!(a.eval_len, b.eval_len, "pair legs must share the calendar");
        Self {
            a,
            b,
            win: a.tau - 1,
            cur: None,
            cross: 0.0,
            slides: 0,
        }
    }

    fn recompute(&mut self, t: usize) {
        let wa = self.a.dg_window(t);
        let wb = self.b.dg_window(t);
        let mut sum = 0.0;
        for (x, y) in wa.iter().zip(wb) {
            sum += x * y;
        }
        self.cross = sum;
        self.cur = Some(t);
        self.slides = 0;
    }

    /// Correlation at evaluation day `t`, or None when either window has
    /// zero variance. Matches the two-pass value to ~1e-12.
    pub fn rho_at(&mut self, t: usize) -> Option<f64> {
        let (ma, ssa) = self.a.dg_moments(t)?;
        let (mb, ssb) = self.b.dg_moments(t)?;
        if ssa == 0.0 || ssb == 0.0 {
            return None;
        }
        match self.cur {
            Some(c) if c == t => {}
            Some(c) if t == c + 1 && self.slides < RESYNC_SLIDES => {
                let s_old = self.a.dg_win_start(c);
                let s_new = s_old + self.win;
                let av = self.a.log_returns.values();
                let bv = self.b.log_returns.values();
                self.cross += av[s_new] * bv[s_new] - av[s_old] * bv[s_old];
                self.cur = Some(t);
                self.slides += 1;
            }
            _ => self.recompute(t),
        }
        let n = self.win as f64;
        let mut num = self.cross - n * ma * mb;
        if ssa.min(ssb) < 1e-12 {
            // Near-degenerate windows would amplify cancellation error in
            // the raw-sum form; fall back to the two-pass numerator.
            num = self
                .a
                .dg_window(t)
                .iter()
                .zip(self.b.dg_window(t))
                .map(|(x, y)| (x - ma) * (y - mb))
                .sum();
        }
        Some(crate::indicators::clamp_correlation(num / (ssa * ssb).sqrt()))
    }
}

/// Self-contained [`PairDayView`] over two tickers: precomputed spreads,
/// cached per-leg statistics, sliding correlation.
pub struct FullPairView<'a> {
    a: &'a TickerStats,
    b: &'a TickerStats,
    d: Vec<f64>,
    cursor: PairCursor<'a>,
    stat_start: usize,
    eval_len: usize,
}

impl<'a> FullPairView<'a> {
    pub fn new(a: &'a TickerStats, b: &'a TickerStats, tau: usize, warm_up: usize) -> Self {
        assert_eq!(a.tau, tau);
        assert_eq!(a.warm_up, warm_up);
        let d = a
            .gamma_eval_slice()
            .iter()
            .zip(b.gamma_eval_slice())
            .map(|(x, y)| crate::indicators::spread(*x, *y))
            .collect();
        let cursor = PairCursor::new(a, b);
        Self {
            a,
            b,
            d,
            cursor,
            stat_start: a.stat_start,
            eval_len: a.eval_len,
        }
    }
}

impl PairDayView for FullPairView<'_> {
    fn eval_len(&self) -> usize {
        self.eval_len
    }

    fn spread(&self, t: usize) -> f64 {
        self.d[t]
    }

    fn stats(&mut self, t: usize) -> Option<DayStats> {
        if t < self.stat_start || t >= self.eval_len {
            return None;
        }
        let rho = self.cursor.rho_at(t)?;
        Some(DayStats {
            rho,
            sigma_a: self.a.sigma[t],
            sigma_b: self.b.sigma[t],
        })
    }
}
