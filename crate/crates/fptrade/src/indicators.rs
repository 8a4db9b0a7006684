//! Rolling indicators on daily price series.
//!
//! All windows are anchored on a day index `t` into the *raw* series and a
//! window length `tau` in trading days:
//!
//! * rate gamma(t) = p(t) / p(t - tau + 1) - 1, first defined at t = tau - 1;
//! * one-day log-return of the rescaled price
//!   dgamma(t) = ln(gamma(t+1) + 1) - ln(gamma(t) + 1);
//! * moving average over [t - tau + 1, t];
//! * volatility over the tau rates in [t - tau + 1, t];
//! * correlation over the tau - 1 log-returns in [t - tau + 1, t - 1].

use crate::error::{Error, Result};

/// Normalization applied to the volatility window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolatilityMode {
    /// Population standard deviation: sqrt(sum of squared deviations / tau).
    Std,
    /// Plain root of the summed squared deviations (no 1/tau factor);
    /// equals `Std` scaled by sqrt(tau).
    PaperLiteral,
}

impl VolatilityMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            VolatilityMode::Std => "std",
            VolatilityMode::PaperLiteral => "paper-literal",
        }
    }
}

impl std::str::FromStr for VolatilityMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "std" => Ok(VolatilityMode::Std),
            "paper-literal" => Ok(VolatilityMode::PaperLiteral),
            other => Err(format!(
                "unknown volatility mode {other:?} (expected \"std\" or \"paper-literal\")"
            )),
        }
    }
}

/// Rescaled rate of a price series: gamma(t) = p(t)/p(t - tau + 1) - 1.
/// Values exist for raw days `tau - 1 ..= n - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSeries {
    first_raw: usize,
    values: Vec<f64>,
}

impl RateSeries {
    pub fn compute(prices: &[f64], tau: usize) -> Result<Self> {
        if tau == 0 {
            return Err(Error::InvalidFilters("tau must be at least 1".into()));
        }
        if prices.len() < tau {
            return Err(Error::InsufficientHistory {
                t: tau - 1,
                need: tau,
                len: prices.len(),
            });
        }
        let first_raw = tau - 1;
        let values = (first_raw..prices.len())
            .map(|t| prices[t] / prices[t + 1 - tau] - 1.0)
            .collect();
        Ok(Self { first_raw, values })
    }

    pub fn first_raw_index(&self) -> usize {
        self.first_raw
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at raw day `t`, or None outside the defined range.
    pub fn get(&self, t: usize) -> Option<f64> {
        t.checked_sub(self.first_raw).and_then(|k| self.values.get(k)).copied()
    }

    /// Contiguous window of `n` values starting at raw day `from`.
    pub fn window(&self, from: usize, n: usize) -> Option<&[f64]> {
        let k = from.checked_sub(self.first_raw)?;
        self.values.get(k..k + n)
    }
}

/// One-day log-returns of the rescaled price, indexed by the starting day:
/// dgamma(t) = ln(gamma(t+1) + 1) - ln(gamma(t) + 1); raw days
/// `tau - 1 ..= n - 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogReturnSeries {
    first_raw: usize,
    values: Vec<f64>,
}

impl LogReturnSeries {
    pub fn compute(prices: &[f64], tau: usize) -> Result<Self> {
        let rates = RateSeries::compute(prices, tau)?;
        if rates.values().len() < 2 {
            return Err(Error::InsufficientHistory {
                t: tau,
                need: tau + 1,
                len: prices.len(),
            });
        }
        let logs: Vec<f64> = rates.values().iter().map(|&g| (g + 1.0).ln()).collect();
        let values = logs.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(Self {
            first_raw: rates.first_raw_index(),
            values,
        })
    }

    pub fn from_parts(first_raw: usize, values: Vec<f64>) -> Self {
        Self { first_raw, values }
    }

    pub fn first_raw_index(&self) -> usize {
        self.first_raw
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, t: usize) -> Option<f64> {
        t.checked_sub(self.first_raw).and_then(|k| self.values.get(k)).copied()
    }

    pub fn window(&self, from: usize, n: usize) -> Option<&[f64]> {
        let k = from.checked_sub(self.first_raw)?;
        self.values.get(k..k + n)
    }
}

/// Rate at raw day `t`: p(t)/p(t - tau + 1) - 1.
pub fn rate(prices: &[f64], t: usize, tau: usize) -> Result<f64> {
    if tau == 0 {
        return Err(Error::InvalidFilters("tau must be at least 1".into()));
    }
    if t >= prices.len() || t + 1 < tau {
        return Err(Error::InsufficientHistory {
            t,
            need: tau,
            len: prices.len(),
        });
    }
    Ok(prices[t] / prices[t + 1 - tau] - 1.0)
}

/// One-day log-return of the rescaled price starting at raw day `t`.
pub fn log_return(prices: &[f64], t: usize, tau: usize) -> Result<f64> {
    let g0 = rate(prices, t, tau)?;
    let g1 = rate(prices, t + 1, tau)?;
    Ok((g1 + 1.0).ln() - (g0 + 1.0).ln())
}

/// Mean of `values[t - tau + 1 ..= t]`.
pub fn moving_average(values: &[f64], t: usize, tau: usize) -> Result<f64> {
    if tau == 0 {
        return Err(Error::InvalidFilters("tau must be at least 1".into()));
    }
    if t >= values.len() || t + 1 < tau {
        return Err(Error::InsufficientHistory {
            t,
            need: tau,
            len: values.len(),
        });
    }
    Ok(window_mean(&values[t + 1 - tau..=t]))
}

/// Left-to-right mean of a window. Shared by every two-pass statistic so
/// that independent recomputations of the same window agree bit for bit.
pub fn window_mean(window: &[f64]) -> f64 {
    let mut sum = 0.0;
    for &v in window {
        sum += v;
    }
    sum / window.len() as f64
}

/// Left-to-right sum of squared deviations from `mean`.
pub fn centered_sum_sq(window: &[f64], mean: f64) -> f64 {
    let mut ss = 0.0;
    for &v in window {
        let d = v - mean;
        ss += d * d;
    }
    ss
}

/// Pearson correlation of two aligned windows (two-pass estimator, the
/// denominator is sqrt of the product of the summed squared deviations).
/// Results are clamped to [-1, 1] only against floating rounding; a value
/// farther than 1e-9 outside the interval is returned as computed.
pub fn pearson_window(a: &[f64], b: &[f64]) -> Result<f64> {
    assert_eq!(a.len(), b.len(), "correlation windows must be aligned");
    if a.is_empty() {
        return Err(Error::ZeroVariance);
    }
    let ma = window_mean(a);
    let mb = window_mean(b);
    let mut num = 0.0;
    let mut ssa = 0.0;
    let mut ssb = 0.0;
    for k in 0..a.len() {
        let da = a[k] - ma;
        let db = b[k] - mb;
        num += da * db;
        ssa += da * da;
        ssb += db * db;
    }
    if ssa == 0.0 || ssb == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let r = num / (ssa * ssb).sqrt();
    Ok(clamp_correlation(r))
}

pub(crate) fn clamp_correlation(r: f64) -> f64 {
    const TOL: f64 = 1e-9;
    if r > 1.0 && r - 1.0 <= TOL {
        1.0
    } else if r < -1.0 && -1.0 - r <= TOL {
        -1.0
    } else {
        r
    }
}

/// Correlation of two log-return series over the tau - 1 observations
/// `t - tau + 1 ..= t - 1`.
pub fn pearson(a: &LogReturnSeries, b: &LogReturnSeries, t: usize, tau: usize) -> Result<f64> {
    if tau < 2 {
        return Err(Error::InvalidFilters("correlation window needs tau >= 2".into()));
    }
    let n = tau - 1;
    let from = t.checked_sub(tau - 1).ok_or(Error::InsufficientHistory {
        t,
        need: tau,
        len: a.values().len(),
    })?;
    let wa = a.window(from, n).ok_or(Error::InsufficientHistory {
        t,
        need: tau,
        len: a.values().len(),
    })?;
    let wb = b.window(from, n).ok_or(Error::InsufficientHistory {
        t,
        need: tau,
        len: b.values().len(),
    })?;
    pearson_window(wa, wb)
}

/// Volatility of a rate window. A constant window is exactly 0 by
/// definition; the two-pass residual is skipped so rounding cannot leak in.
pub fn volatility_window(window: &[f64], mode: VolatilityMode) -> f64 {
    debug_assert!(!window.is_empty());
    let first = window[0];
    if window.iter().all(|&v| v == first) {
        return 0.0;
    }
    let mean = window_mean(window);
    let ss = centered_sum_sq(window, mean);
    match mode {
        VolatilityMode::Std => (ss / window.len() as f64).sqrt(),
        VolatilityMode::PaperLiteral => ss.sqrt(),
    }
}

/// Volatility of the tau rates `t - tau + 1 ..= t`.
pub fn volatility(rates: &RateSeries, t: usize, tau: usize, mode: VolatilityMode) -> Result<f64> {
    if tau == 0 {
        return Err(Error::InvalidFilters("tau must be at least 1".into()));
    }
    let from = t.checked_sub(tau - 1).ok_or(Error::InsufficientHistory {
        t,
        need: tau,
        len: rates.values().len(),
    })?;
    let w = rates.window(from, tau).ok_or(Error::InsufficientHistory {
        t,
        need: tau,
        len: rates.values().len(),
    })?;
    Ok(volatility_window(w, mode))
}

/// Absolute rate spread between two legs.
pub fn spread(gamma_i: f64, gamma_j: f64) -> f64 {
    (gamma_i - gamma_j).abs()
}

/// Ordinary-least-squares slope of stock returns on market returns over
/// aligned windows: cov(stock, market) / var(market).
pub fn market_beta(stock: &[f64], market: &[f64]) -> Result<f64> {
    assert_eq!(stock.len(), market.len(), "beta windows must be aligned");
    if stock.is_empty() {
        return Err(Error::ZeroMarketVariance);
    }
    let ms = window_mean(stock);
    let mm = window_mean(market);
    let mut cov = 0.0;
    let mut var_m = 0.0;
    for k in 0..stock.len() {
        let dm = market[k] - mm;
        cov += (stock[k] - ms) * dm;
        var_m += dm * dm;
    }
    if var_m == 0.0 {
        return Err(Error::ZeroMarketVariance);
    }
    Ok(cov / var_m)
}

/// Hedge ratio between two legs' betas: r = beta_i / beta_j. The portfolio
/// return dgamma_i - r * dgamma_j then has zero sample covariance with the
/// market over the same window.
pub fn hedge_ratio(beta_i: f64, beta_j: f64) -> Result<f64> {
    if beta_j == 0.0 {
        return Err(Error::ZeroBeta);
    }
    Ok(beta_i / beta_j)
}
