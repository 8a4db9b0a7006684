//! Deterministic synthetic universes: correlated geometric random walks.
//!
//! Tickers are grouped into equicorrelated blocks; within a block every pair
//! of daily log-increments has the same target correlation, tickers outside
//! any block are independent. Everything is a pure function of the spec (the
//! seed drives a counter-based stream cipher RNG), so identical specs yield
//! bit-identical universes.

use chrono::{Datelike, NaiveDate, Weekday};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market_data::{PriceSeries, PriceUniverse, TradingCalendar};

/// One equicorrelated group of tickers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub size: usize,
    pub rho: f64,
}

/// Recipe for a synthetic universe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub n_tickers: usize,
    pub n_days: usize,
    pub blocks: Vec<BlockSpec>,
    /// Per-day drift of the log price.
    pub drift: f64,
    /// Per-day standard deviation of the log-price increment.
    pub step_vol: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let spec: SyntheticSpec = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json_reader<R: std::io::Read>(r: R) -> Result<Self> {
        let spec: SyntheticSpec = serde_json::from_reader(r)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_tickers == 0 {
            return Err(Error::InvalidSpec("n_tickers must be at least 1".into()));
        }
        if self.n_days < 2 {
            return Err(Error::InvalidSpec("n_days must be at least 2".into()));
        }
        if !self.drift.is_finite() {
            return Err(Error::InvalidSpec(format!("drift {} is not finite", self.drift)));
        }
        if !(self.step_vol.is_finite() && self.step_vol > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "step_vol {} must be a positive finite number",
                self.step_vol
            )));
        }
        let mut covered = 0usize;
        for (i, b) in self.blocks.iter().enumerate() {
            if b.size == 0 {
                return Err(Error::InvalidSpec(format!("block {i} has size 0")));
            }
            if !(b.rho.is_finite() && b.rho > -1.0 && b.rho < 1.0) {
                return Err(Error::InvalidSpec(format!(
                    "block {i} correlation {} outside (-1, 1)",
                    b.rho
                )));
            }
            if b.size >= 2 && b.rho <= -1.0 / (b.size as f64 - 1.0) {
                return Err(Error::InfeasibleCorrelation(format!(
                    "block {i}: equicorrelation {} with size {} is not positive definite \
                     (needs rho > {})",
                    b.rho,
                    b.size,
                    -1.0 / (b.size as f64 - 1.0)
                )));
            }
            covered = covered
                .checked_add(b.size)
                .ok_or_else(|| Error::InvalidSpec("block sizes overflow".into()))?;
        }
        if covered > self.n_tickers {
            return Err(Error::InvalidSpec(format!(
                "blocks cover {covered} tickers, spec has only {}",
                self.n_tickers
            )));
        }
        Ok(())
    }
}

/// Lower-triangular Cholesky factor of the k x k equicorrelation matrix
/// (unit diagonal, `rho` off-diagonal).
fn equicorrelation_cholesky(k: usize, rho: f64) -> Result<Vec<Vec<f64>>> {
    let mut l = vec![vec![0.0f64; k]; k];
    for i in 0..k {
        for j in 0..=i {
            let a = if i == j { 1.0 } else { rho };
            let mut s = a;
            for m in 0..j {
                s -= l[i][m] * l[j][m];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::InfeasibleCorrelation(format!(
                        "equicorrelation matrix (k = {k}, rho = {rho}) is not positive definite"
                    )));
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Ok(l)
}

/// Consecutive weekdays starting on a fixed Monday; looks like a trading
/// calendar and keeps synthetic output stable.
fn synthetic_calendar(n_days: usize) -> Vec<NaiveDate> {
    let mut days = Vec::with_capacity(n_days);
    let mut d = NaiveDate::from_ymd_opt(2015, 1, 5).expect("valid epoch");
    while days.len() < n_days {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            days.push(d);
        }
        d = d.succ_opt().expect("calendar within range");
    }
    days
}

/// Generates the universe described by `spec`, reserving `tau` warm-up days.
///
/// Draw order is fixed (day-major; blocks in spec order, then uncovered
/// tickers), which pins the RNG stream and therefore the output bits.
pub fn generate_synthetic(spec: &SyntheticSpec, tau: usize) -> Result<PriceUniverse> {
    spec.validate()?;
    if tau == 0 {
        return Err(Error::InvalidFilters("tau must be at least 1".into()));
    }
    if spec.n_days < tau + 1 {
        return Err(Error::CalendarTooShort {
            got: spec.n_days,
            need: tau + 1,
        });
    }

    let factors: Vec<Vec<Vec<f64>>> = spec
        .blocks
        .iter()
        .map(|b| equicorrelation_cholesky(b.size, b.rho))
        .collect::<Result<_>>()?;
    let covered: usize = spec.blocks.iter().map(|b| b.size).sum();
    let singles = spec.n_tickers - covered;

    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let normal = StandardNormal;
    let mut log_prices = vec![vec![0.0f64; spec.n_days]; spec.n_tickers];
    let p0_log = 100.0f64.ln();
    for lp in &mut log_prices {
        lp[0] = p0_log;
    }

    let mut z: Vec<f64> = Vec::new();
    for day in 1..spec.n_days {
        let mut ticker = 0usize;
        for (b, l) in spec.blocks.iter().zip(&factors) {
            z.clear();
            z.extend((0..b.size).map(|_| -> f64 { normal.sample(&mut rng) }));
            for i in 0..b.size {
                let mut mixed = 0.0;
                for (m, lim) in l[i].iter().enumerate().take(i + 1) {
                    mixed += lim * z[m];
                }
                let inc = spec.drift + spec.step_vol * mixed;
                log_prices[ticker + i][day] = log_prices[ticker + i][day - 1] + inc;
            }
            ticker += b.size;
        }
        for _ in 0..singles {
            let e: f64 = normal.sample(&mut rng);
            let inc = spec.drift + spec.step_vol * e;
            log_prices[ticker][day] = log_prices[ticker][day - 1] + inc;
            ticker += 1;
        }
    }

    let width = (spec.n_tickers.max(2) - 1).to_string().len().max(4);
    let series = log_prices
        .into_iter()
        .enumerate()
        .map(|(i, lp)| {
            PriceSeries::new(
                format!("S{i:0width$}"),
                lp.into_iter().map(f64::exp).collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let calendar = TradingCalendar::new(synthetic_calendar(spec.n_days))?;
    PriceUniverse::new(calendar, series, tau)
}
