//! Price universes: aligned daily close series over a shared trading
//! calendar, loaded from CSV or generated synthetically.

mod ingest;
mod synthetic;

pub use ingest::{load_universe, read_universe_csv, write_universe_csv, DroppedTicker, GapPolicy, IngestReport};
pub use synthetic::{generate_synthetic, BlockSpec, SyntheticSpec};

use chrono::NaiveDate;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::indicators::LogReturnSeries;

/// Strictly increasing trading days shared by every series of a universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradingCalendar {
    days: Vec<NaiveDate>,
}

impl TradingCalendar {
    pub fn new(days: Vec<NaiveDate>) -> Result<Self> {
        if days.is_empty() {
            return Err(Error::InvalidUniverse("calendar is empty".into()));
        }
        for w in days.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidUniverse(format!(
                    "calendar not strictly increasing at {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { days })
    }

    pub fn len(&self) -> usize {
        self.days.len()
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }

    pub fn day(&self, raw: usize) -> NaiveDate {
        self.days[raw]
    }

    pub fn days(&self) -> &[NaiveDate] {
        &self.days
    }
}

/// One ticker's daily closes, aligned to the universe calendar.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    ticker: String,
    prices: Vec<f64>,
}

impl PriceSeries {
    pub fn new(ticker: impl Into<String>, prices: Vec<f64>) -> Result<Self> {
        let ticker = ticker.into();
        if ticker.is_empty() {
            return Err(Error::InvalidUniverse("empty ticker name".into()));
        }
        for (i, &p) in prices.iter().enumerate() {
            if !(p.is_finite() && p > 0.0) {
                return Err(Error::InvalidUniverse(format!(
                    "ticker {ticker}: price {p} at day {i} is not a positive finite number"
                )));
            }
        }
        Ok(Self { ticker, prices })
    }

    pub fn ticker(&self) -> &str {
        &self.ticker
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }
}

/// Aligned price series over a shared calendar. The first `warm_up` days are
/// reserved for rolling statistics; evaluation day 0 is raw day `warm_up`.
#[derive(Debug, Clone)]
pub struct PriceUniverse {
    calendar: TradingCalendar,
    series: Vec<PriceSeries>,
    warm_up: usize,
}

impl PriceUniverse {
    /// Validates alignment, ticker uniqueness and a minimum span of
    /// `warm_up + 1` days (warm-up plus at least one evaluation day).
    pub fn new(calendar: TradingCalendar, series: Vec<PriceSeries>, warm_up: usize) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::InvalidUniverse("universe has no tickers".into()));
        }
        if warm_up == 0 {
            return Err(Error::InvalidUniverse("warm_up must be at least 1".into()));
        }
        if calendar.len() < warm_up + 1 {
            return Err(Error::CalendarTooShort {
                got: calendar.len(),
                need: warm_up + 1,
            });
        }
        for s in &series {
            if s.len() != calendar.len() {
                return Err(Error::InvalidUniverse(format!(
                    "ticker {} has {} prices, calendar has {} days",
                    s.ticker(),
                    s.len(),
                    calendar.len()
                )));
            }
        }
        let mut names: Vec<&str> = series.iter().map(|s| s.ticker()).collect();
        names.sort_unstable();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidUniverse(format!("duplicate ticker {}", w[0])));
            }
        }
        Ok(Self {
            calendar,
            series,
            warm_up,
        })
    }

    pub fn calendar(&self) -> &TradingCalendar {
        &self.calendar
    }

    pub fn series(&self) -> &[PriceSeries] {
        &self.series
    }

    pub fn ticker(&self, idx: usize) -> &PriceSeries {
        &self.series[idx]
    }

    pub fn n_tickers(&self) -> usize {
        self.series.len()
    }

    pub fn n_days(&self) -> usize {
        self.calendar.len()
    }

    pub fn warm_up(&self) -> usize {
        self.warm_up
    }

    /// Number of evaluation days (calendar length minus warm-up); always >= 1.
    pub fn eval_len(&self) -> usize {
        self.calendar.len() - self.warm_up
    }

    /// Raw series index of evaluation day `t`.
    pub fn raw_index(&self, t: usize) -> usize {
        self.warm_up + t
    }

    /// SHA-256 over the canonical binary form (dates, tickers, price bits,
    /// warm-up). Stable across runs for identical content; used to stamp
    /// reports with their input.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.warm_up as u64).to_le_bytes());
        h.update((self.calendar.len() as u64).to_le_bytes());
        for d in self.calendar.days() {
            h.update(d.to_string().as_bytes());
        }
        for s in &self.series {
            h.update((s.ticker().len() as u64).to_le_bytes());
            h.update(s.ticker().as_bytes());
            for &p in s.prices() {
                h.update(p.to_bits().to_le_bytes());
            }
        }
        let out = h.finalize();
        let mut hex = String::with_capacity(64);
        for b in out {
            hex.push_str(&format!("{b:02x}"));
        }
        hex
    }
}

/// Equal-weight market return: per day, the mean over tickers of the one-day
/// log-return of the rescaled price. Indexed like the per-ticker log-return
/// series (first defined raw day = `warm_up - 1`, last = `n_days - 2`).
pub fn market_return_series(universe: &PriceUniverse) -> Result<LogReturnSeries> {
    if universe.eval_len() < 2 {
        return Err(Error::InvalidUniverse(
            "market return series needs an evaluation window of at least 2 days".into(),
        ));
    }
    let tau = universe.warm_up();
    let per_ticker: Vec<LogReturnSeries> = universe
        .series()
        .iter()
        .map(|s| LogReturnSeries::compute(s.prices(), tau))
        .collect::<Result<_>>()?;
    let offset = per_ticker[0].first_raw_index();
    let len = per_ticker[0].values().len();
    let n = per_ticker.len() as f64;
    let mut values = Vec::with_capacity(len);
    for k in 0..len {
        let mut sum = 0.0;
        for series in &per_ticker {
            sum += series.values()[k];
        }
        values.push(sum / n);
    }
    Ok(LogReturnSeries::from_parts(offset, values))
}
