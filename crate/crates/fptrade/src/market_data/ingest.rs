//! Long-format CSV ingestion.
//!
//! Input schema: header `date,ticker,adj_close`, one row per observation,
//! ISO-8601 dates, rows in any order. The union of observed dates forms the
//! working calendar; tickers missing more than the allowed fraction of those
//! days are dropped, survivors get interior and trailing gaps forward-filled,
//! and the calendar is trimmed to the survivors' common start (a leading gap
//! has nothing to fill from).

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::market_data::{PriceSeries, PriceUniverse, TradingCalendar};

/// Gap handling knobs for ingestion.
#[derive(Debug, Clone)]
pub struct GapPolicy {
    /// A ticker survives iff its missing-day fraction on the union calendar
    /// (counted before any filling) is at most this value.
    pub max_missing_frac: f64,
}

impl Default for GapPolicy {
    fn default() -> Self {
        Self {
            max_missing_frac: 0.05,
        }
    }
}

impl GapPolicy {
    fn validate(&self) -> Result<()> {
        if !(self.max_missing_frac.is_finite() && (0.0..1.0).contains(&self.max_missing_frac)) {
            return Err(Error::InvalidUniverse(format!(
                "max_missing_frac {} outside [0, 1)",
                self.max_missing_frac
            )));
        }
        Ok(())
    }
}

/// A ticker rejected by the gap policy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DroppedTicker {
    pub ticker: String,
    pub missing_days: usize,
    pub calendar_days: usize,
}

/// What ingestion did: survivors, rejects, fill counts.
#[derive(Debug, Clone, Default)]
pub struct IngestReport {
    pub rows: u64,
    pub kept: Vec<String>,
    pub dropped: Vec<DroppedTicker>,
    pub filled_cells: u64,
    pub trimmed_leading_days: usize,
}

const EXPECTED_HEADER: [&str; 3] = ["date", "ticker", "adj_close"];

/// Loads a universe from a long-format CSV file.
pub fn load_universe(path: &Path, policy: &GapPolicy, tau: usize) -> Result<(PriceUniverse, IngestReport)> {
    let file = File::open(path)?;
    read_universe_csv(file, policy, tau)
}

/// Reader-based variant of [`load_universe`]; also the fuzzing entry point,
/// so every malformed input must come back as an error, never a panic.
pub fn read_universe_csv<R: Read>(
    reader: R,
    policy: &GapPolicy,
    tau: usize,
) -> Result<(PriceUniverse, IngestReport)> {
    policy.validate()?;
    if tau == 0 {
        return Err(Error::InvalidFilters("tau must be at least 1".into()));
    }

    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);

    {
        let headers = rdr.headers().map_err(csv_error)?;
        let got: Vec<&str> = headers.iter().map(str::trim).collect();
        if got != EXPECTED_HEADER {
            return Err(Error::MalformedCsv {
                line: 1,
                msg: format!("header must be \"date,ticker,adj_close\", got {got:?}"),
            });
        }
    }

    // ticker -> date -> price; BTreeMaps keep everything deterministically ordered.
    let mut by_ticker: BTreeMap<String, BTreeMap<NaiveDate, f64>> = BTreeMap::new();
    let mut rows: u64 = 0;
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 3 {
            return Err(Error::MalformedCsv {
                line,
                msg: format!("expected 3 fields, got {}", record.len()),
            });
        }
        let date_str = record[0].trim();
        let ticker = record[1].trim();
        let price_str = record[2].trim();
        let date = NaiveDate::parse_from_str(date_str, "%Y-%m-%d").map_err(|e| Error::MalformedCsv {
            line,
            msg: format!("bad date {date_str:?}: {e}"),
        })?;
        if ticker.is_empty() {
            return Err(Error::MalformedCsv {
                line,
                msg: "empty ticker".into(),
            });
        }
        let price: f64 = price_str.parse().map_err(|_| Error::MalformedCsv {
            line,
            msg: format!("bad price {price_str:?}"),
        })?;
        if !(price.is_finite() && price > 0.0) {
            return Err(Error::NonPositivePrice {
                line,
                ticker: ticker.to_string(),
                date: date.to_string(),
                price,
            });
        }
        if by_ticker
            .entry(ticker.to_string())
            .or_default()
            .insert(date, price)
            .is_some()
        {
            return Err(Error::MalformedCsv {
                line,
                msg: format!("duplicate observation for {ticker} on {date}"),
            });
        }
        rows += 1;
    }
    if by_ticker.is_empty() {
        return Err(Error::InvalidUniverse("no data rows".into()));
    }

    // Union calendar over every observed date.
    let mut union: Vec<NaiveDate> = by_ticker
        .values()
        .flat_map(|m| m.keys().copied())
        .collect();
    union.sort_unstable();
    union.dedup();

    // Gap policy: missing fraction measured on the full union, before fill.
    let mut report = IngestReport {
        rows,
        ..Default::default()
    };
    let mut survivors: Vec<(&String, &BTreeMap<NaiveDate, f64>)> = Vec::new();
    for (ticker, obs) in &by_ticker {
        let missing = union.len() - obs.len();
        let frac = missing as f64 / union.len() as f64;
        if frac <= policy.max_missing_frac {
            survivors.push((ticker, obs));
        } else {
            report.dropped.push(DroppedTicker {
                ticker: ticker.clone(),
                missing_days: missing,
                calendar_days: union.len(),
            });
        }
    }
    if survivors.is_empty() {
        return Err(Error::InvalidUniverse(
            "gap policy dropped every ticker".into(),
        ));
    }

    // Leading gaps cannot be forward-filled: trim to the latest first
    // observation among survivors.
    let common_start = survivors
        .iter()
        .map(|(_, obs)| *obs.keys().next().expect("survivor has observations"))
        .max()
        .expect("at least one survivor");
    let start_idx = union.partition_point(|d| *d < common_start);
    report.trimmed_leading_days = start_idx;
    let calendar_days: Vec<NaiveDate> = union[start_idx..].to_vec();
    if calendar_days.len() < tau + 1 {
        return Err(Error::CalendarTooShort {
            got: calendar_days.len(),
            need: tau + 1,
        });
    }

    let mut series = Vec::with_capacity(survivors.len());
    for (ticker, obs) in &survivors {
        let mut prices = Vec::with_capacity(calendar_days.len());
        let mut last = None;
        for day in &calendar_days {
            match obs.get(day) {
                Some(&p) => {
                    prices.push(p);
                    last = Some(p);
                }
                None => {
                    let p = last.expect("first calendar day is at or after first observation");
                    prices.push(p);
                    report.filled_cells += 1;
                }
            }
        }
        series.push(PriceSeries::new(ticker.as_str(), prices)?);
        report.kept.push(ticker.to_string());
    }

    let universe = PriceUniverse::new(TradingCalendar::new(calendar_days)?, series, tau)?;
    Ok((universe, report))
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::MalformedCsv {
        line,
        msg: e.to_string(),
    }
}

/// Writes a universe back out in the input long format, date-major, tickers
/// in universe order. Byte-stable for identical universes; prices use the
/// shortest representation that round-trips.
pub fn write_universe_csv<W: Write>(universe: &PriceUniverse, mut w: W) -> Result<()> {
    writeln!(w, "date,ticker,adj_close")?;
    for (raw, day) in universe.calendar().days().iter().enumerate() {
        for s in universe.series() {
            writeln!(w, "{day},{},{}", s.ticker(), s.prices()[raw])?;
        }
    }
    Ok(())
}
