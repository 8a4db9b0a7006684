//! Threshold-grid sweep over every pair of a universe.
//!
//! Work partitioning: pairs are independent, so rows (first leg index) are
//! processed in parallel and all threshold cells of one pair share its
//! rolling statistics. Results are collected in row order and folded
//! sequentially, so reports are byte-identical for any worker count.

mod report;

pub use report::{
    cells_csv_string, fpt_csv_string, metadata_json_string, render_cells_table, scatter_csv_string,
    write_cells_csv, write_fpt_csv, write_metadata_json, write_report_dir, write_scatter_csv,
};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::indicators::VolatilityMode;
use crate::market_data::PriceUniverse;
use crate::pairgame::{
    play_pair_view, DayStats, FilterParams, PairDayView, ThresholdSet, TradeKind, TradeOutcome,
};
use crate::rolling::{FullPairView, PairCursor, TickerStats};

/// A labeled list of threshold cells, theta-major ascending.
#[derive(Debug, Clone)]
pub struct GridSpec {
    label: String,
    cells: Vec<ThresholdSet>,
}

fn regime_cells(theta_bps: impl Iterator<Item = u32>, step_bp: u32) -> Vec<ThresholdSet> {
    let mut out = Vec::new();
    for theta_bp in theta_bps {
        let mut eps_bp = 0;
        while eps_bp < theta_bp {
            out.push(ThresholdSet::neutral_bp(theta_bp, eps_bp).expect("eps < theta by loop"));
            eps_bp += step_bp;
        }
    }
    out
}

impl GridSpec {
    /// Fine regime: theta 1% to 9% step 1%, epsilon from 0 in the same step.
    pub fn fine() -> Self {
        Self {
            label: "fine".into(),
            cells: regime_cells((1..=9).map(|k| k * 100), 100),
        }
    }

    /// Coarse regime: theta 10% to 100% step 10%, epsilon from 0 in the same
    /// step; 55 cells, one per report-table row.
    pub fn coarse() -> Self {
        Self {
            label: "coarse".into(),
            cells: regime_cells((1..=10).map(|k| k * 1000), 1000),
        }
    }

    /// Both regimes, 100 cells.
    pub fn default_grid() -> Self {
        let mut cells = Self::fine().cells;
        cells.extend(Self::coarse().cells);
        Self {
            label: "default".into(),
            cells,
        }
    }

    /// One cell with the marginal loss-cut omega = 2*theta - epsilon.
    pub fn single(theta: f64, epsilon: f64) -> Result<Self> {
        let ts = ThresholdSet::neutral(theta, epsilon)?;
        Ok(Self {
            label: "single".into(),
            cells: vec![ts],
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn cells(&self) -> &[ThresholdSet] {
        &self.cells
    }

    pub fn validate(&self) -> Result<()> {
        if self.cells.is_empty() {
            return Err(Error::InvalidGrid("grid has no cells".into()));
        }
        Ok(())
    }
}

/// The scattergram threshold family: epsilon = 0.1 * theta for theta 10%,
/// 20%, 30%. Swept in addition to the grid; wins feed the sigma/profit
/// scattergram.
pub fn scatter_cells() -> [ThresholdSet; 3] {
    [
        ThresholdSet::neutral_bp(1000, 100).unwrap(),
        ThresholdSet::neutral_bp(2000, 200).unwrap(),
        ThresholdSet::neutral_bp(3000, 300).unwrap(),
    ]
}

/// Number of unordered pairs of `n` tickers.
pub fn pair_count(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Every unordered pair exactly once, (i, j) with i < j, row-major.
pub fn enumerate_pairs(n: usize) -> impl Iterator<Item = (u32, u32)> {
    (0..n as u32).flat_map(move |i| (i + 1..n as u32).map(move |j| (i, j)))
}

/// p_w = n_w / (n_w + n_l); None when no trade resolved.
pub fn winning_probability(n_w: u64, n_l: u64) -> Option<f64> {
    let n = n_w + n_l;
    (n > 0).then(|| n_w as f64 / n as f64)
}

/// Aggregate of one threshold cell over all pairs.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub thresholds: ThresholdSet,
    pub n_w: u64,
    pub n_l: u64,
    /// None when the cell has no resolved trades (never fabricated as 0).
    pub p_w: Option<f64>,
    /// Mean signed profit over resolved trades; None when there are none.
    pub eta: Option<f64>,
    /// Individual outcomes, including unresolved ones. Populated by
    /// [`run_cell`]; a full [`run_sweep`] folds outcomes into aggregates
    /// instead of retaining them, to bound memory over millions of pairs.
    pub outcomes: Vec<TradeOutcome>,
}

impl CellResult {
    pub fn from_outcomes(thresholds: ThresholdSet, outcomes: Vec<TradeOutcome>) -> Self {
        let mut agg = CellAgg::default();
        for o in &outcomes {
            match o.kind {
                TradeKind::Win => agg.add_win(o.profit().expect("win has profit")),
                TradeKind::Lose => agg.add_loss(o.profit().expect("loss has profit")),
                TradeKind::Unresolved => {}
            }
        }
        let mut cell = agg.into_cell(thresholds);
        cell.outcomes = outcomes;
        cell
    }

    /// Resolved trades counted into p_w and eta.
    pub fn counted(&self) -> u64 {
        self.n_w + self.n_l
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct CellAgg {
    n_w: u64,
    n_l: u64,
    profit_sum: f64,
}

impl CellAgg {
    fn add_win(&mut self, profit: f64) {
        self.n_w += 1;
        self.profit_sum += profit;
    }

    fn add_loss(&mut self, profit: f64) {
        self.n_l += 1;
        self.profit_sum += profit;
    }

    fn into_cell(self, thresholds: ThresholdSet) -> CellResult {
        let counted = self.n_w + self.n_l;
        CellResult {
            thresholds,
            n_w: self.n_w,
            n_l: self.n_l,
            p_w: winning_probability(self.n_w, self.n_l),
            eta: (counted > 0).then(|| self.profit_sum / counted as f64),
            outcomes: Vec::new(),
        }
    }
}

/// Counting histogram over first-passage times in days.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    bin_width: u64,
    bins: BTreeMap<u64, u64>,
}

impl Histogram {
    pub fn new(bin_width: u64) -> Result<Self> {
        if bin_width == 0 {
            return Err(Error::InvalidConfig("histogram bin width must be at least 1 day".into()));
        }
        Ok(Self {
            bin_width,
            bins: BTreeMap::new(),
        })
    }

    pub fn add(&mut self, days: u64) {
        let start = days / self.bin_width * self.bin_width;
        *self.bins.entry(start).or_insert(0) += 1;
    }

    pub fn bin_width(&self) -> u64 {
        self.bin_width
    }

    /// Total count across bins.
    pub fn mass(&self) -> u64 {
        self.bins.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// (bin start, count) in ascending bin order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.bins.iter().map(|(k, v)| (*k, *v))
    }

    /// Start of the most populated bin (smallest start on ties).
    pub fn mode_bin(&self) -> Option<u64> {
        let max = self.bins.values().max()?;
        self.bins.iter().find(|(_, v)| *v == max).map(|(k, _)| *k)
    }

    /// Exclusive upper edge of the last occupied bin.
    pub fn support_end(&self) -> Option<u64> {
        self.bins.keys().next_back().map(|k| k + self.bin_width)
    }
}

/// Splits resolved outcomes into win and lose first-passage histograms.
/// Unresolved outcomes have no passage time and are ignored.
pub fn fpt_histograms(outcomes: &[TradeOutcome], bin_width: u64) -> Result<(Histogram, Histogram)> {
    let mut win = Histogram::new(bin_width)?;
    let mut lose = Histogram::new(bin_width)?;
    for o in outcomes {
        let Some(days) = o.passage_days() else { continue };
        match o.kind {
            TradeKind::Win => win.add(days as u64),
            TradeKind::Lose => lose.add(days as u64),
            TradeKind::Unresolved => unreachable!("passage time implies a decision"),
        }
    }
    Ok((win, lose))
}

/// One scattergram point: a winner from the epsilon = 0.1 * theta family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterPoint {
    /// Mean of the two legs' volatilities at the start day.
    pub sigma: f64,
    /// Signed profit (always >= 0.9 * theta for these cells).
    pub profit: f64,
    pub theta_bp: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct FilterMeta {
    pub rho0: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub tau: usize,
    pub tau_max: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridMeta {
    pub label: String,
    pub n_cells: usize,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct SweepTotals {
    pub started: u64,
    pub wins: u64,
    pub losses: u64,
    pub unresolved: u64,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct SkipTally {
    /// Pair-days whose volatilities passed but whose log-return window had
    /// zero variance, making the correlation undefined.
    pub zero_variance_pair_days: u64,
}

/// Run parameters and provenance; everything needed to regenerate the
/// report. Deliberately excludes wall-clock time and worker count, which
/// must not influence any output byte.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool_version: String,
    pub input_digest: String,
    pub n_tickers: usize,
    pub n_days: usize,
    pub warm_up: usize,
    pub eval_len: usize,
    pub n_pairs: u64,
    pub volatility_mode: String,
    pub filters: FilterMeta,
    pub grid: GridMeta,
    pub histogram_bin_width_days: u64,
    pub seed: Option<u64>,
    pub totals: SweepTotals,
    pub skips: SkipTally,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub filters: FilterParams,
    pub mode: VolatilityMode,
    pub grid: GridSpec,
    pub workers: usize,
    pub histogram_bin_width: u64,
    /// Generator seed echoed into the metadata; None for ingested data.
    pub seed: Option<u64>,
}

impl SweepConfig {
    pub fn new(filters: FilterParams, mode: VolatilityMode, grid: GridSpec) -> Self {
        let workers = std::thread::available_parallelism().map_or(1, |p| p.get());
        Self {
            filters,
            mode,
            grid,
            workers,
            histogram_bin_width: 1,
            seed: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.filters.validate()?;
        self.grid.validate()?;
        if self.workers == 0 {
            return Err(Error::InvalidConfig("worker count must be at least 1".into()));
        }
        if self.histogram_bin_width == 0 {
            return Err(Error::InvalidConfig("histogram bin width must be at least 1 day".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub cells: Vec<CellResult>,
    pub fpt_win: Histogram,
    pub fpt_lose: Histogram,
    pub scatter: Vec<ScatterPoint>,
    pub metadata: Metadata,
}

/// Pair view backed by precomputed spreads and the pair's filter-passing
/// days. `next_candidate` jumps straight to the next passing day, so the
/// per-cell scan cost is proportional to passing days, not the calendar.
struct CachedPairView<'a> {
    d: &'a [f64],
    pass_days: &'a [u32],
    pass_stats: &'a [DayStats],
}

impl PairDayView for CachedPairView<'_> {
    fn eval_len(&self) -> usize {
        self.d.len()
    }

    fn spread(&self, t: usize) -> f64 {
        self.d[t]
    }

    fn stats(&mut self, t: usize) -> Option<DayStats> {
        let k = self.pass_days.binary_search(&(t as u32)).ok()?;
        Some(self.pass_stats[k])
    }

    fn next_candidate(&self, from: usize) -> Option<usize> {
        let k = self.pass_days.partition_point(|&d| (d as usize) < from);
        self.pass_days.get(k).map(|&d| d as usize)
    }
}

/// Per evaluation day bit flags of "volatility defined and inside the band",
/// bounded by the start horizon.
fn sigma_ok_bits(stats: &TickerStats, filters: &FilterParams, horizon: usize) -> Vec<u64> {
    let eval_len = stats.eval_len();
    let words = eval_len.div_ceil(64).max(1);
    let mut bits = vec![0u64; words];
    for t in stats.stat_start()..eval_len.min(horizon + 1) {
        let s = stats.sigma_slice()[t];
        if s > filters.sigma_min && s < filters.sigma_max {
            bits[t / 64] |= 1 << (t % 64);
        }
    }
    bits
}

struct PairHit {
    cell: u32,
    kind: TradeKind,
    passage: u32,
    profit: f64,
    sigma_mean: f64,
}

struct RowYield {
    hits: Vec<PairHit>,
    zero_variance_days: u64,
}

/// Plays every cell for every pair (i, j) with a fixed first leg i.
fn process_row(
    i: usize,
    stats: &[TickerStats],
    bits: &[Vec<u64>],
    filters: &FilterParams,
    all_cells: &[ThresholdSet],
    grid_len: usize,
) -> RowYield {
    let n = stats.len();
    let eval_len = stats[i].eval_len();
    let mut hits = Vec::new();
    let mut zero_variance_days = 0u64;
    let mut d_buf = vec![0.0f64; eval_len];
    let mut pass_days: Vec<u32> = Vec::new();
    let mut pass_stats: Vec<DayStats> = Vec::new();
    let ga = stats[i].gamma_eval_slice();
    for j in i + 1..n {
        let mut cursor = PairCursor::new(&stats[i], &stats[j]);
        pass_days.clear();
        pass_stats.clear();
        let sb = stats[j].sigma_slice();
        let sa = stats[i].sigma_slice();
        for (w, (wa, wb)) in bits[i].iter().zip(&bits[j]).enumerate() {
            let mut word = wa & wb;
            while word != 0 {
                let t = w * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                match cursor.rho_at(t) {
                    Some(rho) => {
                        if rho > filters.rho0 {
                            pass_days.push(t as u32);
                            pass_stats.push(DayStats {
                                rho,
                                sigma_a: sa[t],
                                sigma_b: sb[t],
                            });
                        }
                    }
                    None => zero_variance_days += 1,
                }
            }
        }
        if pass_days.is_empty() {
            continue;
        }
        let gb = stats[j].gamma_eval_slice();
        for (d, (x, y)) in d_buf.iter_mut().zip(ga.iter().zip(gb)) {
            *d = crate::indicators::spread(*x, *y);
        }
        let mut view = CachedPairView {
            d: &d_buf,
            pass_days: &pass_days,
            pass_stats: &pass_stats,
        };
        for (cell, ts) in all_cells.iter().enumerate() {
            let Some(out) = play_pair_view(&mut view, (i as u32, j as u32), filters, ts) else {
                continue;
            };
            let in_grid = cell < grid_len;
            if !in_grid && out.kind != TradeKind::Win {
                continue; // scatter family keeps winners only
            }
            hits.push(PairHit {
                cell: cell as u32,
                kind: out.kind,
                passage: out.passage_days().unwrap_or(0) as u32,
                profit: out.profit().unwrap_or(0.0),
                sigma_mean: (out.sigma_a + out.sigma_b) / 2.0,
            });
        }
    }
    RowYield {
        hits,
        zero_variance_days,
    }
}

/// Sweeps the whole grid (plus the scattergram family) over every pair.
/// Deterministic: the report depends only on the universe and the config,
/// never on the worker count or scheduling.
pub fn run_sweep(universe: &PriceUniverse, config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let filters = &config.filters;
    if filters.tau != universe.warm_up() {
        return Err(Error::InvalidFilters(format!(
            "tau {} must equal the universe warm-up {}",
            filters.tau,
            universe.warm_up()
        )));
    }
    let n = universe.n_tickers();
    let eval_len = universe.eval_len();
    let horizon = filters.tau_max.min(eval_len - 1);
    let grid_len = config.grid.cells().len();
    let mut all_cells = config.grid.cells().to_vec();
    all_cells.extend(scatter_cells());

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;

    let rows = pool.install(|| -> Result<Vec<RowYield>> {
        let stats: Vec<TickerStats> = universe
            .series()
            .par_iter()
            .map(|s| TickerStats::compute(s.prices(), filters.tau, universe.warm_up(), config.mode))
            .collect::<Result<_>>()?;
        let bits: Vec<Vec<u64>> = stats
            .par_iter()
            .map(|ts| sigma_ok_bits(ts, filters, horizon))
            .collect();
        // Rows collected positionally: fold order is row-major regardless
        // of which worker ran which row.
        Ok((0..n.saturating_sub(1))
            .into_par_iter()
            .map(|i| process_row(i, &stats, &bits, filters, &all_cells, grid_len))
            .collect())
    })?;

    let mut aggs = vec![CellAgg::default(); grid_len];
    let mut fpt_win = Histogram::new(config.histogram_bin_width)?;
    let mut fpt_lose = Histogram::new(config.histogram_bin_width)?;
    let mut scatter = Vec::new();
    let mut totals = SweepTotals::default();
    let mut skips = SkipTally::default();
    for row in &rows {
        skips.zero_variance_pair_days += row.zero_variance_days;
        for hit in &row.hits {
            let cell = hit.cell as usize;
            if cell < grid_len {
                totals.started += 1;
                match hit.kind {
                    TradeKind::Win => {
                        aggs[cell].add_win(hit.profit);
                        fpt_win.add(hit.passage as u64);
                        totals.wins += 1;
                    }
                    TradeKind::Lose => {
                        aggs[cell].add_loss(hit.profit);
                        fpt_lose.add(hit.passage as u64);
                        totals.losses += 1;
                    }
                    TradeKind::Unresolved => totals.unresolved += 1,
                }
            } else {
                scatter.push(ScatterPoint {
                    sigma: hit.sigma_mean,
                    profit: hit.profit,
                    theta_bp: all_cells[cell].theta_bp(),
                });
            }
        }
    }
    let cells = aggs
        .into_iter()
        .zip(config.grid.cells())
        .map(|(agg, ts)| agg.into_cell(*ts))
        .collect();

    let metadata = Metadata {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        input_digest: universe.digest(),
        n_tickers: n,
        n_days: universe.n_days(),
        warm_up: universe.warm_up(),
        eval_len,
        n_pairs: pair_count(n),
        volatility_mode: config.mode.as_str().to_string(),
        filters: FilterMeta {
            rho0: filters.rho0,
            sigma_min: filters.sigma_min,
            sigma_max: filters.sigma_max,
            tau: filters.tau,
            tau_max: filters.tau_max,
        },
        grid: GridMeta {
            label: config.grid.label().to_string(),
            n_cells: grid_len,
        },
        histogram_bin_width_days: config.histogram_bin_width,
        seed: config.seed,
        totals,
        skips,
    };
    Ok(SweepReport {
        cells,
        fpt_win,
        fpt_lose,
        scatter,
        metadata,
    })
}

/// Plays one threshold cell over every pair, retaining every outcome.
/// Sequential; intended for small universes and diagnostics.
pub fn run_cell(
    universe: &PriceUniverse,
    filters: &FilterParams,
    mode: VolatilityMode,
    theta: f64,
    epsilon: f64,
) -> Result<CellResult> {
    filters.validate()?;
    if filters.tau != universe.warm_up() {
        return Err(Error::InvalidFilters(format!(
            "tau {} must equal the universe warm-up {}",
            filters.tau,
            universe.warm_up()
        )));
    }
    let ts = ThresholdSet::neutral(theta, epsilon)?;
    let stats: Vec<TickerStats> = universe
        .series()
        .iter()
        .map(|s| TickerStats::compute(s.prices(), filters.tau, universe.warm_up(), mode))
        .collect::<Result<_>>()?;
    let mut outcomes = Vec::new();
    for (i, j) in enumerate_pairs(universe.n_tickers()) {
        let mut view = FullPairView::new(
            &stats[i as usize],
            &stats[j as usize],
            filters.tau,
            universe.warm_up(),
        );
        if let Some(out) = play_pair_view(&mut view, (i, j), filters, &ts) {
            outcomes.push(out);
        }
    }
    Ok(CellResult::from_outcomes(ts, outcomes))
}
