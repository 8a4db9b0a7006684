//! Brute-force reference simulator. Recomputes every statistic day by day
//! straight from raw prices and replays the trading game with a plain
//! forward loop. Shares only parameter types with the library under test,
//! never computation paths, so agreement is evidence and not tautology.

use std::collections::BTreeMap;

use fptrade::indicators::VolatilityMode;
use fptrade::market_data::PriceUniverse;
use fptrade::pairgame::{FilterParams, ThresholdSet};

/// One replayed trade. `kind` is "win", "lose" or "unresolved".
#[derive(Debug, Clone, PartialEq)]
pub struct RefOutcome {
    pub kind: &'static str,
    pub t_start: usize,
    pub d_start: f64,
    pub t_decision: Option<usize>,
    pub profit: Option<f64>,
    pub sigma_a: f64,
    pub sigma_b: f64,
}

fn gamma_at(p: &[f64], raw: usize, tau: usize) -> f64 {
    p[raw] / p[raw + 1 - tau] - 1.0
}

fn mean(w: &[f64]) -> f64 {
    let mut s = 0.0;
    for &v in w {
        s += v;
    }
    s / w.len() as f64
}

/// Naive per-ticker statistics, one full window recomputation per day.
pub struct RefTicker {
    /// Rate per evaluation day.
    pub gamma: Vec<f64>,
    /// One-day log-returns of the rescaled price; index k is raw day
    /// k + tau - 1.
    dg: Vec<f64>,
    /// Volatility per evaluation day; None until both rolling windows have
    /// a full tau days of defined rates behind them.
    pub sigma: Vec<Option<f64>>,
    tau: usize,
    warm_up: usize,
}

impl RefTicker {
    pub fn compute(prices: &[f64], tau: usize, warm_up: usize, mode: VolatilityMode) -> Self {
        let n = prices.len();
        let eval_len = n - warm_up;
        let gamma = (0..eval_len).map(|t| gamma_at(prices, warm_up + t, tau)).collect();
        let dg = (tau - 1..n - 1)
            .map(|r| (gamma_at(prices, r + 1, tau) + 1.0).ln() - (gamma_at(prices, r, tau) + 1.0).ln())
            .collect();
        let mut sigma = vec![None; eval_len];
        for (t, slot) in sigma.iter_mut().enumerate() {
            let raw = warm_up + t;
            // The volatility window holds the tau rates ending at `raw`; the
            // oldest one looks back another tau - 1 days.
            if raw < 2 * (tau - 1) {
                continue;
            }
            let w: Vec<f64> = (raw + 1 - tau..=raw).map(|r| gamma_at(prices, r, tau)).collect();
            let m = mean(&w);
            let mut ss = 0.0;
            for &v in &w {
                let d = v - m;
                ss += d * d;
            }
            *slot = Some(match mode {
                VolatilityMode::Std => (ss / tau as f64).sqrt(),
                VolatilityMode::PaperLiteral => ss.sqrt(),
            });
        }
        Self {
            gamma,
            dg,
            sigma,
            tau,
            warm_up,
        }
    }

    /// Two-pass correlation of the tau - 1 log-returns ending the day before
    /// evaluation day `t`. None before the window fills or on zero variance.
    pub fn rho(&self, other: &RefTicker, t: usize) -> Option<f64> {
        let raw = self.warm_up + t;
        if raw < 2 * (self.tau - 1) {
            return None;
        }
        let n = self.tau - 1;
        let s = raw + 2 - 2 * self.tau;
        let wa = &self.dg[s..s + n];
        let wb = &other.dg[s..s + n];
        let ma = mean(wa);
        let mb = mean(wb);
        let (mut num, mut ssa, mut ssb) = (0.0, 0.0, 0.0);
        for k in 0..n {
            let da = wa[k] - ma;
            let db = wb[k] - mb;
            num += da * db;
            ssa += da * da;
            ssb += db * db;
        }
        if ssa == 0.0 || ssb == 0.0 {
            return None;
        }
        Some(num / (ssa * ssb).sqrt())
    }
}

/// Everything the game needs about one pair, tabulated per evaluation day.
pub struct PairTable {
    pub d: Vec<f64>,
    pub sig_a: Vec<Option<f64>>,
    pub sig_b: Vec<Option<f64>>,
    pub rho: Vec<Option<f64>>,
}

pub fn pair_table(a: &RefTicker, b: &RefTicker) -> PairTable {
    let len = a.gamma.len();
    PairTable {
        d: (0..len).map(|t| (a.gamma[t] - b.gamma[t]).abs()).collect(),
        sig_a: a.sigma.clone(),
        sig_b: b.sigma.clone(),
        rho: (0..len).map(|t| a.rho(b, t)).collect(),
    }
}

/// Plain forward replay: scan for the first day whose statistics pass the
/// filters with the spread inside [theta, omega], then walk forward until
/// d <= epsilon (win), d > omega (loss) or the horizon runs out.
pub fn play_reference(table: &PairTable, filters: &FilterParams, ts: &ThresholdSet) -> Option<RefOutcome> {
    let eval_len = table.d.len();
    if eval_len == 0 {
        return None;
    }
    let horizon = filters.tau_max.min(eval_len - 1);
    let theta = ts.theta_bp() as f64 / 1e4;
    let epsilon = ts.epsilon_bp() as f64 / 1e4;
    let omega = ts.omega_bp() as f64 / 1e4;

    let mut start = None;
    for t in 0..=horizon {
        let (Some(sa), Some(sb), Some(r)) = (table.sig_a[t], table.sig_b[t], table.rho[t]) else {
            continue;
        };
        let in_band = |s: f64| s > filters.sigma_min && s < filters.sigma_max;
        if !(in_band(sa) && in_band(sb) && r > filters.rho0) {
            continue;
        }
        let d = table.d[t];
        if d >= theta && d <= omega {
            start = Some((t, d, sa, sb));
            break;
        }
    }
    let (t0, d0, sigma_a, sigma_b) = start?;
    for t in t0 + 1..=horizon {
        let d = table.d[t];
        let kind = if d <= epsilon {
            "win"
        } else if d > omega {
            "lose"
        } else {
            continue;
        };
        return Some(RefOutcome {
            kind,
            t_start: t0,
            d_start: d0,
            t_decision: Some(t),
            profit: Some(d0 - d),
            sigma_a,
            sigma_b,
        });
    }
    Some(RefOutcome {
        kind: "unresolved",
        t_start: t0,
        d_start: d0,
        t_decision: None,
        profit: None,
        sigma_a,
        sigma_b,
    })
}

/// Per-cell tallies of a reference sweep.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RefCellAgg {
    pub n_w: u64,
    pub n_l: u64,
    pub profit_sum: f64,
}

impl RefCellAgg {
    pub fn eta(&self) -> Option<f64> {
        let counted = self.n_w + self.n_l;
        (counted > 0).then(|| self.profit_sum / counted as f64)
    }
}

/// Full reference sweep: grid aggregates, first-passage histograms over the
/// grid cells, scattergram winners from the extra family.
pub struct RefSweep {
    pub cells: Vec<RefCellAgg>,
    pub win_hist: BTreeMap<u64, u64>,
    pub lose_hist: BTreeMap<u64, u64>,
    /// (mean start-day volatility of the legs, profit, theta in bp).
    pub scatter: Vec<(f64, f64, u32)>,
    pub started: u64,
    pub wins: u64,
    pub losses: u64,
    pub unresolved: u64,
}

pub fn reference_sweep(
    universe: &PriceUniverse,
    filters: &FilterParams,
    mode: VolatilityMode,
    grid: &[ThresholdSet],
    family: &[ThresholdSet],
    bin_width: u64,
) -> RefSweep {
    let tickers: Vec<RefTicker> = universe
        .series()
        .iter()
        .map(|s| RefTicker::compute(s.prices(), filters.tau, universe.warm_up(), mode))
        .collect();
    let mut out = RefSweep {
        cells: vec![RefCellAgg::default(); grid.len()],
        win_hist: BTreeMap::new(),
        lose_hist: BTreeMap::new(),
        scatter: Vec::new(),
        started: 0,
        wins: 0,
        losses: 0,
        unresolved: 0,
    };
    let n = universe.n_tickers();
    for i in 0..n {
        for j in i + 1..n {
            let table = pair_table(&tickers[i], &tickers[j]);
            for (cell, ts) in grid.iter().enumerate() {
                let Some(o) = play_reference(&table, filters, ts) else { continue };
                out.started += 1;
                match o.kind {
                    "win" => {
                        out.wins += 1;
                        out.cells[cell].n_w += 1;
                        out.cells[cell].profit_sum += o.profit.unwrap();
                        let days = (o.t_decision.unwrap() - o.t_start) as u64;
                        *out.win_hist.entry(days / bin_width * bin_width).or_insert(0) += 1;
                    }
                    "lose" => {
                        out.losses += 1;
                        out.cells[cell].n_l += 1;
                        out.cells[cell].profit_sum += o.profit.unwrap();
                        let days = (o.t_decision.unwrap() - o.t_start) as u64;
                        *out.lose_hist.entry(days / bin_width * bin_width).or_insert(0) += 1;
                    }
                    _ => out.unresolved += 1,
                }
            }
            for ts in family {
                let Some(o) = play_reference(&table, filters, ts) else { continue };
                if o.kind == "win" {
                    out.scatter
                        .push(((o.sigma_a + o.sigma_b) / 2.0, o.profit.unwrap(), ts.theta_bp()));
                }
            }
        }
    }
    out
}
