//! Deterministic test universes.
//!
//! `paired_universe` builds tickers in A/B couples sharing one random log
//! walk; leg B carries a deterministic log-spread schedule on top. Because
//! the spread between the legs is scripted, each couple's trade outcomes are
//! predictable by design (fast reverting humps produce wins, delayed
//! blow-ups produce losses) while everything still rides on a noisy walk.

use chrono::{Datelike, NaiveDate, Weekday};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use fptrade::market_data::{
    generate_synthetic, BlockSpec, PriceSeries, PriceUniverse, SyntheticSpec, TradingCalendar,
};
use fptrade::pairgame::FilterParams;

/// Consecutive weekdays starting Monday 2015-01-05.
pub fn weekday_calendar(n: usize) -> Vec<NaiveDate> {
    let mut days = Vec::with_capacity(n);
    let mut d = NaiveDate::from_ymd_opt(2015, 1, 5).unwrap();
    while days.len() < n {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            days.push(d);
        }
        d = d.succ_opt().unwrap();
    }
    days
}

/// Scripted log-spread of one A/B couple.
///
/// The spread ramps from zero to ln(1 + amplitude) over `ramp_days`, then
/// either holds `hold_days` and decays geometrically back to zero (a
/// reverting hump: the pair trade wins) or holds until `loss_jump_day` days
/// after the ramp started and jumps far beyond every loss-cut level (the
/// trade loses). The hump must fit inside the rolling window (width < tau)
/// so the spread of rates returns to exactly zero afterwards.
#[derive(Debug, Clone, Copy)]
pub struct PairPlan {
    pub amplitude: f64,
    pub ramp_days: usize,
    pub hold_days: usize,
    /// Per-day decay factor of the spread after the hold; values below 1e-6
    /// snap to exactly zero. None for loss couples.
    pub decay: Option<f64>,
    /// Days after ramp start at which the spread blows up; must stay below
    /// tau - 1 so the window never folds the episode before the jump.
    pub loss_jump_day: Option<usize>,
}

fn spread_schedule(plan: &PairPlan, n_days: usize, ramp_start: usize) -> Vec<f64> {
    let peak = (1.0 + plan.amplitude).ln();
    let mut s = vec![0.0f64; n_days];
    for t in ramp_start..n_days {
        let k = t - ramp_start;
        s[t] = if k < plan.ramp_days {
            peak * (k + 1) as f64 / plan.ramp_days as f64
        } else if plan.loss_jump_day.is_some_and(|jump| k >= jump) {
            peak + 1.5
        } else if k < plan.ramp_days + plan.hold_days {
            peak
        } else if let Some(r) = plan.decay {
            let v = s[t - 1] * r;
            if v < 1e-6 {
                0.0
            } else {
                v
            }
        } else {
            peak
        };
    }
    s
}

/// Builds 2 * plans.len() tickers named P000A, P000B, P001A, ... where the
/// couple p occupies indices (2p, 2p + 1).
pub fn paired_universe(
    plans: &[PairPlan],
    n_days: usize,
    tau: usize,
    ramp_start_raw: usize,
    base_vol: f64,
    seed: u64,
) -> PriceUniverse {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let mut series = Vec::with_capacity(plans.len() * 2);
    for (p, plan) in plans.iter().enumerate() {
        let mut la = vec![0.0f64; n_days];
        la[0] = 100.0f64.ln();
        for t in 1..n_days {
            let e: f64 = normal.sample(&mut rng);
            la[t] = la[t - 1] + base_vol * e;
        }
        let s = spread_schedule(plan, n_days, ramp_start_raw);
        let pa: Vec<f64> = la.iter().map(|&x| x.exp()).collect();
        let pb: Vec<f64> = la.iter().zip(&s).map(|(&x, &sp)| (x + sp).exp()).collect();
        series.push(PriceSeries::new(format!("P{p:03}A"), pa).unwrap());
        series.push(PriceSeries::new(format!("P{p:03}B"), pb).unwrap());
    }
    let calendar = TradingCalendar::new(weekday_calendar(n_days)).unwrap();
    PriceUniverse::new(calendar, series, tau).unwrap()
}

/// 100 tickers (50 couples), one scripted episode per couple, rich coverage
/// of win cells across the whole grid. Every fifth couple is a loss couple.
pub fn floor_universe() -> PriceUniverse {
    let amps = [0.12, 0.18, 0.25, 0.32, 0.40, 0.50, 0.60, 0.70, 0.80, 0.45];
    let ramps = [6, 8, 10, 7, 9];
    let holds = [2, 3, 4];
    let plans: Vec<PairPlan> = (0..50)
        .map(|p| {
            let lose = p % 5 == 4;
            PairPlan {
                amplitude: amps[p % amps.len()],
                ramp_days: ramps[p % ramps.len()],
                hold_days: holds[p % holds.len()],
                decay: (!lose).then_some(0.7),
                loss_jump_day: lose.then_some(30),
            }
        })
        .collect();
    paired_universe(&plans, 500, 60, 130, 0.008, 2024)
}

pub fn floor_filters() -> FilterParams {
    FilterParams {
        rho0: 0.3,
        sigma_min: 0.01,
        sigma_max: 1.0,
        tau: 60,
        tau_max: 400,
    }
}

/// 30 tickers (15 couples) engineered for first-passage shape: reverting
/// humps resolve wins within days of their start, loss couples hold the
/// spread for 53..57 days before blowing up.
pub fn passage_universe() -> PriceUniverse {
    let wins = [
        (0.15, 8, 3),
        (0.20, 7, 2),
        (0.28, 9, 4),
        (0.35, 8, 3),
        (0.45, 10, 2),
        (0.55, 8, 4),
        (0.65, 6, 3),
        (0.80, 9, 2),
        (0.25, 7, 4),
        (0.40, 8, 2),
        (0.30, 9, 3),
    ];
    let losses = [(0.15, 53), (0.25, 55), (0.40, 56), (0.60, 57)];
    let mut plans: Vec<PairPlan> = wins
        .iter()
        .map(|&(amplitude, ramp_days, hold_days)| PairPlan {
            amplitude,
            ramp_days,
            hold_days,
            decay: Some(0.7),
            loss_jump_day: None,
        })
        .collect();
    plans.extend(losses.iter().map(|&(amplitude, jump)| PairPlan {
        amplitude,
        ramp_days: 8,
        hold_days: 0,
        decay: None,
        loss_jump_day: Some(jump),
    }));
    paired_universe(&plans, 500, 60, 130, 0.008, 77)
}

pub fn passage_filters() -> FilterParams {
    FilterParams {
        rho0: 0.6,
        sigma_min: 0.01,
        sigma_max: 1.0,
        tau: 60,
        tau_max: 400,
    }
}

/// 21 random-walk tickers (two correlated blocks plus independents), 210
/// pairs; nothing scripted, used for brute-force equivalence checks.
pub fn oracle_universe() -> PriceUniverse {
    let spec = SyntheticSpec {
        n_tickers: 21,
        n_days: 500,
        blocks: vec![BlockSpec { size: 7, rho: 0.9 }, BlockSpec { size: 7, rho: 0.5 }],
        drift: 0.0002,
        step_vol: 0.02,
        seed: 4242,
    };
    generate_synthetic(&spec, 60).unwrap()
}

pub fn oracle_filters() -> FilterParams {
    FilterParams {
        rho0: 0.2,
        sigma_min: 0.01,
        sigma_max: 1.0,
        tau: 60,
        tau_max: 400,
    }
}

/// Full production scale: 1,784 tickers in 223 equicorrelated blocks of 8,
/// 750 days, volatility tuned so typical rolling sigma sits inside the
/// default (0.05, 0.2) band at tau = 250.
pub fn perf_universe() -> PriceUniverse {
    let spec = SyntheticSpec {
        n_tickers: 1784,
        n_days: 750,
        blocks: vec![BlockSpec { size: 8, rho: 0.8 }; 223],
        drift: 0.0001,
        step_vol: 0.0063,
        seed: 99,
    };
    generate_synthetic(&spec, 250).unwrap()
}

pub fn perf_filters() -> FilterParams {
    FilterParams {
        rho0: 0.6,
        sigma_min: 0.05,
        sigma_max: 0.2,
        tau: 250,
        tau_max: 500,
    }
}

/// Same universe with one ticker's prices multiplied by a constant.
pub fn scale_ticker(u: &PriceUniverse, idx: usize, factor: f64) -> PriceUniverse {
    let series: Vec<PriceSeries> = u
        .series()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let prices = if i == idx {
                s.prices().iter().map(|&p| p * factor).collect()
            } else {
                s.prices().to_vec()
            };
            PriceSeries::new(s.ticker(), prices).unwrap()
        })
        .collect();
    PriceUniverse::new(u.calendar().clone(), series, u.warm_up()).unwrap()
}
