//! Command-line driver: ingest or synthesize a price universe, run the
//! threshold sweep, or dump per-day correlation/volatility distributions.
//!
//! stdout carries only deterministic payload (the cell table, summaries);
//! progress notes go to stderr. Every failure exits nonzero with a
//! single-line `error: ...` message.

use std::collections::BTreeMap;
use std::fs;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use fptrade::indicators::VolatilityMode;
use fptrade::market_data::{
    generate_synthetic, load_universe, write_universe_csv, GapPolicy, PriceUniverse, SyntheticSpec,
};
use fptrade::pairgame::FilterParams;
use fptrade::rolling::{PairCursor, TickerStats};
use fptrade::sweep::{
    enumerate_pairs, render_cells_table, run_sweep, write_report_dir, GridSpec, SweepConfig,
};

#[derive(Parser)]
#[command(name = "fptrade", version, about = "Pairs-trading first-passage backtest engine")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a daily price CSV and write the normalized universe cache
    Ingest(IngestArgs),
    /// Generate a synthetic universe from a JSON spec
    Synth(SynthArgs),
    /// Sweep the threshold grid over every pair and write the report
    Sweep(SweepArgs),
    /// Emit correlation and volatility histograms at one evaluation day
    Stats(StatsArgs),
}

/// Exactly one input source.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Daily price CSV with header date,ticker,adj_close
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Synthetic universe spec (JSON)
    #[arg(long, value_name = "PATH")]
    synthetic_spec: Option<PathBuf>,
}

#[derive(Args)]
struct OutArgs {
    /// Output directory; falls back to the FPTRADE_OUT environment variable
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

impl OutArgs {
    fn resolve(&self) -> anyhow::Result<PathBuf> {
        self.out
            .clone()
            .or_else(|| std::env::var_os("FPTRADE_OUT").map(PathBuf::from))
            .context("no output directory: pass --out or set FPTRADE_OUT")
    }
}

#[derive(Args)]
struct FilterArgs {
    /// Correlation floor at the start day (strict)
    #[arg(long, default_value_t = 0.6)]
    rho0: f64,
    /// Volatility band lower edge (strict, both legs)
    #[arg(long, default_value_t = 0.05)]
    sigma_min: f64,
    /// Volatility band upper edge (strict, both legs)
    #[arg(long, default_value_t = 0.2)]
    sigma_max: f64,
    /// Rolling window length in trading days
    #[arg(long, default_value_t = 250)]
    tau: usize,
    /// Latest evaluation day for starts and decisions
    #[arg(long, default_value_t = 250)]
    tau_max: usize,
}

impl FilterArgs {
    fn to_filters(&self) -> FilterParams {
        FilterParams {
            rho0: self.rho0,
            sigma_min: self.sigma_min,
            sigma_max: self.sigma_max,
            tau: self.tau,
            tau_max: self.tau_max,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GridChoice {
    Default,
    Coarse,
    Fine,
}

#[derive(Clone, Copy, ValueEnum)]
enum VolArg {
    /// Root mean squared deviation of the rate window
    Std,
    /// Same numerator without dividing by the window length
    PaperLiteral,
}

impl From<VolArg> for VolatilityMode {
    fn from(v: VolArg) -> Self {
        match v {
            VolArg::Std => VolatilityMode::Std,
            VolArg::PaperLiteral => VolatilityMode::PaperLiteral,
        }
    }
}

#[derive(Args)]
struct IngestArgs {
    /// Daily price CSV with header date,ticker,adj_close
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
    #[command(flatten)]
    out: OutArgs,
    /// Rolling window the universe must support
    #[arg(long, default_value_t = 250)]
    tau: usize,
}

#[derive(Args)]
struct SynthArgs {
    /// Synthetic universe spec (JSON)
    #[arg(long, value_name = "PATH")]
    synthetic_spec: PathBuf,
    #[command(flatten)]
    out: OutArgs,
    /// Rolling window the universe must support
    #[arg(long, default_value_t = 250)]
    tau: usize,
    /// Overrides the spec's generator seed
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    out: OutArgs,
    #[command(flatten)]
    filters: FilterArgs,
    /// Start threshold as a fraction (single-cell run; needs --epsilon)
    #[arg(long, requires = "epsilon", conflicts_with = "grid")]
    theta: Option<f64>,
    /// Profit-take threshold as a fraction (single-cell run; needs --theta)
    #[arg(long, requires = "theta", conflicts_with = "grid")]
    epsilon: Option<f64>,
    /// Threshold grid to sweep
    #[arg(long, value_enum, default_value_t = GridChoice::Default)]
    grid: GridChoice,
    #[arg(long, value_enum, default_value_t = VolArg::Std)]
    volatility_mode: VolArg,
    /// Worker threads (default: hardware parallelism)
    #[arg(long)]
    workers: Option<usize>,
    /// Overrides the synthetic spec's generator seed
    #[arg(long, requires = "synthetic_spec", conflicts_with = "input")]
    seed: Option<u64>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    out: OutArgs,
    /// Rolling window length in trading days
    #[arg(long, default_value_t = 250)]
    tau: usize,
    /// Evaluation day to sample (default: last)
    #[arg(long)]
    day: Option<usize>,
    #[arg(long, value_enum, default_value_t = VolArg::Std)]
    volatility_mode: VolArg,
    /// Overrides the synthetic spec's generator seed
    #[arg(long, requires = "synthetic_spec", conflicts_with = "input")]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let chain = format!("{e:#}");
            let one_line: Vec<&str> = chain.lines().collect();
            eprintln!("error: {}", one_line.join("; "));
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.cmd {
        Cmd::Ingest(args) => cmd_ingest(args),
        Cmd::Synth(args) => cmd_synth(args),
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Stats(args) => cmd_stats(args),
    }
}

/// Loads the universe from whichever source was given; returns the
/// effective generator seed for synthetic input.
fn load_input(
    input: &InputArgs,
    tau: usize,
    seed_override: Option<u64>,
) -> anyhow::Result<(PriceUniverse, Option<u64>)> {
    if let Some(path) = &input.input {
        let (universe, _) = load_universe(path, &GapPolicy::default(), tau)
            .with_context(|| format!("loading {}", path.display()))?;
        Ok((universe, None))
    } else {
        let path = input.synthetic_spec.as_ref().expect("clap enforces one source");
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut spec = SyntheticSpec::from_json_str(&text)
            .with_context(|| format!("parsing {}", path.display()))?;
        if let Some(seed) = seed_override {
            spec.seed = seed;
        }
        let seed = spec.seed;
        let universe = generate_synthetic(&spec, tau)?;
        Ok((universe, Some(seed)))
    }
}

fn write_cache(universe: &PriceUniverse, dir: &PathBuf) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join("universe.csv");
    let file = fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
    write_universe_csv(universe, BufWriter::new(file))?;
    Ok(path)
}

fn cmd_ingest(args: IngestArgs) -> anyhow::Result<()> {
    let dir = args.out.resolve()?;
    let (universe, report) = load_universe(&args.input, &GapPolicy::default(), args.tau)
        .with_context(|| format!("loading {}", args.input.display()))?;
    let path = write_cache(&universe, &dir)?;
    let cal = universe.calendar();
    println!("rows read: {}", report.rows);
    println!(
        "tickers kept: {}, dropped: {}",
        report.kept.len(),
        report.dropped.len()
    );
    println!(
        "calendar: {}..{} ({} days, {} leading trimmed)",
        cal.day(0),
        cal.day(cal.len() - 1),
        cal.len(),
        report.trimmed_leading_days
    );
    println!("filled cells: {}", report.filled_cells);
    println!("digest: {}", universe.digest());
    println!("cache: {}", path.display());
    for d in &report.dropped {
        println!("dropped: {} (missing {}/{})", d.ticker, d.missing_days, d.calendar_days);
    }
    Ok(())
}

fn cmd_synth(args: SynthArgs) -> anyhow::Result<()> {
    let dir = args.out.resolve()?;
    let input = InputArgs {
        input: None,
        synthetic_spec: Some(args.synthetic_spec),
    };
    let (universe, seed) = load_input(&input, args.tau, args.seed)?;
    let path = write_cache(&universe, &dir)?;
    let cal = universe.calendar();
    println!("tickers: {}", universe.n_tickers());
    println!(
        "calendar: {}..{} ({} days)",
        cal.day(0),
        cal.day(cal.len() - 1),
        cal.len()
    );
    println!(
        "warm-up: {}, evaluation days: {}",
        universe.warm_up(),
        universe.eval_len()
    );
    println!("seed: {}", seed.expect("synthetic input always has a seed"));
    println!("digest: {}", universe.digest());
    println!("cache: {}", path.display());
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<()> {
    let dir = args.out.resolve()?;
    let grid = match (args.theta, args.epsilon) {
        (Some(theta), Some(epsilon)) => GridSpec::single(theta, epsilon)?,
        _ => match args.grid {
            GridChoice::Default => GridSpec::default_grid(),
            GridChoice::Coarse => GridSpec::coarse(),
            GridChoice::Fine => GridSpec::fine(),
        },
    };
    let filters = args.filters.to_filters();
    let (universe, seed) = load_input(&args.input, filters.tau, args.seed)?;
    let mut config = SweepConfig::new(filters, args.volatility_mode.into(), grid);
    if let Some(workers) = args.workers {
        config.workers = workers;
    }
    config.seed = seed;
    let report = run_sweep(&universe, &config)?;
    write_report_dir(&dir, &report)?;
    print!("{}", render_cells_table(&report.cells));
    eprintln!("report written to {}", dir.display());
    Ok(())
}

fn histogram_csv(bins: &BTreeMap<i64, u64>, width: f64) -> String {
    let mut out = String::from("bin_start,bin_width,count\n");
    for (k, count) in bins {
        out.push_str(&format!("{:.2},{width:.2},{count}\n", *k as f64 * width));
    }
    out
}

fn cmd_stats(args: StatsArgs) -> anyhow::Result<()> {
    let dir = args.out.resolve()?;
    let (universe, _) = load_input(&args.input, args.tau, args.seed)?;
    let day = args.day.unwrap_or(universe.eval_len() - 1);
    if day >= universe.eval_len() {
        return Err(fptrade::Error::DayOutOfRange {
            day,
            len: universe.eval_len(),
        }
        .into());
    }
    let mode: VolatilityMode = args.volatility_mode.into();
    let stats: Vec<TickerStats> = universe
        .series()
        .iter()
        .map(|s| TickerStats::compute(s.prices(), args.tau, universe.warm_up(), mode))
        .collect::<fptrade::Result<_>>()?;

    const SIGMA_BIN: f64 = 0.01;
    const RHO_BIN: f64 = 0.05;
    let mut sigma_bins: BTreeMap<i64, u64> = BTreeMap::new();
    let mut sigma_count = 0u64;
    for ts in &stats {
        if let Some(s) = ts.sigma_at(day) {
            *sigma_bins.entry((s / SIGMA_BIN).floor() as i64).or_insert(0) += 1;
            sigma_count += 1;
        }
    }
    let mut rho_bins: BTreeMap<i64, u64> = BTreeMap::new();
    let mut rho_count = 0u64;
    let mut rho_skipped = 0u64;
    for (i, j) in enumerate_pairs(universe.n_tickers()) {
        let mut cursor = PairCursor::new(&stats[i as usize], &stats[j as usize]);
        match cursor.rho_at(day) {
            Some(rho) => {
                *rho_bins.entry((rho / RHO_BIN).floor() as i64).or_insert(0) += 1;
                rho_count += 1;
            }
            None => rho_skipped += 1,
        }
    }

    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join("rho_hist.csv"), histogram_csv(&rho_bins, RHO_BIN))?;
    fs::write(dir.join("sigma_hist.csv"), histogram_csv(&sigma_bins, SIGMA_BIN))?;
    println!(
        "day {day} ({}): {rho_count} pair correlations ({rho_skipped} undefined), {sigma_count} volatilities",
        universe.calendar().day(universe.raw_index(day))
    );
    eprintln!("histograms written to {}", dir.display());
    Ok(())
}
