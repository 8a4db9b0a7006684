//! Report serialization. Every byte written here must be a pure function of
//! the report contents: fixed float formats, fixed row order, no clocks.

use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::sweep::{CellResult, Histogram, Metadata, ScatterPoint, SweepReport};

/// Basis points -> percent with trailing zeros trimmed: 1000 -> "10",
/// 150 -> "1.5", 125 -> "1.25".
fn pct_string(bp: u32) -> String {
    let int = bp / 100;
    let frac = bp % 100;
    if frac == 0 {
        format!("{int}")
    } else if frac % 10 == 0 {
        format!("{int}.{}", frac / 10)
    } else {
        format!("{int}.{frac:02}")
    }
}

pub fn cells_csv_string(cells: &[CellResult]) -> String {
    let mut out = String::from("epsilon_pct,theta_pct,omega_pct,n_w,n_l,p_w_pct,eta\n");
    for c in cells {
        let t = &c.thresholds;
        let p_w = c.p_w.map_or(String::new(), |p| format!("{:.1}", p * 100.0));
        let eta = c.eta.map_or(String::new(), |e| format!("{e:.6}"));
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            pct_string(t.epsilon_bp()),
            pct_string(t.theta_bp()),
            pct_string(t.omega_bp()),
            c.n_w,
            c.n_l,
            p_w,
            eta,
        ));
    }
    out
}

pub fn fpt_csv_string(win: &Histogram, lose: &Histogram) -> String {
    let mut out = String::from("bin_start_days,bin_width_days,count,kind\n");
    for (hist, kind) in [(win, "win"), (lose, "lose")] {
        for (start, count) in hist.iter() {
            out.push_str(&format!("{start},{},{count},{kind}\n", hist.bin_width()));
        }
    }
    out
}

pub fn scatter_csv_string(points: &[ScatterPoint]) -> String {
    let mut out = String::from("sigma,eta_pct,theta_pct\n");
    for p in points {
        out.push_str(&format!(
            "{:.6},{:.4},{}\n",
            p.sigma,
            p.profit * 100.0,
            pct_string(p.theta_bp),
        ));
    }
    out
}

pub fn metadata_json_string(metadata: &Metadata) -> Result<String> {
    let mut s = serde_json::to_string_pretty(metadata)?;
    s.push('\n');
    Ok(s)
}

pub fn write_cells_csv(path: &Path, cells: &[CellResult]) -> Result<()> {
    fs::write(path, cells_csv_string(cells))?;
    Ok(())
}

pub fn write_fpt_csv(path: &Path, win: &Histogram, lose: &Histogram) -> Result<()> {
    fs::write(path, fpt_csv_string(win, lose))?;
    Ok(())
}

pub fn write_scatter_csv(path: &Path, points: &[ScatterPoint]) -> Result<()> {
    fs::write(path, scatter_csv_string(points))?;
    Ok(())
}

pub fn write_metadata_json(path: &Path, metadata: &Metadata) -> Result<()> {
    fs::write(path, metadata_json_string(metadata)?)?;
    Ok(())
}

/// Writes cells.csv, fpt_histogram.csv, scatter.csv and metadata.json into
/// `dir`, creating it if needed.
pub fn write_report_dir(dir: &Path, report: &SweepReport) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_cells_csv(&dir.join("cells.csv"), &report.cells)?;
    write_fpt_csv(&dir.join("fpt_histogram.csv"), &report.fpt_win, &report.fpt_lose)?;
    write_scatter_csv(&dir.join("scatter.csv"), &report.scatter)?;
    write_metadata_json(&dir.join("metadata.json"), &report.metadata)?;
    Ok(())
}

/// Fixed-width cell table in the report-table column order (epsilon, theta,
/// omega in percent, win/loss counts, winning percentage) with the profit
/// rate appended. Cells with no resolved trades print "-".
pub fn render_cells_table(cells: &[CellResult]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:>6} {:>7} {:>7} {:>8} {:>8} {:>7} {:>13}\n",
        "eps%", "theta%", "omega%", "n_w", "n_l", "p_w%", "eta"
    ));
    for c in cells {
        let t = &c.thresholds;
        let p_w = c.p_w.map_or("-".to_string(), |p| format!("{:.1}", p * 100.0));
        let eta = c.eta.map_or("-".to_string(), |e| format!("{e:.6}"));
        out.push_str(&format!(
            "{:>6} {:>7} {:>7} {:>8} {:>8} {:>7} {:>13}\n",
            pct_string(t.epsilon_bp()),
            pct_string(t.theta_bp()),
            pct_string(t.omega_bp()),
            c.n_w,
            c.n_l,
            p_w,
            eta,
        ));
    }
    out
}
