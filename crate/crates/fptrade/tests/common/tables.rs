//! Reference win/loss tallies from external backtest runs over the 2012 and
//! 2011 trading years, transcribed verbatim from the typeset report. Used to
//! validate the reporting arithmetic (omega construction, winning
//! percentage). The transcription preserves four typesetting defects; see
//! `KNOWN_OMEGA_DEFECTS` and `KNOWN_PW_DEFECTS`.

/// One printed row: thresholds in percent, win/loss counts and the printed
/// winning percentage.
pub struct TableRow {
    pub eps_pct: u32,
    pub theta_pct: u32,
    pub omega_pct: u32,
    pub n_w: u64,
    pub n_l: u64,
    pub p_w_pct: f64,
}

const fn row(eps_pct: u32, theta_pct: u32, omega_pct: u32, n_w: u64, n_l: u64, p_w_pct: f64) -> TableRow {
    TableRow {
        eps_pct,
        theta_pct,
        omega_pct,
        n_w,
        n_l,
        p_w_pct,
    }
}

/// 2012 run, 55 rows.
pub const TABLE_2012: [TableRow; 55] = [
    row(0, 10, 20, 11, 32, 25.6),
    row(0, 20, 40, 25, 52, 32.4),
    row(10, 20, 30, 23, 33, 41.0),
    row(0, 30, 60, 24, 42, 36.3),
    row(10, 30, 50, 23, 41, 35.9),
    row(20, 30, 40, 17, 41, 29.3),
    row(0, 40, 80, 22, 36, 37.9),
    row(10, 40, 70, 22, 35, 38.5),
    row(20, 40, 60, 22, 32, 40.7),
    row(30, 40, 50, 17, 27, 38.6),
    row(0, 50, 100, 15, 23, 39.4),
    row(10, 50, 90, 16, 31, 34.0),
    row(20, 50, 80, 18, 30, 37.5),
    row(30, 50, 70, 16, 27, 37.2),
    row(40, 50, 60, 9, 25, 26.4),
    row(0, 60, 120, 11, 16, 40.7),
    row(10, 60, 110, 14, 20, 41.1),
    row(20, 60, 100, 13, 22, 37.0),
    row(30, 60, 90, 13, 28, 31.7),
    row(40, 60, 80, 14, 26, 35.0),
    row(50, 60, 70, 10, 17, 37.0),
    row(0, 70, 140, 11, 10, 52.3),
    row(10, 70, 130, 11, 14, 44.0),
    row(20, 70, 120, 10, 16, 38.4),
    row(30, 70, 110, 13, 16, 44.8),
    row(40, 70, 100, 13, 19, 40.6),
    row(50, 70, 90, 11, 21, 34.3),
    row(60, 70, 80, 13, 18, 41.9),
    row(0, 80, 160, 5, 13, 27.7),
    row(10, 80, 150, 6, 9, 40.0),
    row(20, 80, 149, 8, 9, 47.0),
    row(30, 80, 130, 8, 12, 40.0),
    row(40, 80, 120, 9, 14, 39.1),
    row(50, 80, 110, 10, 12, 45.4),
    row(60, 80, 100, 9, 12, 42.8),
    row(70, 80, 90, 8, 11, 42.1),
    row(0, 90, 180, 4, 9, 30.7),
    row(10, 90, 170, 4, 12, 25.0),
    row(20, 90, 160, 4, 11, 26.6),
    row(30, 90, 150, 4, 9, 30.7),
    row(40, 90, 140, 5, 9, 35.7),
    row(50, 90, 130, 4, 10, 28.5),
    row(60, 90, 120, 3, 10, 23.0),
    row(70, 90, 110, 4, 6, 40.0),
    row(80, 90, 100, 5, 2, 71.4),
    row(0, 100, 200, 4, 5, 44.4),
    row(10, 100, 190, 4, 8, 33.3),
    row(20, 100, 180, 4, 6, 40.0),
    row(30, 100, 170, 4, 9, 30.7),
    row(40, 100, 160, 5, 8, 38.4),
    row(50, 100, 150, 5, 6, 45.4),
    row(60, 100, 140, 7, 5, 58.3),
    row(70, 100, 130, 5, 6, 45.4),
    row(80, 100, 120, 5, 4, 55.5),
    row(90, 100, 110, 3, 1, 75.0),
];

/// 2011 run, 55 rows.
pub const TABLE_2011: [TableRow; 55] = [
    row(0, 10, 20, 93, 200, 31.7),
    row(0, 20, 40, 93, 245, 27.5),
    row(10, 20, 50, 91, 221, 29.1),
    row(0, 30, 60, 72, 178, 28.8),
    row(10, 30, 50, 90, 198, 31.2),
    row(20, 30, 40, 87, 195, 30.8),
    row(0, 40, 80, 44, 111, 28.3),
    row(10, 40, 70, 61, 135, 31.1),
    row(20, 40, 60, 69, 162, 29.8),
    row(30, 40, 50, 87, 147, 37.1),
    row(0, 50, 100, 31, 82, 27.4),
    row(10, 50, 90, 41, 88, 31.7),
    row(20, 50, 80, 50, 103, 32.6),
    row(30, 50, 70, 50, 123, 28.9),
    row(40, 50, 60, 57, 114, 33.3),
    row(0, 60, 120, 21, 57, 26.9),
    row(10, 60, 110, 21, 69, 23.3),
    row(20, 60, 100, 32, 74, 30.1),
    row(30, 60, 90, 34, 80, 29.8),
    row(40, 60, 80, 45, 89, 33.5),
    row(50, 60, 70, 53, 86, 38.1),
    row(0, 70, 140, 14, 47, 22.9),
    row(10, 70, 130, 14, 48, 22.5),
    row(20, 70, 120, 21, 53, 28.3),
    row(30, 70, 110, 22, 64, 25.5),
    row(40, 70, 100, 29, 67, 30.2),
    row(50, 70, 90, 32, 75, 29.9),
    row(60, 70, 80, 38, 70, 35.1),
    row(0, 80, 160, 9, 30, 23.0),
    row(10, 80, 150, 11, 34, 24.4),
    row(20, 80, 149, 17, 39, 30.3),
    row(30, 80, 130, 16, 42, 27.5),
    row(40, 80, 120, 25, 42, 37.3),
    row(50, 80, 110, 25, 54, 31.6),
    row(60, 80, 100, 34, 53, 39.0),
    row(70, 80, 90, 41, 49, 45.5),
    row(0, 90, 180, 6, 18, 25.0),
    row(10, 90, 170, 7, 22, 24.1),
    row(20, 90, 160, 11, 25, 30.5),
    row(30, 90, 150, 13, 26, 33.3),
    row(40, 90, 140, 18, 31, 36.7),
    row(50, 90, 130, 15, 38, 28.3),
    row(60, 90, 120, 23, 39, 37.0),
    row(70, 90, 110, 28, 44, 38.8),
    row(80, 90, 100, 31, 33, 48.4),
    row(0, 100, 200, 6, 10, 37.5),
    row(10, 100, 190, 6, 13, 31.5),
    row(20, 100, 180, 8, 17, 32.0),
    row(30, 100, 170, 11, 19, 36.6),
    row(40, 100, 160, 14, 21, 40.0),
    row(50, 100, 150, 17, 21, 44.7),
    row(60, 100, 140, 18, 26, 40.9),
    row(70, 100, 130, 19, 33, 36.5),
    row(80, 100, 120, 23, 31, 42.5),
    row(90, 100, 110, 20, 34, 37.0),
];

/// Rows whose printed omega contradicts omega = 2*theta - epsilon.
/// (table year, eps_pct, theta_pct, printed omega_pct).
pub const KNOWN_OMEGA_DEFECTS: [(u32, u32, u32, u32); 3] = [
    (2012, 20, 80, 149),
    (2011, 10, 20, 50),
    (2011, 20, 80, 149),
];

/// Rows whose printed winning percentage deviates from n_w/(n_w+n_l) by
/// more than 0.1 percentage points. 13/35 = 37.14%, printed 37.0.
pub const KNOWN_PW_DEFECTS: [(u32, u32, u32); 1] = [(2012, 20, 60)];
