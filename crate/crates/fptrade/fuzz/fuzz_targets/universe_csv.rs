//! Malformed price CSVs must come back as errors, never panics or hangs.

#![no_main]

use fptrade::market_data::{read_universe_csv, GapPolicy};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = read_universe_csv(data, &GapPolicy::default(), 5);
});
