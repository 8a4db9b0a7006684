//! Arbitrary JSON must parse-or-error cleanly; accepted specs must also
//! generate without panicking. Generation is gated on a small size budget so
//! the fuzzer spends its time in the parser, not the RNG.

#![no_main]

use fptrade::market_data::{generate_synthetic, SyntheticSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = SyntheticSpec::from_json_str(text) else {
        return;
    };
    if spec.n_tickers.saturating_mul(spec.n_days) <= 10_000 {
        let _ = generate_synthetic(&spec, 5);
    }
});
