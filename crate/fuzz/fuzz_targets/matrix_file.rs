#![no_main]

use libfuzzer_sys::fuzz_target;
use nmds_core::parse::{format_matrix, parse_matrix};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = parse_matrix(text) else {
        return;
    };
    // Keep field construction and elimination cheap.
    if file.q > 1 << 12 || file.k * file.n > 1 << 12 {
        return;
    }
    if let Ok(code) = file.to_code() {
        let again = parse_matrix(&format_matrix(&code)).expect("formatted matrix parses");
        assert_eq!((again.q, again.k, again.n), (file.q, file.k, file.n));
    }
});
