#![no_main]

use frackit_core::config::parse_pairs;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(pairs) = parse_pairs(text) {
        assert!(!pairs.is_empty());
        assert!(pairs.iter().all(|(a, b)| a.is_finite() && b.is_finite()));
    }
});
