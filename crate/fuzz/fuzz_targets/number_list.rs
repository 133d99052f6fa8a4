#![no_main]

use frackit_core::config::parse_f64_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(values) = parse_f64_list(text) {
        assert!(!values.is_empty());
        assert!(values.iter().all(|v| v.is_finite()));
        // the list printed back parses to the same values
        let printed: Vec<String> = values.iter().map(|v| format!("{v:?}")).collect();
        assert_eq!(parse_f64_list(&printed.join(", ")).unwrap(), values);
    }
});
