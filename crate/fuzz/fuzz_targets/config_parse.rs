#![no_main]

use frackit_core::config::Config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(cfg) = Config::parse(text) else {
        return;
    };
    // canonical form parses back to the same entries
    let again = Config::parse(&cfg.to_string()).expect("canonical text must parse");
    assert!(again.same_entries(&cfg));
    for section in cfg.sections() {
        for key in cfg.keys(section) {
            let _ = cfg.parsed::<f64>(section, key);
            let _ = cfg.parsed::<usize>(section, key);
            let _ = cfg.f64_list(section, key);
        }
    }
});
