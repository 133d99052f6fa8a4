use std::fs;
use std::path::PathBuf;

use frackit_core::config::{parse_f64_list, parse_pairs, Config, ConfigError};
use proptest::prelude::*;

fn corpus(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

/// The assertions of the config fuzz target.
fn config_properties(text: &str) -> Result<(), ConfigError> {
    let cfg = Config::parse(text)?;
    let again = Config::parse(&cfg.to_string()).expect("canonical text must parse");
    assert!(again.same_entries(&cfg), "{text:?}");
    for section in cfg.sections() {
        for key in cfg.keys(section) {
            let _ = cfg.parsed::<f64>(section, key);
            let _ = cfg.f64_list(section, key);
        }
    }
    Ok(())
}

fn number_list_properties(text: &str) -> Result<Vec<f64>, String> {
    let values = parse_f64_list(text)?;
    assert!(!values.is_empty() && values.iter().all(|v| v.is_finite()));
    let printed: Vec<String> = values.iter().map(|v| format!("{v:?}")).collect();
    assert_eq!(parse_f64_list(&printed.join(", ")).unwrap(), values);
    Ok(values)
}

#[test]
fn config_seeds() {
    let mut accepted = 0;
    for (path, text) in corpus("config_parse") {
        let name = path.file_name().unwrap().to_str().unwrap();
        match config_properties(&text) {
            Ok(()) => accepted += 1,
            Err(e) => assert!(
                name.starts_with("unterminated") || name.starts_with("duplicate"),
                "{name}: {e}"
            ),
        }
    }
    assert!(accepted >= 4);
}

#[test]
fn config_seed_content() {
    let seeds = corpus("config_parse");
    let (_, decay) = seeds.iter().find(|(p, _)| p.ends_with("decay.cfg")).unwrap();
    let cfg = Config::parse(decay).unwrap();
    assert_eq!(parse_pairs(cfg.get("problem", "terms").unwrap()).unwrap(), [(1.0, 1.0)]);
    assert_eq!(cfg.required::<usize>("grid", "points").unwrap(), 256);
}

#[test]
fn list_seeds() {
    for (path, text) in corpus("pair_list") {
        let ok = parse_pairs(&text).is_ok();
        assert_eq!(ok, !path.ends_with("trailing_comma"), "{}", path.display());
    }
    for (path, text) in corpus("number_list") {
        let ok = number_list_properties(&text).is_ok();
        assert_eq!(ok, !path.ends_with("nan"), "{}", path.display());
    }
}

const CONFIG_ALPHABET: &str = "[[]]==##  \n\n\r\tabk_.-01e()";

fn text_from(alphabet: &'static str, max: usize) -> impl Strategy<Value = String> {
    let chars: Vec<char> = alphabet.chars().collect();
    prop::collection::vec(prop::sample::select(chars), 0..max).prop_map(|v| v.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4000))]

    #[test]
    fn config_parser_is_total(text in text_from(CONFIG_ALPHABET, 80)) {
        let _ = config_properties(&text);
    }

    #[test]
    fn config_parser_accepts_arbitrary_unicode(text in "\\PC{0,60}") {
        let _ = config_properties(&text);
    }

    #[test]
    fn generated_configs_parse(entries in prop::collection::vec(("[a-z][a-z0-9_]{0,5}", "[a-z][a-z0-9_.]{0,5}", "[^#\n\r]{0,12}"), 0..8)) {
        let mut text = String::new();
        let mut seen = std::collections::BTreeSet::new();
        for (section, key, value) in &entries {
            text.push_str(&format!("[{section}]\n{key} = {value}\n"));
            let fresh = seen.insert((section.clone(), key.clone()));
            prop_assume!(fresh);
        }
        let cfg = Config::parse(&text).unwrap();
        for (section, key, value) in &entries {
            prop_assert_eq!(cfg.get(section, key), Some(value.trim()));
        }
        config_properties(&text).unwrap();
    }

    #[test]
    fn list_parsers_are_total(text in text_from("[](),, 0123456789.e-+naif ", 40)) {
        let _ = number_list_properties(&text);
        if let Ok(pairs) = parse_pairs(&text) {
            prop_assert!(!pairs.is_empty());
            prop_assert!(pairs.iter().all(|(a, b)| a.is_finite() && b.is_finite()));
        }
    }

    #[test]
    fn printed_pairs_parse_back(pairs in prop::collection::vec((-1e6f64..1e6, 1e-6f64..10.0), 1..6)) {
        let text = pairs.iter().map(|(a, b)| format!("({a:?}, {b:?})")).collect::<Vec<_>>().join(", ");
        prop_assert_eq!(parse_pairs(&text).unwrap(), pairs.clone());
        prop_assert_eq!(parse_pairs(&format!("[{text}]")).unwrap(), pairs);
    }
}
