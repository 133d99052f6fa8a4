//! Flat text configuration: `[section]` headers, `key = value` lines and
//! `#` comments.
//!
//! ```text
//! # exponential decay
//! [problem]
//! n0 = 1
//! terms = (1, 1)
//! forcing = unit
//!
//! [grid]
//! t_max = 2
//! points = 256
//! ```
//!
//! Keys before the first header belong to the section named `""`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: duplicate key `{field}`")]
    Duplicate { line: usize, field: String },

    #[error("`{field}`: {message}")]
    Value { field: String, message: String },

    #[error("missing required key `{field}`")]
    Missing { field: String },

    #[error("unknown key `{field}`")]
    Unknown { field: String },
}

impl ConfigError {
    pub fn value(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Value {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Entry {
    value: String,
    line: usize,
}

/// Parsed configuration. Sections and keys iterate in sorted order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    sections: BTreeMap<String, BTreeMap<String, Entry>>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.')
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

impl FromStr for Config {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Config::default();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = strip_comment(raw).trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::Syntax { line, message: "unterminated section header".into() })?
                    .trim();
                if !valid_name(name) {
                    return Err(ConfigError::Syntax { line, message: format!("invalid section name `{name}`") });
                }
                section = name.to_string();
                cfg.sections.entry(section.clone()).or_default();
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line, message: "expected `key = value`".into() })?;
            let key = key.trim();
            if !valid_name(key) {
                return Err(ConfigError::Syntax { line, message: format!("invalid key `{key}`") });
            }
            let keys = cfg.sections.entry(section.clone()).or_default();
            if keys.contains_key(key) {
                return Err(ConfigError::Duplicate { line, field: qualified(&section, key) });
            }
            keys.insert(key.to_string(), Entry { value: value.trim().to_string(), line });
        }
        Ok(cfg)
    }
}

/// Canonical text: unnamed section first, then sections and keys in
/// sorted order. Parsing it gives back an equal config (line numbers aside).
impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, keys) in &self.sections {
            if !name.is_empty() {
                writeln!(f, "[{name}]")?;
            }
            for (k, e) in keys {
                writeln!(f, "{k} = {}", e.value)?;
            }
        }
        Ok(())
    }
}

/// `section.key`, or `key` in the unnamed section.
pub fn qualified(section: &str, key: &str) -> String {
    if section.is_empty() {
        key.to_string()
    } else {
        format!("{section}.{key}")
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        text.parse()
    }

    /// Same sections, keys and values.
    pub fn same_entries(&self, other: &Config) -> bool {
        self.sections.len() == other.sections.len()
            && self.sections.iter().zip(&other.sections).all(|((a, ka), (b, kb))| {
                a == b
                    && ka.len() == kb.len()
                    && ka.iter().zip(kb).all(|((x, ex), (y, ey))| x == y && ex.value == ey.value)
            })
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections.get(section)?.get(key).map(|e| e.value.as_str())
    }

    /// Line of the definition; `None` for missing or overridden keys.
    pub fn line_of(&self, section: &str, key: &str) -> Option<usize> {
        self.sections.get(section)?.get(key).map(|e| e.line).filter(|&l| l > 0)
    }

    /// Sets or replaces a value, e.g. from a command-line flag.
    pub fn set(&mut self, section: &str, key: &str, value: impl Into<String>) {
        self.sections
            .entry(section.to_string())
            .or_default()
            .insert(key.to_string(), Entry { value: value.into(), line: 0 });
    }

    pub fn sections(&self) -> impl Iterator<Item = &str> {
        self.sections.keys().map(String::as_str)
    }

    pub fn keys<'a>(&'a self, section: &str) -> impl Iterator<Item = &'a str> {
        self.sections.get(section).into_iter().flat_map(|m| m.keys().map(String::as_str))
    }

    /// Parses `section.key` with `FromStr`; `Ok(None)` when absent.
    pub fn parsed<T>(&self, section: &str, key: &str) -> Result<Option<T>, ConfigError>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        match self.get(section, key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| ConfigError::value(qualified(section, key), format!("cannot parse `{v}`: {e}"))),
        }
    }

    pub fn required<T>(&self, section: &str, key: &str) -> Result<T, ConfigError>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        self.parsed(section, key)?
            .ok_or_else(|| ConfigError::Missing { field: qualified(section, key) })
    }

    pub fn f64_list(&self, section: &str, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        self.get(section, key)
            .map(|v| parse_f64_list(v).map_err(|m| ConfigError::value(qualified(section, key), m)))
            .transpose()
    }

    /// Fails on any key of `section` outside `allowed`.
    pub fn check_keys(&self, section: &str, allowed: &[&str]) -> Result<(), ConfigError> {
        match self.keys(section).find(|k| !allowed.contains(k)) {
            Some(k) => Err(ConfigError::Unknown { field: qualified(section, k) }),
            None => Ok(()),
        }
    }
}

fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(v)
}

/// Comma- or whitespace-separated finite numbers, optionally in brackets:
/// `0.5, 1, 2` or `[0.5 1 2]`.
pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    let inner = match (s.strip_prefix('['), s.ends_with(']')) {
        (Some(rest), true) => &rest[..rest.len() - 1],
        (None, false) => s,
        _ => return Err("unbalanced brackets".into()),
    };
    let out: Vec<f64> = inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(parse_number)
        .collect::<Result<_, _>>()?;
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

/// A list of `(a, ν)` pairs: `(1, 0.6), (0.5, 0.9)`, optionally wrapped in
/// brackets.
pub fn parse_pairs(s: &str) -> Result<Vec<(f64, f64)>, String> {
    let mut rest = s.trim();
    if let Some(r) = rest.strip_prefix('[') {
        rest = r.strip_suffix(']').ok_or("unbalanced brackets")?.trim();
    }
    let mut out = Vec::new();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| format!("expected `(` at `{rest}`"))?;
        let close = body.find(')').ok_or("unterminated `(`")?;
        let (a, b) = body[..close].split_once(',').ok_or("expected `(a, nu)`")?;
        out.push((parse_number(a)?, parse_number(b)?));
        rest = body[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err("trailing comma".into());
            }
        } else if !rest.is_empty() {
            return Err(format!("expected `,` before `{rest}`"));
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}
