use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use frackit_core::config::{qualified, Config, ConfigError};

use crate::args::Common;
use crate::failure::{CliResult, Failure};

/// Config file (if any) with `--set` and named flags applied on top.
pub struct Settings {
    pub cfg: Config,
    pub output: Option<PathBuf>,
}

impl Settings {
    pub fn load(common: &Common, flags: &[(&str, &str, &Option<String>)]) -> CliResult<Self> {
        let mut cfg = match &common.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
                Config::parse(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
            }
            None => Config::default(),
        };
        for item in &common.set {
            let (path, value) = item
                .split_once('=')
                .ok_or_else(|| Failure::Config(format!("--set `{item}`: expected SECTION.KEY=VALUE")))?;
            let (section, key) = path
                .trim()
                .split_once('.')
                .ok_or_else(|| Failure::Config(format!("--set `{item}`: key must be qualified by its section")))?;
            cfg.set(section, key, value.trim());
        }
        for &(section, key, value) in flags {
            if let Some(v) = value {
                cfg.set(section, key, v.trim());
            }
        }
        let output = match &common.output {
            Some(p) => Some(p.clone()),
            None => cfg.get("output", "path").map(PathBuf::from),
        };
        cfg.check_keys("output", &["path"])?;
        Ok(Self { cfg, output })
    }

    pub fn required<T>(&self, section: &str, key: &str) -> CliResult<T>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        Ok(self.cfg.required(section, key)?)
    }

    pub fn optional<T>(&self, section: &str, key: &str) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        Ok(self.cfg.parsed(section, key)?)
    }

    pub fn list(&self, section: &str, key: &str) -> CliResult<Vec<f64>> {
        self.cfg
            .f64_list(section, key)?
            .ok_or_else(|| ConfigError::Missing { field: qualified(section, key) }.into())
    }

    /// Either an explicit list `key`, or `key_min`, `key_max`, `key_points`
    /// for equally spaced values.
    pub fn list_or_range(&self, section: &str, key: &str) -> CliResult<Vec<f64>> {
        if self.cfg.get(section, key).is_some() {
            return self.list(section, key);
        }
        let lo_key = format!("{key}_min");
        if self.cfg.get(section, &lo_key).is_none() {
            return Err(ConfigError::Missing { field: qualified(section, key) }.into());
        }
        let lo: f64 = self.required(section, &lo_key)?;
        let hi: f64 = self.required(section, &format!("{key}_max"))?;
        let count: usize = self.required(section, &format!("{key}_points"))?;
        if count == 0 || !lo.is_finite() || !hi.is_finite() || (count > 1 && !(hi > lo)) {
            return Err(ConfigError::value(
                qualified(section, &format!("{key}_points")),
                "need at least one point and min < max",
            )
            .into());
        }
        if count == 1 {
            return Ok(vec![lo]);
        }
        let step = (hi - lo) / (count - 1) as f64;
        Ok((0..count)
            .map(|i| if i + 1 == count { hi } else { lo + i as f64 * step })
            .collect())
    }

    pub fn check_keys(&self, section: &str, allowed: &[&str]) -> CliResult<()> {
        Ok(self.cfg.check_keys(section, allowed)?)
    }
}
