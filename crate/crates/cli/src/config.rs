//! Optional TOML defaults. Flags given on the command line always win.

use std::path::Path;

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub time_limit: Option<f64>,
    pub max_regions: Option<u64>,
    pub size_limit: Option<usize>,
    pub budget: Option<u128>,
    pub sweep_size: Option<usize>,
    pub skip_slow: Option<bool>,
}

impl Config {
    /// Accepts `time_limit` as well as `time-limit`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let table: toml::Table = text.parse().map_err(|e| CliError::Usage(format!("config: {e}")))?;
        let normalized: toml::Table = table.into_iter().map(|(k, v)| (k.replace('_', "-"), v)).collect();
        normalized.try_into().map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_spellings() {
        let c = Config::parse("seed = 7\ntime_limit = 2.5\nmax-regions = 10\nskip_slow = true").unwrap();
        assert_eq!(c.seed, Some(7));
        assert_eq!(c.time_limit, Some(2.5));
        assert_eq!(c.max_regions, Some(10));
        assert_eq!(c.skip_slow, Some(true));
    }

    #[test]
    fn unknown_keys_are_usage_errors() {
        assert!(matches!(Config::parse("colour = 1"), Err(CliError::Usage(_))));
        assert!(matches!(Config::parse("seed = "), Err(CliError::Usage(_))));
    }
}
