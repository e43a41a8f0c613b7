//! Line-oriented `key=value` configuration files.
//!
//! `#` starts a comment, blank lines are ignored, a duplicate key overrides
//! the earlier one with a warning. Flags override config values; config
//! values override built-in defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

#[derive(Debug)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: 0,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut values = BTreeMap::new();
        let mut warnings = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError {
                    line: idx + 1,
                    message: format!("expected key=value, got `{line}`"),
                });
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(ConfigError {
                    line: idx + 1,
                    message: "empty key".to_string(),
                });
            }
            if values.insert(key.clone(), value).is_some() {
                warnings.push(format!(
                    "config line {}: duplicate key `{key}`, last one wins",
                    idx + 1
                ));
            }
        }
        Ok(Config { values, warnings })
    }


    /// Flag value if given, else config value parsed, else default.
    pub fn resolve<T: std::str::FromStr + Clone>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, ConfigError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(raw) => raw.parse().map_err(|_| ConfigError {
                line: 0,
                message: format!("config key `{key}`: cannot parse `{raw}`"),
            }),
            None => Ok(default),
        }
    }

    /// Flag value if given, else config value parsed; `None` when absent.
    pub fn resolve_opt<T: std::str::FromStr>(
        &self,
        flag: Option<T>,
        key: &str,
    ) -> Result<Option<T>, ConfigError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| ConfigError {
                    line: 0,
                    message: format!("config key `{key}`: cannot parse `{raw}`"),
                }),
            None => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_gives_defaults() {
        let c = Config::parse("").unwrap();
        assert_eq!(c.resolve(None, "h_max", 4usize).unwrap(), 4);
    }

    #[test]
    fn values_and_comments() {
        let c = Config::parse("# a comment\nh_max = 3\nseed=77 # trailing\n").unwrap();
        assert_eq!(c.resolve(None, "h_max", 4usize).unwrap(), 3);
        assert_eq!(c.resolve(None, "seed", 0u64).unwrap(), 77);
        assert!(c.warnings.is_empty());
    }

    #[test]
    fn duplicate_key_warns_last_wins() {
        let c = Config::parse("p=3\np=5\n").unwrap();
        assert_eq!(c.resolve(None, "p", 0usize).unwrap(), 5);
        assert_eq!(c.warnings.len(), 1);
    }

    #[test]
    fn flag_overrides_config() {
        let c = Config::parse("budget=2\n").unwrap();
        assert_eq!(c.resolve(Some(9usize), "budget", 4).unwrap(), 9);
    }

    #[test]
    fn parse_error_carries_line() {
        let err = Config::parse("ok=1\nnot a pair\n").unwrap_err();
        assert_eq!(err.line, 2);
    }
}
