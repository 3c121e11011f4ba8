use std::fs;
use std::path::Path;

use serde::Deserialize;

use super::{CliError, Format};

/// Defaults read from a TOML file; command-line flags take precedence.
///
/// ```toml
/// family = "hesse-cubic"
/// budget = 993
/// format = "json"
/// ```
#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub family: Option<String>,
    pub budget: Option<u64>,
    pub format: Option<Format>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("bad config: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Config::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys() {
        let c = Config::parse("family = \"quintic-cy3\"\nbudget = 100\nformat = \"json\"\n").unwrap();
        assert_eq!(c.family.as_deref(), Some("quintic-cy3"));
        assert_eq!(c.budget, Some(100));
        assert_eq!(c.format, Some(Format::Json));
        assert_eq!(Config::parse("").unwrap(), Config::default());
        assert!(Config::parse("colour = 1").is_err());
        assert!(Config::parse("budget = \"many\"").is_err());
    }
}
