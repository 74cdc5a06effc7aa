//! Flat `key = value` configuration files.
//!
//! One setting per line; `#` starts a comment; keys use the long flag names
//! (`model`, `alpha`, `tau`, `nmax`, `seed`, `cache-dir`, …). Values given on
//! the command line take precedence over the file, which takes precedence
//! over built-in defaults.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim().replace('_', "-");
            if key.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "config line {}: empty key",
                    lineno + 1
                )));
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| {
                Error::InvalidParameter(format!("config key {key}: cannot parse {v:?}"))
            }),
        }
    }

    /// Command-line value if present, else the file's value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    /// True if the flag is set or the file enables the key.
    pub fn switch(&self, flag: bool, key: &str) -> Result<bool> {
        Ok(flag || self.get::<bool>(key)?.unwrap_or(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prioritizes() {
        let c = ConfigFile::parse(
            "# run\nmodel = kerr\nalpha=0.02 # weak\n\ncache_dir = /tmp/x\ncache = true\n",
        )
        .unwrap();
        assert_eq!(c.raw("model"), Some("kerr"));
        assert_eq!(c.get::<f64>("alpha").unwrap(), Some(0.02));
        assert_eq!(c.pick(Some(0.01), "alpha").unwrap(), Some(0.01));
        assert_eq!(c.pick::<f64>(None, "alpha").unwrap(), Some(0.02));
        assert_eq!(c.pick::<f64>(None, "tau").unwrap(), None);
        assert_eq!(c.raw("cache-dir"), Some("/tmp/x"));
        assert!(c.switch(false, "cache").unwrap());
    }

    #[test]
    fn rejects_malformed() {
        assert!(ConfigFile::parse("model kerr").is_err());
        assert!(ConfigFile::parse("alpha = x")
            .unwrap()
            .get::<f64>("alpha")
            .is_err());
    }
}
