//! `key = value` run files. Command-line flags take precedence.

use anyhow::{anyhow, bail, Context, Result};
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

pub const KEYS: &[&str] = &[
    "workers",
    "out",
    "timings",
    "cache",
    "suite",
    "pmin",
    "pmax",
    "nmax",
    "K",
    "brute_cap",
    "schoof_cap",
    "gk_samples",
    "seed",
    "cohen_threshold",
    "claim",
    "threshold",
    "p",
    "bins",
    "bound",
    "ap_pmin",
    "ap_pmax",
];

#[derive(Debug, Default, Clone)]
pub struct FileConfig(BTreeMap<String, String>);

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key=value", i + 1))?;
            let (k, v) = (k.trim().replace('-', "_"), v.trim());
            if !KEYS.contains(&k.as_str()) {
                bail!("line {}: unknown key {k}", i + 1);
            }
            map.insert(k, v.to_string());
        }
        Ok(FileConfig(map))
    }

    /// `flag` if given, else the file value for `key`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.0
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| anyhow!("config key {key} = {v}: {e}"))
            })
            .transpose()
    }

    pub fn flag(&self, flag: bool, key: &str) -> Result<bool> {
        Ok(flag || self.pick::<bool>(None, key)?.unwrap_or(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_precedence() {
        let c = FileConfig::parse(
            "# run\npmin = 11\npmax=97 # inline\nbrute-cap = 50\ntimings = true\n",
        )
        .unwrap();
        assert_eq!(c.pick::<u32>(None, "pmin").unwrap(), Some(11));
        assert_eq!(c.pick(Some(13u32), "pmin").unwrap(), Some(13));
        assert_eq!(c.pick::<u32>(None, "brute_cap").unwrap(), Some(50));
        assert_eq!(c.pick::<u32>(None, "nmax").unwrap(), None);
        assert!(c.flag(false, "timings").unwrap());
        assert!(FileConfig::parse("bogus = 1").is_err());
        assert!(FileConfig::parse("pmin 7").is_err());
        assert!(FileConfig::parse("pmin = x")
            .unwrap()
            .pick::<u32>(None, "pmin")
            .is_err());
    }
}
