//! `key = value` configuration files and provenance records.
//!
//! Keys use the same names as the long command-line flags. Blank lines and
//! `#` comments are skipped. Provenance files written next to command
//! outputs reuse this syntax (with comment headers), so a previous run's
//! provenance is itself a valid `--config` input.

use std::collections::HashMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{Context, Result};

use crate::UsageError;

/// Parsed contents of one config file.
#[derive(Debug, Default)]
pub struct ConfigFile {
    entries: HashMap<String, String>,
}

impl ConfigFile {
    /// A config with no entries, used when `--config` was not given.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let raw = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut entries = HashMap::new();
        for (idx, line) in raw.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                UsageError(format!(
                    "{}:{}: expected `key = value`, got {line:?}",
                    path.display(),
                    idx + 1
                ))
            })?;
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ConfigFile { entries })
    }

    /// Parsed value of `key`, if the file has it.
    pub fn get<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| UsageError(format!("config key {key} = {raw}: {e}")).into()),
        }
    }
}

/// Flag value if given, else config-file value, else `default`.
pub fn resolve<T>(flag: Option<T>, cfg: &ConfigFile, key: &str, default: T) -> Result<T>
where
    T: FromStr,
    T::Err: Display,
{
    Ok(flag.or(cfg.get(key)?).unwrap_or(default))
}

/// Flag value if given, else config-file value, else a usage error.
pub fn resolve_required<T>(flag: Option<T>, cfg: &ConfigFile, key: &str) -> Result<T>
where
    T: FromStr,
    T::Err: Display,
{
    flag.or(cfg.get(key)?).ok_or_else(|| {
        UsageError(format!("missing required --{key} (flag or config entry)")).into()
    })
}

/// Flag value if given, else config-file value, else `None`.
pub fn resolve_optional<T>(flag: Option<T>, cfg: &ConfigFile, key: &str) -> Result<Option<T>>
where
    T: FromStr,
    T::Err: Display,
{
    match flag {
        Some(value) => Ok(Some(value)),
        None => cfg.get(key),
    }
}

/// Boolean switch: a set flag always wins; otherwise the config entry.
pub fn resolve_switch(flag: bool, cfg: &ConfigFile, key: &str) -> Result<bool> {
    if flag {
        return Ok(true);
    }
    Ok(cfg.get::<bool>(key)?.unwrap_or(false))
}

/// Write the resolved settings of a run next to its outputs. The file is
/// itself a loadable config; comments carry the command and tool version.
pub fn write_provenance<K, V>(path: &Path, command: &str, entries: &[(K, V)]) -> Result<()>
where
    K: AsRef<str>,
    V: AsRef<str>,
{
    let mut out = String::new();
    out.push_str("# exprank provenance\n");
    out.push_str(&format!("# command: {command}\n"));
    out.push_str(&format!("# version: {}\n", env!("CARGO_PKG_VERSION")));
    for (key, value) in entries {
        out.push_str(&format!("{} = {}\n", key.as_ref(), value.as_ref()));
    }
    fs::write(path, out).with_context(|| format!("writing provenance {}", path.display()))
}

/// Provenance path for a command whose output is a single file: a sibling
/// named `<output>.provenance`.
pub fn sibling_provenance(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".provenance");
    PathBuf::from(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn files_parse_comments_blanks_and_padding() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(&path, "# a comment\n\n threshold = 0.85 \nseed=9\n").unwrap();
        let cfg = ConfigFile::load(&path).unwrap();
        assert_eq!(cfg.get::<f64>("threshold").unwrap(), Some(0.85));
        assert_eq!(cfg.get::<u64>("seed").unwrap(), Some(9));
        assert_eq!(cfg.get::<u64>("absent").unwrap(), None);
    }

    #[test]
    fn flags_override_config_entries() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(&path, "seed = 9\n").unwrap();
        let cfg = ConfigFile::load(&path).unwrap();
        assert_eq!(resolve(Some(4u64), &cfg, "seed", 0).unwrap(), 4);
        assert_eq!(resolve(None, &cfg, "seed", 0).unwrap(), 9);
        assert_eq!(resolve(None, &cfg, "other", 7u64).unwrap(), 7);
    }

    #[test]
    fn malformed_lines_and_values_are_usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(&path, "just a dangling line\n").unwrap();
        let err = ConfigFile::load(&path).unwrap_err();
        assert!(err.downcast_ref::<UsageError>().is_some());

        fs::write(&path, "seed = notanumber\n").unwrap();
        let cfg = ConfigFile::load(&path).unwrap();
        let err = cfg.get::<u64>("seed").unwrap_err();
        assert!(err.downcast_ref::<UsageError>().is_some());
    }

    #[test]
    fn provenance_round_trips_through_the_config_parser() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("provenance.txt");
        write_provenance(&path, "split", &[("seed", "3"), ("splits", "5")]).unwrap();
        let cfg = ConfigFile::load(&path).unwrap();
        assert_eq!(cfg.get::<u64>("seed").unwrap(), Some(3));
        assert_eq!(cfg.get::<usize>("splits").unwrap(), Some(5));
    }
}
