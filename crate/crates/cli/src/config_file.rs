//! Optional plain-text configuration: one `key = value` per line, `#`
//! comments allowed. Flags win over config entries; config entries win over
//! defaults.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{usage, CliError};

pub struct ConfigFile {
    entries: HashMap<String, String>,
}

impl ConfigFile {
    pub fn empty() -> Self {
        Self {
            entries: HashMap::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut entries = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                usage(format!(
                    "{}:{}: expected `key = value`, found {line:?}",
                    path.display(),
                    idx + 1
                ))
            })?;
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { entries })
    }

    /// Fills `slot` from the config when the flag was not given.
    pub fn fill<T: std::str::FromStr>(
        &self,
        slot: &mut Option<T>,
        key: &str,
    ) -> Result<(), CliError> {
        if slot.is_none() {
            if let Some(raw) = self.entries.get(key) {
                let parsed = raw
                    .parse::<T>()
                    .map_err(|_| usage(format!("config key {key}: cannot parse {raw:?}")))?;
                *slot = Some(parsed);
            }
        }
        Ok(())
    }

    pub fn fill_flag(&self, slot: &mut bool, key: &str) -> Result<(), CliError> {
        if !*slot {
            if let Some(raw) = self.entries.get(key) {
                *slot = raw
                    .parse::<bool>()
                    .map_err(|_| usage(format!("config key {key}: expected true/false, found {raw:?}")))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_fills_unset_slots() {
        let dir = std::env::temp_dir().join(format!("semipartm-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "# comment\nseed = 42\nfolds = 7\n").unwrap();
        let config = ConfigFile::load(&path).unwrap();
        let mut seed: Option<u64> = None;
        let mut folds: Option<usize> = Some(5);
        config.fill(&mut seed, "seed").unwrap();
        config.fill(&mut folds, "folds").unwrap();
        assert_eq!(seed, Some(42));
        assert_eq!(folds, Some(5), "flag value wins over config");
    }

    #[test]
    fn bad_lines_are_usage_errors() {
        let dir = std::env::temp_dir().join(format!("semipartm-cfg2-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.conf");
        std::fs::write(&path, "this is not a pair\n").unwrap();
        assert!(ConfigFile::load(&path).is_err());
    }
}
