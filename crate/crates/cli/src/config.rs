use std::fs;
use std::path::Path;

use prismkit_core::base_rings::Precision;
use prismkit_core::lemma_harness::DEFAULT_SEED;

use crate::CliError;

/// Run parameters: defaults, then the config file, then flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub p: u64,
    pub padic_digits: u32,
    pub witt_length: usize,
    /// Whether `witt_length` came from a flag or file rather than the default.
    pub witt_length_set: bool,
    pub delta_depth: usize,
    pub series_order: u32,
    pub enumeration_budget: u128,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            p: 2,
            padic_digits: 4,
            witt_length: 3,
            witt_length_set: false,
            delta_depth: 2,
            series_order: 8,
            enumeration_budget: 1 << 20,
            seed: DEFAULT_SEED,
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.trim().parse().map_err(|_| CliError::Usage(format!("bad value {value:?} for {key}")))
}

impl Config {
    /// Apply `key = value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("{}:{}: expected key = value", path.display(), lineno + 1)))?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "p" => self.p = num(key, value)?,
            "padic_digits" | "prec" => self.padic_digits = num(key, value)?,
            "witt_length" | "witt_len" => {
                self.witt_length = num(key, value)?;
                self.witt_length_set = true;
            }
            "delta_depth" | "depth" => self.delta_depth = num(key, value)?,
            "series_order" | "order" => self.series_order = num(key, value)?,
            "enumeration_budget" | "budget" => self.enumeration_budget = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            _ => return Err(CliError::Usage(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    pub fn precision(&self) -> Result<Precision, CliError> {
        if self.enumeration_budget == 0 {
            return Err(CliError::Usage("enumeration budget must be positive".into()));
        }
        Ok(Precision::new(self.p, self.padic_digits, self.witt_length, self.delta_depth, self.series_order)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let dir = std::env::temp_dir().join(format!("prismkit-config-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        fs::write(&path, "# run\np = 3\nprec=5 \n\nseed = 9 # trailing\n").unwrap();
        let mut c = Config::default();
        c.apply_file(&path).unwrap();
        assert_eq!((c.p, c.padic_digits, c.seed, c.witt_length), (3, 5, 9, 3));
        c.set("p", "5").unwrap();
        assert_eq!(c.p, 5);
        fs::write(&path, "colour = blue\n").unwrap();
        assert!(matches!(Config::default().apply_file(&path), Err(CliError::Usage(_))));
        fs::write(&path, "p 3\n").unwrap();
        assert!(matches!(Config::default().apply_file(&path), Err(CliError::Usage(_))));
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn precision_validation() {
        let mut c = Config::default();
        assert!(c.precision().is_ok());
        c.p = 4;
        assert!(matches!(c.precision(), Err(CliError::Domain(_))));
        assert!(matches!(Config::default().set("p", "two"), Err(CliError::Usage(_))));
    }
}
