//! Optional key-value config file mirroring the command-line flags.
//!
//! Format: one `key = value` pair per line, keys named like the long flags
//! without the leading dashes (`lambda = 3/2`, `quad-nodes = 16`). Blank
//! lines and `#` comments are ignored. Values given on the command line win
//! over the file.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn empty() -> Self {
        FileConfig {
            values: HashMap::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut values = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!(
                    "config {}:{}: expected `key = value`, got `{line}`",
                    path.display(),
                    lineno + 1
                ));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// CLI value if present, else the config file's, else the default.
    pub fn resolve<T: FromStr + Clone>(
        &self,
        cli: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, String> {
        if let Some(v) = cli {
            return Ok(v);
        }
        match self.get(key) {
            Some(raw) => raw
                .parse()
                .map_err(|_| format!("config key `{key}`: cannot parse `{raw}`")),
            None => Ok(default),
        }
    }

    /// Like [`FileConfig::resolve`] but with a custom parser (rationals).
    pub fn resolve_with<T: Clone>(
        &self,
        cli: Option<T>,
        key: &str,
        default: T,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<T, String> {
        if let Some(v) = cli {
            return Ok(v);
        }
        match self.get(key) {
            Some(raw) => parse(raw).map_err(|e| format!("config key `{key}`: {e}")),
            None => Ok(default),
        }
    }
}
