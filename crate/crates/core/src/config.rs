//! Runtime settings. Precedence: command-line flags, then `PGX_*`
//! environment variables, then a `pgx.toml` file, then defaults.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::group::{ValidationPolicy, DEFAULT_FULL_VALIDATION_CAP, DEFAULT_SAMPLED_TRIPLES};
use crate::powergraph::DEFAULT_BRUTE_CAP;
use crate::report::OutputFormat;

pub const CONFIG_FILE: &str = "pgx.toml";
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliConfig {
    /// Largest order for which explicit graphs are built.
    pub brute_cap: usize,
    /// Largest order validated with every associativity triple.
    pub assoc_cap: usize,
    pub census_dir: Option<PathBuf>,
    pub format: OutputFormat,
    pub seed: u64,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            brute_cap: DEFAULT_BRUTE_CAP,
            assoc_cap: DEFAULT_FULL_VALIDATION_CAP,
            census_dir: None,
            format: OutputFormat::Text,
            seed: DEFAULT_SEED,
        }
    }
}

/// Settings given explicitly on the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub brute_cap: Option<usize>,
    pub assoc_cap: Option<usize>,
    pub census_dir: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub seed: Option<u64>,
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::input(format!("{key}: `{value}` is not a valid number")))
}

fn positive(key: &str, v: usize) -> Result<usize> {
    if v == 0 {
        return Err(Error::input(format!("{key} must be positive")));
    }
    Ok(v)
}

impl CliConfig {
    pub fn validation_policy(&self) -> ValidationPolicy {
        ValidationPolicy {
            full_cap: self.assoc_cap,
            samples: DEFAULT_SAMPLED_TRIPLES,
            seed: self.seed,
        }
    }

    /// Applies one `key = value` setting; keys accept `_` or `-`.
    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.replace('-', "_").as_str() {
            "brute_cap" => self.brute_cap = positive(key, parse_num(key, value)?)?,
            "assoc_cap" => self.assoc_cap = positive(key, parse_num(key, value)?)?,
            "census_dir" => self.census_dir = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            "seed" => self.seed = parse_num(key, value)?,
            _ => return Err(Error::input(format!("unknown configuration key `{key}`"))),
        }
        Ok(())
    }

    fn apply_file(&mut self, text: &str, origin: &Path) -> Result<()> {
        let table: toml::Table = text
            .parse()
            .map_err(|e| Error::input(format!("{}: {e}", origin.display())))?;
        for (key, value) in &table {
            let value = match value {
                toml::Value::String(s) => s.clone(),
                toml::Value::Integer(i) => i.to_string(),
                other => {
                    return Err(Error::input(format!(
                        "{}: `{key}` must be a string or an integer, found {}",
                        origin.display(),
                        other.type_str()
                    )))
                }
            };
            self.set(key, &value)
                .map_err(|e| Error::input(format!("{}: {e}", origin.display())))?;
        }
        Ok(())
    }

    /// Resolves the configuration. `config_path` names an explicit file
    /// (which must exist); otherwise `./pgx.toml` is read when present.
    /// `env` looks up environment variables.
    pub fn resolve(
        overrides: &Overrides,
        config_path: Option<&Path>,
        env: impl Fn(&str) -> Option<String>,
    ) -> Result<CliConfig> {
        let mut cfg = CliConfig::default();
        let file = match config_path {
            Some(p) => Some(p.to_path_buf()),
            None => Some(PathBuf::from(CONFIG_FILE)).filter(|p| p.is_file()),
        };
        if let Some(path) = file {
            let text = std::fs::read_to_string(&path).map_err(|source| Error::File {
                path: path.clone(),
                source,
            })?;
            cfg.apply_file(&text, &path)?;
        }
        for (var, key) in [
            ("PGX_BRUTE_CAP", "brute_cap"),
            ("PGX_ASSOC_CAP", "assoc_cap"),
            ("PGX_CENSUS_DIR", "census_dir"),
            ("PGX_FORMAT", "format"),
            ("PGX_SEED", "seed"),
        ] {
            if let Some(v) = env(var).filter(|v| !v.is_empty()) {
                cfg.set(key, &v)
                    .map_err(|e| Error::input(format!("{var}: {e}")))?;
            }
        }
        if let Some(v) = overrides.brute_cap {
            cfg.brute_cap = positive("--brute-cap", v)?;
        }
        if let Some(v) = overrides.assoc_cap {
            cfg.assoc_cap = positive("--assoc-cap", v)?;
        }
        if let Some(v) = &overrides.census_dir {
            cfg.census_dir = Some(v.clone());
        }
        if let Some(v) = overrides.format {
            cfg.format = v;
        }
        if let Some(v) = overrides.seed {
            cfg.seed = v;
        }
        Ok(cfg)
    }
}
