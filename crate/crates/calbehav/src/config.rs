//! Run configuration: built-in defaults, an optional JSON config file named
//! by `CALBEHAV_CONFIG`, and command-line overrides, in rising precedence.

use crate::error::Error;
use crate::miner::PrecedenceMode;
use crate::ratio::Ratio;
use serde::Deserialize;
use std::path::Path;

pub const CONFIG_ENV_VAR: &str = "CALBEHAV_CONFIG";
pub const DEFAULT_MIN_CONFIDENCE: &str = "0.8";
pub const DEFAULT_MIN_SUPPORT: usize = 3;
pub const DEFAULT_FOLDS: usize = 5;
pub const DEFAULT_SEED: u64 = 1;

/// The subset of settings a config file may carry. Numbers arrive as raw
/// JSON values so the confidence threshold can be re-read as a decimal
/// string instead of going through f64.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub min_confidence: Option<serde_json::Number>,
    pub min_support: Option<usize>,
    pub folds: Option<usize>,
    pub seed: Option<u64>,
    pub precedence: Option<String>,
}

impl FileConfig {
    pub fn from_str(text: &str) -> Result<Self, Error> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading config {}", path.display()), e))?;
        FileConfig::from_str(&text)
    }

    /// Loads the file named by `CALBEHAV_CONFIG` if the variable is set;
    /// unset means defaults, but a set-and-unreadable file is an error.
    pub fn from_env() -> Result<Self, Error> {
        match std::env::var_os(CONFIG_ENV_VAR) {
            None => Ok(FileConfig::default()),
            Some(path) => FileConfig::from_path(Path::new(&path)),
        }
    }
}

/// Everything the mining and evaluation passes need to know.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub min_confidence: Ratio,
    pub min_support: usize,
    pub folds: usize,
    pub seed: u64,
    pub precedence: PrecedenceMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            min_confidence: Ratio::parse_decimal(DEFAULT_MIN_CONFIDENCE)
                .expect("default threshold parses"),
            min_support: DEFAULT_MIN_SUPPORT,
            folds: DEFAULT_FOLDS,
            seed: DEFAULT_SEED,
            precedence: PrecedenceMode::Global,
        }
    }
}

/// Command-line values; `None` means the flag was not given.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub min_confidence: Option<Ratio>,
    pub min_support: Option<usize>,
    pub folds: Option<usize>,
    pub seed: Option<u64>,
    pub precedence: Option<PrecedenceMode>,
}

pub fn parse_precedence(name: &str) -> Result<PrecedenceMode, Error> {
    match name {
        "global" => Ok(PrecedenceMode::Global),
        "per-node" => Ok(PrecedenceMode::PerNode),
        other => Err(Error::Config(format!(
            "precedence must be `global` or `per-node`, got `{other}`"
        ))),
    }
}

impl RunConfig {
    /// Defaults, overwritten by the config file, overwritten by flags. The
    /// file's threshold goes through its decimal spelling so `0.8` stays
    /// exactly 8/10.
    pub fn resolve(file: &FileConfig, overrides: &Overrides) -> Result<Self, Error> {
        let mut config = RunConfig::default();
        if let Some(number) = &file.min_confidence {
            config.min_confidence = Ratio::parse_decimal(&number.to_string())
                .map_err(|e| Error::Config(format!("min_confidence: {e}")))?;
        }
        if let Some(support) = file.min_support {
            config.min_support = support;
        }
        if let Some(folds) = file.folds {
            config.folds = folds;
        }
        if let Some(seed) = file.seed {
            config.seed = seed;
        }
        if let Some(name) = &file.precedence {
            config.precedence = parse_precedence(name)?;
        }
        if let Some(confidence) = overrides.min_confidence {
            config.min_confidence = confidence;
        }
        if let Some(support) = overrides.min_support {
            config.min_support = support;
        }
        if let Some(folds) = overrides.folds {
            config.folds = folds;
        }
        if let Some(seed) = overrides.seed {
            config.seed = seed;
        }
        if let Some(precedence) = overrides.precedence {
            config.precedence = precedence;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.min_support == 0 {
            return Err(Error::Config(String::from("min_support must be at least 1")));
        }
        if self.folds < 2 {
            return Err(Error::Config(String::from("folds must be at least 2")));
        }
        if self.min_confidence > Ratio::ONE {
            return Err(Error::Config(String::from("min_confidence must not exceed 1")));
        }
        Ok(())
    }
}
