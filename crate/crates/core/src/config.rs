//! Resolved settings for a run, loaded from JSON and echoed into every
//! artifact the tool writes.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::LocMode;
use crate::miner::FilterCriteria;
use crate::smells::{all_kinds, SmellConfig, SmellKind};
use crate::stages::DEFAULT_THRESHOLD;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Where semantic stage scores come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "transport", rename_all = "lowercase")]
pub enum AdapterConfig {
    /// Base URL of a service answering POST /classify.
    Http { endpoint: String, timeout_ms: u64 },
    /// A process reading one JSON request per line on stdin.
    Stdio { command: Vec<String>, timeout_ms: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToolConfig {
    pub enabled: BTreeSet<SmellKind>,
    pub smells: SmellConfig,
    pub loc_mode: LocMode,
    pub classifier_threshold: f64,
    pub keyword_config: Option<PathBuf>,
    pub adapter: Option<AdapterConfig>,
    pub filters: FilterCriteria,
    /// File extensions scanned when walking directories.
    pub extensions: Vec<String>,
}

impl Default for ToolConfig {
    fn default() -> Self {
        Self {
            enabled: all_kinds(),
            smells: SmellConfig::default(),
            loc_mode: LocMode::default(),
            classifier_threshold: DEFAULT_THRESHOLD,
            keyword_config: None,
            adapter: None,
            filters: FilterCriteria::default(),
            extensions: vec!["py".to_string()],
        }
    }
}

impl ToolConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let config: ToolConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.classifier_threshold > 0.0 && self.classifier_threshold <= 1.0) {
            return Err(ConfigError::Invalid(format!(
                "classifier_threshold {} is outside (0, 1]",
                self.classifier_threshold
            )));
        }
        if self.smells.call_star_min_run < 2 {
            return Err(ConfigError::Invalid("call_star_min_run must be at least 2".into()));
        }
        self.filters.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(())
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}
