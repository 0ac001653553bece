//! Flat key-value configuration with flag-over-file precedence.

use std::path::Path;

use serde::Deserialize;

use crate::CliError;

/// The twelve model/market/contract keys accepted in a TOML config file.
/// Command-line flags with the same (kebab-case) names override file values.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub alpha: Option<f64>,
    pub hurst: Option<f64>,
    pub mu_r: Option<f64>,
    pub sigma_r: Option<f64>,
    pub mu_s: Option<f64>,
    pub sigma_s: Option<f64>,
    pub rho: Option<f64>,
    pub r0: Option<f64>,
    pub s0: Option<f64>,
    pub strike: Option<f64>,
    pub maturity: Option<f64>,
    pub t: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

/// One resolved scalar: flag wins, then file, then the subcommand default.
pub fn resolve(flag: Option<f64>, file: Option<f64>, default: Option<f64>, key: &str) -> Result<f64, CliError> {
    flag.or(file)
        .or(default)
        .ok_or_else(|| CliError::Usage(format!("missing required parameter `{key}` (flag --{} or config key)", key.replace('_', "-"))))
}
