//! Optional TOML settings. Command-line flags override these, and these
//! override built-in defaults.

use std::path::Path;
use std::time::Duration;

use serde::Deserialize;
use tiling_lab::partition::PartitionParams;
use tiling_lab::SearchBudget;

use crate::CliError;

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub max_nodes: Option<u64>,
    pub timeout_secs: Option<u64>,
    pub relaxed: Option<bool>,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub sampling: SamplingSection,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub beta_prime: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SamplingSection {
    pub p: Option<f64>,
    pub trials: Option<u64>,
}

pub const DEFAULT_ALPHA: f64 = 0.15;
pub const DEFAULT_BETA: f64 = 0.25;
pub const DEFAULT_BETA_PRIME: f64 = 0.75;
pub const DEFAULT_GAMMA: f64 = 0.05;

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Input(format!("bad config {}: {e}", path.display())))
    }

    pub fn budget(&self, max_nodes: Option<u64>, timeout_secs: Option<u64>) -> Result<SearchBudget, CliError> {
        let d = SearchBudget::default();
        let nodes = max_nodes.or(self.max_nodes).unwrap_or(d.max_nodes);
        let secs = timeout_secs
            .or(self.timeout_secs)
            .map(Duration::from_secs)
            .unwrap_or(d.deadline);
        SearchBudget::new(nodes, secs).map_err(|e| CliError::Input(e.to_string()))
    }
}

/// Flag values for the good-partition parameters.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct ParamArgs {
    /// Number of classes r.
    #[arg(long)]
    pub r: usize,
    /// Class size n; defaults to |V|/r.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long = "beta-prime")]
    pub beta_prime: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
}

impl ParamArgs {
    /// Flags, then the config file, then `fallback` (e.g. parameters stored
    /// next to a partition), then defaults.
    pub fn resolve(
        &self,
        order: usize,
        cfg: &FileConfig,
        fallback: Option<&PartitionParams>,
    ) -> Result<PartitionParams, CliError> {
        let n = match self.n {
            Some(n) => n,
            None if self.r > 0 && order.is_multiple_of(self.r) => order / self.r,
            None => {
                return Err(CliError::Input(format!(
                    "|V| = {order} is not a multiple of r = {}",
                    self.r
                )))
            }
        };
        let pick = |flag: Option<f64>, file: Option<f64>, fb: Option<f64>, d: f64| flag.or(file).or(fb).unwrap_or(d);
        PartitionParams::new(
            pick(self.alpha, cfg.params.alpha, fallback.map(|p| p.alpha), DEFAULT_ALPHA),
            pick(self.beta, cfg.params.beta, fallback.map(|p| p.beta), DEFAULT_BETA),
            pick(
                self.beta_prime,
                cfg.params.beta_prime,
                fallback.map(|p| p.beta_prime),
                DEFAULT_BETA_PRIME,
            ),
            pick(self.gamma, cfg.params.gamma, fallback.map(|p| p.gamma), DEFAULT_GAMMA),
            n,
            self.r,
        )
        .map_err(|e| CliError::Input(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beat_defaults() {
        let cfg: FileConfig = toml::from_str("[params]\nalpha = 0.2\nbeta = 0.3\n").unwrap();
        let args = ParamArgs {
            r: 3,
            beta: Some(0.4),
            ..Default::default()
        };
        let p = args.resolve(12, &cfg, None).unwrap();
        assert_eq!((p.alpha, p.beta, p.gamma, p.n), (0.2, 0.4, DEFAULT_GAMMA, 4));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<FileConfig>("sed = 1").is_err());
    }
}
