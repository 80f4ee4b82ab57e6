//! Experiment configuration: JSON on disk, validated on load.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::runner::RunError;

/// Where the group comes from: a built-in family or a table file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Kind { kind: String, n: usize },
    Table { table: PathBuf },
}

/// A finite action for the lifting demo: a named one or an explicit
/// carrier-by-group table of indices.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ActionSpec {
    Named(String),
    Table(Vec<Vec<usize>>),
}

impl Default for ActionSpec {
    fn default() -> Self {
        ActionSpec::Named("natural".to_string())
    }
}

/// One experiment, fully described. Fields not needed by a given
/// subcommand may be left at their defaults.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub group: GroupSpec,
    /// Representation on the domain side: permutation | regular | rotation2d.
    #[serde(default = "default_rep")]
    pub rep_in: String,
    /// Representation on the codomain side.
    #[serde(default = "default_rep")]
    pub rep_out: String,
    /// Builtin target name, or `symmetrized:<builtin>`.
    #[serde(default = "default_target")]
    pub target: String,
    /// Per-coordinate sampling intervals for the compact box.
    #[serde(default = "default_bounds")]
    pub bounds: Vec<[f64; 2]>,
    #[serde(default = "default_train_count")]
    pub train_count: usize,
    #[serde(default = "default_test_count")]
    pub test_count: usize,
    #[serde(default = "default_widths")]
    pub widths: Vec<usize>,
    #[serde(default = "default_activation")]
    pub activation: String,
    #[serde(default = "default_ridge_lambda")]
    pub ridge_lambda: f64,
    #[serde(default)]
    pub seed: u64,
    /// Finite action for `lift-demo`.
    #[serde(default)]
    pub action: ActionSpec,
}

fn default_rep() -> String {
    "permutation".to_string()
}

fn default_target() -> String {
    "swap_poly".to_string()
}

fn default_bounds() -> Vec<[f64; 2]> {
    vec![[-1.0, 1.0], [-1.0, 1.0]]
}

fn default_train_count() -> usize {
    512
}

fn default_test_count() -> usize {
    128
}

fn default_widths() -> Vec<usize> {
    vec![16, 64]
}

fn default_activation() -> String {
    "tanh".to_string()
}

fn default_ridge_lambda() -> f64 {
    1e-8
}

impl ExperimentConfig {
    /// Loads and validates a config file; all failures are usage errors.
    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            RunError::Usage(format!("cannot read config {}: {e}", path.display()))
        })?;
        let config: ExperimentConfig = serde_json::from_str(&text).map_err(|e| {
            RunError::Usage(format!("cannot parse config {}: {e}", path.display()))
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), RunError> {
        if self.widths.is_empty() {
            return Err(RunError::Usage("widths must be nonempty".to_string()));
        }
        if self.widths.contains(&0) {
            return Err(RunError::Usage("widths must be positive".to_string()));
        }
        if self.train_count == 0 || self.test_count == 0 {
            return Err(RunError::Usage(
                "train and test counts must be at least 1".to_string(),
            ));
        }
        if self.bounds.is_empty() {
            return Err(RunError::Usage("bounds must be nonempty".to_string()));
        }
        for (i, b) in self.bounds.iter().enumerate() {
            if b[0] > b[1] || !b[0].is_finite() || !b[1].is_finite() {
                return Err(RunError::Usage(format!(
                    "bound {i} is invalid: [{}, {}]",
                    b[0], b[1]
                )));
            }
        }
        if self.ridge_lambda < 0.0 || !self.ridge_lambda.is_finite() {
            return Err(RunError::Usage(format!(
                "ridge_lambda must be a nonnegative real, got {}",
                self.ridge_lambda
            )));
        }
        Ok(())
    }

    /// Applies the `--group table:<path>` and `--seed` command-line
    /// overrides.
    pub fn apply_overrides(
        &mut self,
        group: Option<&str>,
        seed: Option<u64>,
    ) -> Result<(), RunError> {
        if let Some(spec) = group {
            let path = spec.strip_prefix("table:").ok_or_else(|| {
                RunError::Usage(format!(
                    "--group override must have the form table:<path>, got '{spec}'"
                ))
            })?;
            self.group = GroupSpec::Table {
                table: PathBuf::from(path),
            };
        }
        if let Some(seed) = seed {
            self.seed = seed;
        }
        Ok(())
    }
}
