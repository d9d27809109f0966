//! Run configuration shared by the analysis pipeline and the CLI.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Double,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Clone)]
pub struct Config {
    /// Max |gradient entry| accepted for a refined critical point.
    pub tolerance_residual: f64,
    /// Max coordinate-wise distance identifying two structured points.
    pub tolerance_dedupe: f64,
    /// Scale-aware floor under which a Hessian determinant counts as
    /// degenerate.
    pub degeneracy_threshold: f64,
    pub precision: Precision,
    pub max_dim: usize,
    /// Seed for the randomized property commands.
    pub seed: u64,
    pub output: OutputFormat,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tolerance_residual: 1e-10,
            tolerance_dedupe: 1e-8,
            degeneracy_threshold: 1e-8,
            precision: Precision::Double,
            max_dim: 10,
            seed: 0,
            output: OutputFormat::Json,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.tolerance_residual) {
            return Err(Error::Config("tolerance_residual must be positive".into()));
        }
        if !positive(self.tolerance_dedupe) {
            return Err(Error::Config("tolerance_dedupe must be positive".into()));
        }
        if !positive(self.degeneracy_threshold) {
            return Err(Error::Config("degeneracy_threshold must be positive".into()));
        }
        if self.max_dim < 1 {
            return Err(Error::Config("max_dim must be at least 1".into()));
        }
        Ok(())
    }
}
