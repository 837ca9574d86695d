//! Declarative experiment plans, read from TOML.
//!
//! ```toml
//! name = "gaussian-vs-mixture"
//! trials = 200
//! seed = 1                      # omit to draw one from entropy
//! n_values = [40, 100, 200]
//! algorithm = "exhaustive"      # or "multiscale"
//! eta = 0.5
//!
//! [kernel]
//! kind = "gaussian"             # or "laplace"
//! sigma = 1.0
//!
//! [p]
//! kind = "gaussian"
//! mean = 0.0
//! variance = 0.5
//!
//! [q]
//! kind = "gaussian_mixture"     # or "laplace_mixture"
//! components = [
//!   { weight = 0.5, mean = -2.0, variance = 0.5 },
//!   { weight = 0.5, mean = 2.0, variance = 0.5 },
//! ]
//!
//! [i_min]
//! rule = "ratios"               # I_min = round(r ln n), clamped to [2, n]
//! ratios = [1, 2, 4, 8]
//! # rule = "values", values = [4, 8]
//! # rule = "power",  exponent = 0.9      (I_min = ceil(n^exponent))
//! # rule = "bound",  eta = 0.5           (minimum-length bound, clamped to n)
//!
//! [[thresholds]]
//! rule = "fixed"                # or "known_mmd" (mmd2, delta), "decaying"
//! t = 0.25
//!
//! [placement]
//! rule = "uniform"              # or "fixed", start = 10
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DistributionSpec;
use crate::detector::{i_min_bound, Algorithm, MultiscaleParams, ThresholdRule};
use crate::error::{Error, Result};
use crate::kernels::{Kernel, KernelKind};
use crate::mmd::SummaryMode;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub sigma: f64,
}

impl KernelSpec {
    pub fn build(&self) -> Result<Kernel> {
        Kernel::new(self.kind, self.sigma)
    }
}

/// How `I_min` is chosen for each network size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum IMinRule {
    /// Explicit lengths; each must satisfy `2 <= I_min <= n`.
    Values { values: Vec<usize> },
    /// `I_min = round(r · ln n)` for each ratio `r`, clamped to `[2, n]`.
    Ratios { ratios: Vec<f64> },
    /// `I_min = ceil(n^exponent)`, clamped to `[2, n]`.
    Power { exponent: f64 },
    /// Minimum-length bound `ceil(16 K² (1+η) ln n / t²)` at the plan's
    /// threshold, clamped to `[2, n]`.
    Bound { eta: f64 },
}

/// A sweep point: the chosen `I_min` and the nominal sweep coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IMinPoint {
    pub i_min: usize,
    pub ratio: f64,
}

impl IMinRule {
    /// Sweep points for a network of `n` nodes at threshold `t`.
    pub fn points(&self, n: usize, t: f64, kernel_bound: f64) -> Result<Vec<IMinPoint>> {
        let ln_n = (n as f64).ln();
        let clamp = |v: f64| -> usize { (v.max(2.0) as usize).min(n) };
        match self {
            IMinRule::Values { values } => values
                .iter()
                .map(|&i_min| {
                    if i_min < 2 || i_min > n {
                        Err(Error::Config(format!(
                            "i_min = {i_min} is outside [2, {n}]"
                        )))
                    } else {
                        Ok(IMinPoint {
                            i_min,
                            ratio: i_min as f64 / ln_n,
                        })
                    }
                })
                .collect(),
            IMinRule::Ratios { ratios } => Ok(ratios
                .iter()
                .map(|&r| IMinPoint {
                    i_min: clamp((r * ln_n).round()),
                    ratio: r,
                })
                .collect()),
            IMinRule::Power { exponent } => {
                let i_min = clamp((n as f64).powf(*exponent).ceil());
                Ok(vec![IMinPoint {
                    i_min,
                    ratio: i_min as f64 / ln_n,
                }])
            }
            IMinRule::Bound { eta } => {
                let i_min = i_min_bound(kernel_bound, t, *eta, n)?.clamp(2, n);
                Ok(vec![IMinPoint {
                    i_min,
                    ratio: i_min as f64 / ln_n,
                }])
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            IMinRule::Values { values } if values.is_empty() => {
                Err(Error::Config("i_min values list is empty".into()))
            }
            IMinRule::Ratios { ratios } if ratios.is_empty() => {
                Err(Error::Config("i_min ratios list is empty".into()))
            }
            IMinRule::Ratios { ratios } if ratios.iter().any(|r| !(r.is_finite() && *r > 0.0)) => {
                Err(Error::Config("i_min ratios must be positive".into()))
            }
            IMinRule::Power { exponent } if !(exponent.is_finite() && *exponent > 0.0) => {
                Err(Error::Config("i_min exponent must be positive".into()))
            }
            IMinRule::Bound { eta } if !(eta.is_finite() && *eta > 0.0) => {
                Err(Error::Config("i_min bound eta must be positive".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Where the anomalous block of length `I_min` goes under H1.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Placement {
    /// Start drawn uniformly from `0..=n - I_min`.
    #[default]
    Uniform,
    /// Fixed start, shifted left when the block would run past the end.
    Fixed { start: usize },
}

fn default_trials() -> usize {
    200
}

fn default_eta() -> f64 {
    0.5
}

fn default_algorithm() -> Algorithm {
    Algorithm::Exhaustive
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    #[serde(default)]
    pub name: Option<String>,
    pub p: DistributionSpec,
    pub q: DistributionSpec,
    pub kernel: KernelSpec,
    pub n_values: Vec<usize>,
    pub i_min: IMinRule,
    pub thresholds: Vec<ThresholdRule>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Drawn from entropy when absent; the value used is echoed in results.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default = "default_algorithm")]
    pub algorithm: Algorithm,
    #[serde(default)]
    pub multiscale: MultiscaleParams,
    #[serde(default)]
    pub placement: Placement,
    #[serde(default)]
    pub summary_mode: Option<SummaryMode>,
}

impl ExperimentPlan {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let plan: ExperimentPlan =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Checks everything that can be checked before running a trial.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.n_values.is_empty() {
            return Err(Error::Config("n_values is empty".into()));
        }
        if self.thresholds.is_empty() {
            return Err(Error::Config("at least one threshold rule is required".into()));
        }
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(Error::Config(format!("eta must be positive, got {}", self.eta)));
        }
        self.p.validate()?;
        self.q.validate()?;
        let kernel = self.kernel.build()?;
        self.i_min.validate()?;
        for &n in &self.n_values {
            if n < 2 {
                return Err(Error::Config(format!("network size {n} is below 2")));
            }
            for rule in &self.thresholds {
                let t = rule.resolve(n)?;
                self.i_min.points(n, t, kernel.bound())?;
            }
        }
        Ok(())
    }
}
