//! The max-over-intervals scan test and its multiscale approximation.
//!
//! [`scan_exhaustive`] evaluates the per-interval statistic on every interval
//! of length at least `i_min` and declares H1 when the maximum reaches `t`.
//! [`scan_multiscale`] only evaluates dyadic cells and l-level extensions of
//! the promising ones, which touches far fewer intervals.

mod exhaustive;
mod multiscale;
mod thresholds;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::Interval;
use crate::kernels::Kernel;
use crate::mmd::{GramSummaries, SampleSeries, SummaryOptions};

pub use exhaustive::{scan_exhaustive, scan_exhaustive_with};
pub use multiscale::{scan_multiscale, scan_multiscale_with, MultiscaleDiagnostics};
pub use thresholds::{default_levels, i_min_bound, threshold_decaying, threshold_known};

/// How the test threshold `t` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ThresholdRule {
    /// A fixed `t > 0`.
    Fixed { t: f64 },
    /// `t = (1 - δ) MMD²` with MMD² known in advance.
    KnownMmd { mmd2: f64, delta: f64 },
    /// `t_n = 4 sqrt(ln n / n^0.9)`.
    Decaying,
}

impl ThresholdRule {
    /// The threshold for a network of `n` nodes.
    pub fn resolve(&self, n: usize) -> Result<f64> {
        let t = match *self {
            ThresholdRule::Fixed { t } => t,
            ThresholdRule::KnownMmd { mmd2, delta } => threshold_known(mmd2, delta)?,
            ThresholdRule::Decaying => threshold_decaying(n),
        };
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::invalid(format!(
                "threshold must be finite and positive, got {t}"
            )));
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Exhaustive,
    Multiscale,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Algorithm::Exhaustive),
            "multiscale" => Ok(Algorithm::Multiscale),
            other => Err(Error::invalid(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// Optional overrides for the multiscale algorithm.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MultiscaleParams {
    /// Pre-scan threshold `t' < t`; defaults to `t / 2`.
    pub t_prime: Option<f64>,
    /// Cardinality slack `δ > η / 2`; defaults to `η`.
    pub delta_alg: Option<f64>,
    /// Extension depth `l >= 1`; defaults to `ceil(log2((1+η)/η) + 2)`.
    pub levels: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestConfig {
    pub i_min: usize,
    pub threshold: ThresholdRule,
    pub eta: f64,
    pub algorithm: Algorithm,
    #[serde(default)]
    pub multiscale: MultiscaleParams,
    /// Summary layout; `None` picks dense when it fits.
    #[serde(default)]
    pub summaries: Option<SummaryOptions>,
}

impl TestConfig {
    pub fn new(i_min: usize, threshold: ThresholdRule) -> Self {
        Self {
            i_min,
            threshold,
            eta: 0.5,
            algorithm: Algorithm::Exhaustive,
            multiscale: MultiscaleParams::default(),
            summaries: None,
        }
    }

    pub fn with_algorithm(mut self, algorithm: Algorithm) -> Self {
        self.algorithm = algorithm;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_multiscale(mut self, params: MultiscaleParams) -> Self {
        self.multiscale = params;
        self
    }

    pub fn with_summaries(mut self, options: SummaryOptions) -> Self {
        self.summaries = Some(options);
        self
    }

    pub fn summary_options(&self, n: usize) -> SummaryOptions {
        self.summaries.unwrap_or_else(|| SummaryOptions::auto(n))
    }

    /// Checks the configuration against a network of `n` nodes and fills in
    /// defaults.
    pub fn resolve(&self, n: usize) -> Result<ResolvedConfig> {
        if self.i_min < 2 {
            return Err(Error::invalid(format!(
                "i_min must be at least 2, got {}",
                self.i_min
            )));
        }
        if self.i_min > n {
            return Err(Error::invalid(format!(
                "i_min = {} exceeds the network size {n}",
                self.i_min
            )));
        }
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(Error::invalid(format!(
                "eta must be finite and positive, got {}",
                self.eta
            )));
        }
        let t = self.threshold.resolve(n)?;
        let t_prime = self.multiscale.t_prime.unwrap_or(t / 2.0);
        let delta_alg = self.multiscale.delta_alg.unwrap_or(self.eta);
        let levels = self
            .multiscale
            .levels
            .unwrap_or_else(|| default_levels(self.eta));
        if self.algorithm == Algorithm::Multiscale {
            if !(t_prime > 0.0 && t_prime < t) {
                return Err(Error::invalid(format!(
                    "t' must lie in (0, t) = (0, {t}), got {t_prime}"
                )));
            }
            if !(delta_alg.is_finite() && delta_alg > self.eta / 2.0) {
                return Err(Error::invalid(format!(
                    "delta_alg must exceed eta / 2 = {}, got {delta_alg}",
                    self.eta / 2.0
                )));
            }
            if levels < 1 {
                return Err(Error::invalid("extension depth l must be at least 1"));
            }
        }
        Ok(ResolvedConfig {
            n,
            i_min: self.i_min,
            t,
            eta: self.eta,
            t_prime,
            delta_alg,
            levels,
        })
    }
}

/// A [`TestConfig`] with every parameter made concrete for one network size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolvedConfig {
    pub n: usize,
    pub i_min: usize,
    pub t: f64,
    pub eta: f64,
    pub t_prime: f64,
    pub delta_alg: f64,
    pub levels: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Decision {
    H0,
    H1,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::H0 => f.write_str("H0"),
            Decision::H1 => f.write_str("H1"),
        }
    }
}

/// Which rule raised the alarm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trigger {
    Cardinality,
    PrescanMax,
    ExtensionMax,
    ExhaustiveMax,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub decision: Decision,
    /// Argmax over the evaluated intervals, ties broken by shorter then
    /// leftmost. A diagnostic only: the test detects, it does not localize.
    pub best_interval: Option<Interval>,
    pub best_statistic: f64,
    pub evaluations: usize,
    pub trigger: Trigger,
    pub algorithm: Algorithm,
    pub threshold: f64,
    pub n: usize,
    pub i_min: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiscale: Option<MultiscaleDiagnostics>,
}

impl ScanOutcome {
    pub fn is_alarm(&self) -> bool {
        self.decision == Decision::H1
    }
}

/// Runs the algorithm selected in `config`.
pub fn scan(series: &SampleSeries, kernel: &Kernel, config: &TestConfig) -> Result<ScanOutcome> {
    match config.algorithm {
        Algorithm::Exhaustive => scan_exhaustive(series, kernel, config),
        Algorithm::Multiscale => scan_multiscale(series, kernel, config),
    }
}

/// Runs the algorithm selected in `config` on prebuilt summaries.
pub fn scan_with(summaries: &GramSummaries, config: &TestConfig) -> Result<ScanOutcome> {
    match config.algorithm {
        Algorithm::Exhaustive => scan_exhaustive_with(summaries, config),
        Algorithm::Multiscale => scan_multiscale_with(summaries, config),
    }
}

/// Running argmax with the report tie-break.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Best {
    pub value: f64,
    pub interval: Option<Interval>,
}

impl Best {
    pub fn empty() -> Self {
        Self {
            value: f64::NEG_INFINITY,
            interval: None,
        }
    }

    pub fn offer(&mut self, interval: Interval, value: f64) {
        let better = match self.interval {
            None => true,
            Some(cur) => {
                value > self.value
                    || (value == self.value && interval.report_key() < cur.report_key())
            }
        };
        if better {
            self.value = value;
            self.interval = Some(interval);
        }
    }

    pub fn merge(mut self, other: Best) -> Best {
        if let Some(i) = other.interval {
            self.offer(i, other.value);
        }
        self
    }
}
