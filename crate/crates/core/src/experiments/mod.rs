//! Monte Carlo estimation of detection error rates on synthetic networks.
//!
//! Each configuration `(n, I_min, t)` runs `trials` null instances and
//! `trials` planted instances, and reports
//! `P_e = (P(H1 | H0) + P(H0 | H1)) / 2` with its binomial standard error.
//! Every trial draws from its own generator seeded by
//! `(plan seed, configuration index, trial index, hypothesis)`, so results do
//! not depend on how trials are scheduled across threads.

mod distributions;
mod plan;

use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use distributions::{plant_instance, population_mmd2, sample, Component, DistributionSpec};
pub use plan::{ExperimentPlan, IMinPoint, IMinRule, KernelSpec, Placement};

use crate::detector::{scan_with, Decision, TestConfig};
use crate::error::Result;
use crate::intervals::Interval;
use crate::mmd::{GramSummaries, SummaryOptions};

/// Error rates for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub n: usize,
    pub i_min: usize,
    pub t: f64,
    /// Sweep coordinate, `I_min / ln n` unless the plan gave a ratio.
    pub i_min_ratio: f64,
    pub p_e: f64,
    pub p_h0_error: f64,
    pub p_h1_error: f64,
    pub std_error: f64,
    /// Trials per hypothesis that completed.
    pub trials: usize,
    /// Trials per hypothesis that returned an error and were left out.
    pub failures: usize,
}

impl ErrorEstimate {
    /// Builds the estimate from raw error counts.
    #[allow(clippy::too_many_arguments)]
    pub fn from_counts(
        n: usize,
        i_min: usize,
        t: f64,
        i_min_ratio: f64,
        h0_errors: usize,
        h1_errors: usize,
        trials: usize,
        failures: usize,
    ) -> Self {
        let (p0, p1) = if trials == 0 {
            (f64::NAN, f64::NAN)
        } else {
            (
                h0_errors as f64 / trials as f64,
                h1_errors as f64 / trials as f64,
            )
        };
        let tf = trials as f64;
        let std_error = 0.5 * (p0 * (1.0 - p0) / tf + p1 * (1.0 - p1) / tf).sqrt();
        Self {
            n,
            i_min,
            t,
            i_min_ratio,
            p_e: 0.5 * (p0 + p1),
            p_h0_error: p0,
            p_h1_error: p1,
            std_error,
            trials,
            failures,
        }
    }
}

/// The CSV row layout.
#[derive(Debug, Serialize)]
struct CsvRow {
    n: usize,
    i_min: usize,
    t: f64,
    p_e: f64,
    p_h0_err: f64,
    p_h1_err: f64,
    std_err: f64,
    trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorTable {
    pub name: Option<String>,
    pub seed: u64,
    pub rows: Vec<ErrorEstimate>,
}

impl ErrorTable {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for r in &self.rows {
            w.serialize(CsvRow {
                n: r.n,
                i_min: r.i_min,
                t: r.t,
                p_e: r.p_e,
                p_h0_err: r.p_h0_error,
                p_h1_err: r.p_h1_error,
                std_err: r.std_error,
                trials: r.trials,
            })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Rows for one `(n, t)` curve, in sweep order.
    pub fn curve(&self, n: usize, t: f64) -> Vec<&ErrorEstimate> {
        self.rows.iter().filter(|r| r.n == n && r.t == t).collect()
    }

    /// Writes the CSV atomically: the file appears only once complete.
    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::io::write_atomic(path.as_ref(), self.to_csv_string()?.as_bytes())
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::io::write_atomic(path.as_ref(), self.to_json_string()?.as_bytes())
    }
}

/// First sweep coordinate at which `P_e` drops below `level`.
pub fn crossing_point(curve: &[&ErrorEstimate], level: f64) -> Option<f64> {
    curve.iter().find(|r| r.p_e < level).map(|r| r.i_min_ratio)
}

/// Mixes seed components into one 64-bit seed (SplitMix64 finalizer).
pub fn derive_seed(parts: &[u64]) -> u64 {
    let mut state = 0x9E37_79B9_7F4A_7C15u64;
    for &p in parts {
        state ^= p;
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        state = z ^ (z >> 31);
    }
    state
}

/// One `(n, I_min, t)` cell of a plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanConfig {
    pub index: usize,
    pub n: usize,
    pub i_min: usize,
    pub ratio: f64,
    pub t: f64,
    pub test: TestConfig,
}

impl ExperimentPlan {
    /// Expands the plan into configurations, ordered by n, then sweep point,
    /// then threshold.
    pub fn configurations(&self) -> Result<Vec<PlanConfig>> {
        self.validate()?;
        let kernel = self.kernel.build()?;
        let mut out = Vec::new();
        for &n in &self.n_values {
            for rule in &self.thresholds {
                let t = rule.resolve(n)?;
                let points = self.i_min.points(n, t, kernel.bound())?;
                for point in points {
                    let mut test = TestConfig::new(point.i_min, *rule)
                        .with_algorithm(self.algorithm)
                        .with_eta(self.eta)
                        .with_multiscale(self.multiscale);
                    if let Some(mode) = self.summary_mode {
                        test = test.with_summaries(SummaryOptions::from(mode));
                    }
                    out.push(PlanConfig {
                        index: 0,
                        n,
                        i_min: point.i_min,
                        ratio: point.ratio,
                        t,
                        test,
                    });
                }
            }
        }
        out.sort_by(|a, b| {
            a.n.cmp(&b.n)
                .then(a.ratio.total_cmp(&b.ratio))
                .then(a.t.total_cmp(&b.t))
        });
        for (i, c) in out.iter_mut().enumerate() {
            c.index = i;
        }
        Ok(out)
    }

    fn anomaly(&self, n: usize, length: usize, rng: &mut ChaCha8Rng) -> Interval {
        let last = n - length;
        let start = match self.placement {
            Placement::Uniform => rng.random_range(0..=last),
            Placement::Fixed { start } => start.min(last),
        };
        Interval::new(start, length)
    }

    /// Runs one trial of one hypothesis; `Ok(true)` when the decision was an
    /// error.
    pub fn run_trial(&self, config: &PlanConfig, trial: usize, planted: bool) -> Result<bool> {
        let kernel = self.kernel.build()?;
        let seed = derive_seed(&[
            self.seed.unwrap_or_default(),
            config.index as u64,
            trial as u64,
            planted as u64,
        ]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let anomaly = planted.then(|| self.anomaly(config.n, config.i_min, &mut rng));
        let series = plant_instance(&self.p, &self.q, config.n, anomaly, rng.random())?;
        let summaries =
            GramSummaries::build(&series, &kernel, config.test.summary_options(config.n))?;
        let outcome = scan_with(&summaries, &config.test)?;
        let expected = if planted { Decision::H1 } else { Decision::H0 };
        Ok(outcome.decision != expected)
    }

    /// Estimates error rates for one configuration.
    pub fn run_config(&self, config: &PlanConfig) -> ErrorEstimate {
        let results: Vec<(Result<bool>, Result<bool>)> = (0..self.trials)
            .into_par_iter()
            .map(|trial| {
                (
                    self.run_trial(config, trial, false),
                    self.run_trial(config, trial, true),
                )
            })
            .collect();
        let mut h0_errors = 0;
        let mut h1_errors = 0;
        let mut failures = 0;
        for (h0, h1) in results {
            match (h0, h1) {
                (Ok(e0), Ok(e1)) => {
                    h0_errors += e0 as usize;
                    h1_errors += e1 as usize;
                }
                (a, b) => {
                    for e in [a.err(), b.err()].into_iter().flatten() {
                        log::warn!("n = {}, i_min = {}: trial failed: {e}", config.n, config.i_min);
                    }
                    failures += 1;
                }
            }
        }
        ErrorEstimate::from_counts(
            config.n,
            config.i_min,
            config.t,
            config.ratio,
            h0_errors,
            h1_errors,
            self.trials - failures,
            failures,
        )
    }
}

/// Runs every configuration of `plan`.
pub fn run_plan(plan: &ExperimentPlan) -> Result<ErrorTable> {
    let seed = plan.seed.unwrap_or_else(rand::random);
    let plan = &ExperimentPlan {
        seed: Some(seed),
        ..plan.clone()
    };
    let configs = plan.configurations()?;
    let mut rows = Vec::with_capacity(configs.len());
    for config in &configs {
        let row = plan.run_config(config);
        log::info!(
            "n = {:>5}  i_min = {:>5}  t = {:.4}  P_e = {:.4} (H0 {:.3}, H1 {:.3})",
            row.n,
            row.i_min,
            row.t,
            row.p_e,
            row.p_h0_error,
            row.p_h1_error
        );
        rows.push(row);
    }
    Ok(ErrorTable {
        name: plan.name.clone(),
        seed,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::ThresholdRule;
    use crate::kernels::KernelKind;

    fn small_plan() -> ExperimentPlan {
        ExperimentPlan {
            name: Some("unit".into()),
            p: DistributionSpec::gaussian(0.0, 0.5),
            q: DistributionSpec::symmetric_gaussian_pair(2.0, 0.5),
            kernel: KernelSpec {
                kind: KernelKind::Gaussian,
                sigma: 1.0,
            },
            n_values: vec![30],
            i_min: IMinRule::Values {
                values: vec![4, 12],
            },
            thresholds: vec![ThresholdRule::Fixed { t: 0.25 }],
            trials: 16,
            seed: Some(11),
            eta: 0.5,
            algorithm: crate::detector::Algorithm::Exhaustive,
            multiscale: Default::default(),
            placement: Placement::Uniform,
            summary_mode: None,
        }
    }

    #[test]
    fn error_estimate_identity() {
        let e = ErrorEstimate::from_counts(10, 4, 0.1, 1.0, 3, 7, 20, 0);
        assert!((e.p_e - 0.5 * (e.p_h0_error + e.p_h1_error)).abs() <= 1e-12);
        assert!((e.p_h0_error - 0.15).abs() < 1e-15);
        let se = 0.5 * ((0.15 * 0.85 + 0.35 * 0.65) / 20.0f64).sqrt();
        assert!((e.std_error - se).abs() < 1e-15);
    }

    #[test]
    fn derived_seeds_differ() {
        let a = derive_seed(&[1, 0, 0, 0]);
        let b = derive_seed(&[1, 0, 1, 0]);
        let c = derive_seed(&[1, 1, 0, 0]);
        let d = derive_seed(&[1, 0, 0, 1]);
        assert!(a != b && a != c && a != d && b != c && c != d);
        assert_eq!(a, derive_seed(&[1, 0, 0, 0]));
    }

    #[test]
    fn plan_is_reproducible() {
        let plan = small_plan();
        let a = run_plan(&plan).unwrap();
        let b = run_plan(&plan).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 2);
        for r in &a.rows {
            assert_eq!(r.trials, 16);
            assert_eq!(r.failures, 0);
            assert!((r.p_e - 0.5 * (r.p_h0_error + r.p_h1_error)).abs() <= 1e-12);
        }
        let csv = a.to_csv_string().unwrap();
        assert!(csv.starts_with("n,i_min,t,p_e,p_h0_err,p_h1_err,std_err,trials\n"));
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn anomaly_placement() {
        let mut plan = small_plan();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            let a = plan.anomaly(30, 12, &mut rng);
            assert!(a.end() <= 30 && a.len() == 12);
        }
        plan.placement = Placement::Fixed { start: 25 };
        assert_eq!(plan.anomaly(30, 12, &mut rng), Interval::new(18, 12));
    }

    #[test]
    fn configurations_are_indexed_in_order() {
        let mut plan = small_plan();
        plan.n_values = vec![30, 50];
        plan.thresholds = vec![ThresholdRule::Fixed { t: 0.3 }, ThresholdRule::Fixed { t: 0.1 }];
        let configs = plan.configurations().unwrap();
        assert_eq!(configs.len(), 8);
        for (i, c) in configs.iter().enumerate() {
            assert_eq!(c.index, i);
        }
        assert_eq!((configs[0].n, configs[0].i_min, configs[0].t), (30, 4, 0.1));
        assert_eq!((configs[1].n, configs[1].i_min, configs[1].t), (30, 4, 0.3));
    }

    #[test]
    fn crossing_point_finds_first_drop() {
        let rows: Vec<ErrorEstimate> = [0.5, 0.3, 0.08, 0.12, 0.0]
            .iter()
            .enumerate()
            .map(|(i, &p)| ErrorEstimate {
                n: 10,
                i_min: i + 2,
                t: 0.1,
                i_min_ratio: i as f64,
                p_e: p,
                p_h0_error: p,
                p_h1_error: p,
                std_error: 0.0,
                trials: 1,
                failures: 0,
            })
            .collect();
        let curve: Vec<&ErrorEstimate> = rows.iter().collect();
        assert_eq!(crossing_point(&curve, 0.1), Some(2.0));
        assert_eq!(crossing_point(&curve, 0.0), None);
    }
}
