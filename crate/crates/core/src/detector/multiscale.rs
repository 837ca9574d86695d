//! Multiscale detection over dyadic cells and their extensions.
//!
//! 1. Pre-scan every dyadic cell with `|I| >= ceil(i_min / 4)` and keep those
//!    whose statistic reaches `t'`.
//! 2. H1 if more than `n^{1 - t'²(1+η)/(4t²) + δ}` cells were kept.
//! 3. H1 if a kept cell exceeds `2t / sqrt(1 + η/2)`.
//! 4. Extend (l levels) every kept cell longer than `16K²(1+η/2) ln n / t²`.
//! 5. H1 if any extension exceeds `t`; otherwise H0.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{Algorithm, Best, Decision, ScanOutcome, TestConfig, Trigger};
use crate::error::Result;
use crate::intervals::{DyadicGrid, ExtensionShapes, Interval};
use crate::kernels::Kernel;
use crate::mmd::{GramSummaries, SampleSeries};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiscaleDiagnostics {
    pub t_prime: f64,
    pub delta_alg: f64,
    pub levels: u32,
    /// Dyadic cells evaluated in the pre-scan.
    pub prescan_evaluated: usize,
    /// Cells whose statistic reached `t'`.
    pub prescan_kept: usize,
    pub cardinality_limit: f64,
    pub prescan_max: Option<f64>,
    pub prescan_threshold: f64,
    pub extension_length_floor: f64,
    /// Kept cells long enough to be extended.
    pub extension_bases: usize,
    /// Distinct extension members, including the bases themselves.
    pub extension_members: usize,
    pub extension_max: Option<f64>,
}

pub fn scan_multiscale(
    series: &SampleSeries,
    kernel: &Kernel,
    config: &TestConfig,
) -> Result<ScanOutcome> {
    config.resolve(series.len())?;
    let summaries = GramSummaries::build(series, kernel, config.summary_options(series.len()))?;
    scan_multiscale_with(&summaries, config)
}

pub fn scan_multiscale_with(summaries: &GramSummaries, config: &TestConfig) -> Result<ScanOutcome> {
    let n = summaries.n();
    let cfg = config.with_algorithm(Algorithm::Multiscale).resolve(n)?;
    let bound = summaries.kernel().bound();
    let ln_n = (n as f64).ln();
    let t = cfg.t;

    let grid = DyadicGrid::new(n)?;
    let min_len = cfg.i_min.div_ceil(4).max(2);
    let prescan: Vec<Interval> = grid.intervals().filter(|i| i.len() >= min_len).collect();
    let prescan_values = summaries.statistics(&prescan)?;

    let mut best = Best::empty();
    for (interval, &value) in prescan.iter().zip(&prescan_values) {
        best.offer(*interval, value);
    }

    let kept: Vec<(Interval, f64)> = prescan
        .iter()
        .zip(&prescan_values)
        .filter(|(_, &v)| v >= cfg.t_prime)
        .map(|(&i, &v)| (i, v))
        .collect();
    let exponent = 1.0 - cfg.t_prime * cfg.t_prime / (4.0 * t * t) * (1.0 + cfg.eta) + cfg.delta_alg;
    let cardinality_limit = (n as f64).powf(exponent);
    let prescan_max = kept.iter().map(|&(_, v)| v).reduce(f64::max);
    let prescan_threshold = 2.0 * t / (1.0 + cfg.eta / 2.0).sqrt();
    let extension_length_floor = 16.0 * bound * bound * (1.0 + cfg.eta / 2.0) * ln_n / (t * t);

    let mut diagnostics = MultiscaleDiagnostics {
        t_prime: cfg.t_prime,
        delta_alg: cfg.delta_alg,
        levels: cfg.levels,
        prescan_evaluated: prescan.len(),
        prescan_kept: kept.len(),
        cardinality_limit,
        prescan_max,
        prescan_threshold,
        extension_length_floor,
        extension_bases: 0,
        extension_members: 0,
        extension_max: None,
    };
    let mut evaluations = prescan.len();

    let finish = |trigger: Trigger, best: Best, evaluations: usize, diagnostics| ScanOutcome {
        decision: if trigger == Trigger::None {
            Decision::H0
        } else {
            Decision::H1
        },
        best_interval: best.interval,
        best_statistic: best.value,
        evaluations,
        trigger,
        algorithm: Algorithm::Multiscale,
        threshold: t,
        n,
        i_min: cfg.i_min,
        multiscale: Some(diagnostics),
    };

    if kept.len() as f64 > cardinality_limit {
        return Ok(finish(Trigger::Cardinality, best, evaluations, diagnostics));
    }
    if prescan_max.is_some_and(|m| m > prescan_threshold) {
        return Ok(finish(Trigger::PrescanMax, best, evaluations, diagnostics));
    }

    let bases: Vec<&(Interval, f64)> = kept
        .iter()
        .filter(|(i, _)| i.len() as f64 > extension_length_floor)
        .collect();
    diagnostics.extension_bases = bases.len();

    let mut shapes = ExtensionShapes::new(cfg.levels);
    let mut members: HashSet<Interval> = HashSet::new();
    for (base, _) in &bases {
        let cell = grid
            .cell_of(base)
            .expect("pre-scan intervals are grid cells");
        members.extend(shapes.family(&cell, &grid).intervals());
    }
    diagnostics.extension_members = members.len();

    let evaluated: HashSet<Interval> = prescan.iter().copied().collect();
    let mut fresh: Vec<Interval> = members
        .iter()
        .filter(|i| !evaluated.contains(i) && i.len() >= 2)
        .copied()
        .collect();
    fresh.sort_unstable();
    let fresh_values = summaries.statistics(&fresh)?;
    evaluations += fresh.len();

    let mut extension_best = Best::empty();
    for (interval, &value) in fresh.iter().zip(&fresh_values) {
        extension_best.offer(*interval, value);
    }
    for (interval, value) in prescan.iter().zip(&prescan_values) {
        if members.contains(interval) {
            extension_best.offer(*interval, *value);
        }
    }
    diagnostics.extension_max = extension_best.interval.map(|_| extension_best.value);
    best = best.merge(extension_best);

    let trigger = if diagnostics.extension_max.is_some_and(|m| m > t) {
        Trigger::ExtensionMax
    } else {
        Trigger::None
    };
    Ok(finish(trigger, best, evaluations, diagnostics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::{scan_exhaustive, ThresholdRule};
    use crate::intervals::candidate_count;

    fn config(i_min: usize, t: f64) -> TestConfig {
        TestConfig::new(i_min, ThresholdRule::Fixed { t }).with_algorithm(Algorithm::Multiscale)
    }

    #[test]
    fn constant_data_is_null() {
        let series = SampleSeries::new(vec![0.5; 64], vec![0.5; 64]).unwrap();
        let k = Kernel::gaussian(1.0).unwrap();
        let out = scan_multiscale(&series, &k, &config(8, 0.25)).unwrap();
        assert_eq!(out.decision, Decision::H0);
        assert_eq!(out.trigger, Trigger::None);
        let d = out.multiscale.unwrap();
        assert_eq!(d.prescan_kept, 0);
        // cells of length >= 2 on n = 64: 32 + 16 + 8 + 4 + 2 + 1
        assert_eq!(d.prescan_evaluated, 63);
        assert_eq!(out.evaluations, 63);
    }

    #[test]
    fn obvious_anomaly_triggers_prescan() {
        let n = 64;
        let x: Vec<f64> = (0..n).map(|i| ((i * 37) % 17) as f64 / 17.0 - 0.5).collect();
        let mut y: Vec<f64> = (0..n).map(|i| ((i * 11) % 13) as f64 / 13.0 - 0.5).collect();
        for v in &mut y[16..48] {
            *v += 6.0;
        }
        let series = SampleSeries::new(x, y).unwrap();
        let k = Kernel::gaussian(1.0).unwrap();
        let out = scan_multiscale(&series, &k, &config(16, 0.25)).unwrap();
        assert_eq!(out.decision, Decision::H1);
        assert_eq!(out.trigger, Trigger::PrescanMax);
        let best = out.best_interval.unwrap();
        assert!(best.overlaps(&Interval::new(16, 32)));
        assert!(out.evaluations < candidate_count(n, 16));
    }

    #[test]
    fn extension_step_runs_when_prescan_is_inconclusive() {
        // Choose t so that the extension floor is below n and the pre-scan
        // threshold is out of reach: t = 1.9 gives 2t/sqrt(1.25) > 2K.
        let n = 256;
        let x: Vec<f64> = (0..n).map(|i| ((i * 37) % 17) as f64 / 17.0).collect();
        let mut y = x.clone();
        y.rotate_left(5);
        for v in &mut y[64..192] {
            *v += 8.0;
        }
        let series = SampleSeries::new(x, y).unwrap();
        let k = Kernel::gaussian(1.0).unwrap();
        let out = scan_multiscale(&series, &k, &config(32, 1.9)).unwrap();
        let d = out.multiscale.clone().unwrap();
        assert!(d.extension_length_floor < 64.0);
        assert!(d.extension_bases > 0);
        assert!(d.extension_members >= d.extension_bases);
        assert!(out.evaluations > d.prescan_evaluated);
        // Every evaluated interval has length >= ceil(32 / 4).
        let exhaustive =
            scan_exhaustive(&series, &k, &TestConfig::new(8, ThresholdRule::Fixed { t: 1.9 }))
                .unwrap();
        assert!(out.best_statistic <= exhaustive.best_statistic + 1e-12);
    }

    #[test]
    fn statistics_only_on_real_intervals() {
        let n = 100;
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.77).sin()).collect();
        let y: Vec<f64> = (0..n).map(|i| (i as f64 * 1.31).cos() * 1.5).collect();
        let series = SampleSeries::new(x, y).unwrap();
        let k = Kernel::gaussian(1.0).unwrap();
        let out = scan_multiscale(&series, &k, &config(10, 0.05)).unwrap();
        if let Some(best) = out.best_interval {
            assert!(best.end() <= n && best.len() >= 2);
        }
    }
}
