use rayon::prelude::*;

use super::{Algorithm, Best, Decision, ScanOutcome, TestConfig, Trigger};
use crate::error::Result;
use crate::intervals::{candidate_count, Interval};
use crate::kernels::Kernel;
use crate::mmd::{GramSummaries, SampleSeries, SummaryMode};

/// Max-over-all-candidates test: H1 iff `max_{|I| >= i_min} mmd²_{u,I} >= t`.
pub fn scan_exhaustive(
    series: &SampleSeries,
    kernel: &Kernel,
    config: &TestConfig,
) -> Result<ScanOutcome> {
    config.resolve(series.len())?;
    let summaries = GramSummaries::build(series, kernel, config.summary_options(series.len()))?;
    scan_exhaustive_with(&summaries, config)
}

pub fn scan_exhaustive_with(summaries: &GramSummaries, config: &TestConfig) -> Result<ScanOutcome> {
    let n = summaries.n();
    let resolved = config.resolve(n)?;
    let i_min = resolved.i_min;

    let best = match summaries.mode() {
        SummaryMode::Dense => (i_min..=n)
            .into_par_iter()
            .map(|len| {
                let mut best = Best::empty();
                for start in 0..=n - len {
                    let interval = Interval::new(start, len);
                    let value = summaries.interval_statistic(&interval)?;
                    best.offer(interval, value);
                }
                Ok(best)
            })
            .collect::<Result<Vec<Best>>>()?
            .into_iter()
            .fold(Best::empty(), Best::merge),
        SummaryMode::Streaming => {
            let candidates: Vec<Interval> = crate::intervals::candidate_intervals(n, i_min)?.collect();
            let values = summaries.statistics(&candidates)?;
            let mut best = Best::empty();
            for (interval, value) in candidates.into_iter().zip(values) {
                best.offer(interval, value);
            }
            best
        }
    };

    let alarm = best.value >= resolved.t;
    Ok(ScanOutcome {
        decision: if alarm { Decision::H1 } else { Decision::H0 },
        best_interval: best.interval,
        best_statistic: best.value,
        evaluations: candidate_count(n, i_min),
        trigger: if alarm {
            Trigger::ExhaustiveMax
        } else {
            Trigger::None
        },
        algorithm: Algorithm::Exhaustive,
        threshold: resolved.t,
        n,
        i_min,
        multiscale: None,
    })
}
