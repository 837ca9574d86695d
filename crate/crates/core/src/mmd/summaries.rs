//! Precomputed kernel aggregates for fast per-interval statistics.
//!
//! * `reference_pair_sum = Σ_{i≠j} k(x_i, x_j)`, computed once.
//! * `cross_prefix[b] = Σ_{j<b} c_j` with `c_j = Σ_i k(x_i, y_j)`.
//! * Observed pairs, either as a dense `(n+1)×(n+1)` table
//!   `P[a][b] = Σ_{i<a, j<b} k(y_i, y_j)` (O(1) per interval) or, in streaming
//!   mode, recomputed on demand with [`IntervalAccumulator`] (O(|I|) per
//!   one-node growth, O(n) memory).
//!
//! All reductions use a fixed order, so results do not depend on the number
//! of worker threads.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SampleSeries;
use crate::error::{Error, Result};
use crate::intervals::Interval;
use crate::kernels::Kernel;
use crate::numeric::NeumaierSum;

/// Largest `n` accepted for dense summaries unless overridden.
pub const DEFAULT_DENSE_LIMIT: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SummaryMode {
    Dense,
    Streaming,
}

impl std::str::FromStr for SummaryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(SummaryMode::Dense),
            "streaming" => Ok(SummaryMode::Streaming),
            other => Err(Error::invalid(format!("unknown summary mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryOptions {
    pub mode: SummaryMode,
    pub dense_limit: usize,
}

impl SummaryOptions {
    pub fn dense() -> Self {
        Self {
            mode: SummaryMode::Dense,
            dense_limit: DEFAULT_DENSE_LIMIT,
        }
    }

    pub fn streaming() -> Self {
        Self {
            mode: SummaryMode::Streaming,
            dense_limit: DEFAULT_DENSE_LIMIT,
        }
    }

    /// Dense when `n` fits under the limit, streaming otherwise.
    pub fn auto(n: usize) -> Self {
        if n <= DEFAULT_DENSE_LIMIT {
            Self::dense()
        } else {
            Self::streaming()
        }
    }
}

impl From<SummaryMode> for SummaryOptions {
    fn from(mode: SummaryMode) -> Self {
        Self {
            mode,
            dense_limit: DEFAULT_DENSE_LIMIT,
        }
    }
}

#[derive(Debug, Clone)]
enum ObservedPairs {
    Dense { table: Vec<f64> },
    Streaming,
}

/// Kernel aggregates for one [`SampleSeries`]; immutable after build.
#[derive(Debug, Clone)]
pub struct GramSummaries {
    n: usize,
    kernel: Kernel,
    observed: Vec<f64>,
    reference_pair_sum: f64,
    reference_term: f64,
    cross_prefix: Vec<f64>,
    pairs: ObservedPairs,
}

/// Builds summaries for `series` under `kernel`.
pub fn build_summaries(
    series: &SampleSeries,
    kernel: &Kernel,
    options: impl Into<SummaryOptions>,
) -> Result<GramSummaries> {
    GramSummaries::build(series, kernel, options.into())
}

impl GramSummaries {
    pub fn build(series: &SampleSeries, kernel: &Kernel, options: SummaryOptions) -> Result<Self> {
        let n = series.len();
        if options.mode == SummaryMode::Dense && n > options.dense_limit {
            return Err(Error::Capacity {
                n,
                limit: options.dense_limit,
            });
        }
        let x = series.reference();
        let y = series.observed();

        let reference_pair_sum = super::off_diagonal_sum(x, kernel);
        let nf = n as f64;

        let columns: Vec<NeumaierSum> = y
            .par_iter()
            .map(|&yj| x.iter().map(|&xi| kernel.value(xi, yj)).sum::<NeumaierSum>())
            .collect();
        let mut cross_prefix = Vec::with_capacity(n + 1);
        cross_prefix.push(0.0);
        let mut running = NeumaierSum::new();
        for c in &columns {
            running.merge(c);
            cross_prefix.push(running.value());
        }

        let pairs = match options.mode {
            SummaryMode::Dense => ObservedPairs::Dense {
                table: dense_prefix_table(y, kernel),
            },
            SummaryMode::Streaming => ObservedPairs::Streaming,
        };

        Ok(Self {
            n,
            kernel: *kernel,
            observed: y.to_vec(),
            reference_pair_sum,
            reference_term: reference_pair_sum / (nf * (nf - 1.0)),
            cross_prefix,
            pairs,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn mode(&self) -> SummaryMode {
        match self.pairs {
            ObservedPairs::Dense { .. } => SummaryMode::Dense,
            ObservedPairs::Streaming => SummaryMode::Streaming,
        }
    }

    /// `Σ_{i≠j} k(x_i, x_j)` over the full reference sequence.
    pub fn reference_pair_sum(&self) -> f64 {
        self.reference_pair_sum
    }

    /// Prefix sums of the cross-kernel column sums, length `n + 1`.
    pub fn cross_prefix(&self) -> &[f64] {
        &self.cross_prefix
    }

    /// Entry `P[a][b]` of the dense observed prefix table, if built.
    pub fn prefix_entry(&self, a: usize, b: usize) -> Option<f64> {
        match &self.pairs {
            ObservedPairs::Dense { table } if a <= self.n && b <= self.n => {
                Some(table[a * (self.n + 1) + b])
            }
            _ => None,
        }
    }

    /// `Σ_i Σ_{j∈I} k(x_i, y_j)`.
    pub fn cross_sum(&self, interval: &Interval) -> f64 {
        self.cross_prefix[interval.end()] - self.cross_prefix[interval.start()]
    }

    /// `Σ_{i,j∈I, i≠j} k(y_i, y_j)`.
    pub fn observed_pair_sum(&self, interval: &Interval) -> f64 {
        match &self.pairs {
            ObservedPairs::Dense { table } => {
                let w = self.n + 1;
                let (s, e) = (interval.start(), interval.end());
                let full = table[e * w + e] - 2.0 * table[s * w + e] + table[s * w + s];
                full - interval.len() as f64 * self.kernel.bound()
            }
            ObservedPairs::Streaming => {
                let mut acc = self.accumulator(interval.start());
                while acc.end() < interval.end() {
                    acc.grow_right();
                }
                acc.pair_sum()
            }
        }
    }

    fn check(&self, interval: &Interval) -> Result<()> {
        interval.check_within(self.n)?;
        if interval.len() < 2 {
            return Err(Error::InsufficientSamples {
                needed: 2,
                got: interval.len(),
            });
        }
        Ok(())
    }

    fn combine(&self, interval: &Interval, pair_sum: f64) -> f64 {
        let len = interval.len() as f64;
        let observed_term = pair_sum / (len * (len - 1.0));
        let cross_term = 2.0 * self.cross_sum(interval) / (self.n as f64 * len);
        self.reference_term + observed_term - cross_term
    }

    /// The per-interval statistic `mmd²_{u,I}[X, Y]`.
    pub fn interval_statistic(&self, interval: &Interval) -> Result<f64> {
        self.check(interval)?;
        Ok(self.combine(interval, self.observed_pair_sum(interval)))
    }

    /// Statistics for many intervals, in input order.
    ///
    /// Streaming summaries group intervals by start and grow one accumulator
    /// per group, so each group costs O(L²) for its longest member `L`.
    pub fn statistics(&self, intervals: &[Interval]) -> Result<Vec<f64>> {
        for interval in intervals {
            self.check(interval)?;
        }
        match self.pairs {
            ObservedPairs::Dense { .. } => Ok(intervals
                .par_iter()
                .map(|i| self.combine(i, self.observed_pair_sum(i)))
                .collect()),
            ObservedPairs::Streaming => {
                let mut groups: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
                for (idx, i) in intervals.iter().enumerate() {
                    groups.entry(i.start()).or_default().push((i.end(), idx));
                }
                let groups: Vec<(usize, Vec<(usize, usize)>)> = groups.into_iter().collect();
                let results: Vec<Vec<(usize, f64)>> = groups
                    .into_par_iter()
                    .map(|(start, mut members)| {
                        members.sort_unstable();
                        let mut acc = self.accumulator(start);
                        members
                            .into_iter()
                            .map(|(end, idx)| {
                                while acc.end() < end {
                                    acc.grow_right();
                                }
                                (idx, acc.statistic())
                            })
                            .collect()
                    })
                    .collect();
                let mut out = vec![0.0; intervals.len()];
                for (idx, value) in results.into_iter().flatten() {
                    out[idx] = value;
                }
                Ok(out)
            }
        }
    }

    /// Accumulator over the single-node interval `[start, start + 1)`.
    pub fn accumulator(&self, start: usize) -> IntervalAccumulator<'_> {
        assert!(start < self.n, "accumulator start {start} out of range");
        IntervalAccumulator {
            summaries: self,
            start,
            end: start + 1,
            pairs: NeumaierSum::new(),
        }
    }
}

/// Row-wise prefix sums of the observed Gram matrix accumulated down the
/// columns; the result is mirrored so that `P[a][b] == P[b][a]` exactly.
fn dense_prefix_table(y: &[f64], kernel: &Kernel) -> Vec<f64> {
    let n = y.len();
    let w = n + 1;
    let mut table = vec![0.0; w * w];
    // Row i + 1 temporarily holds R_i(b) = Σ_{j<b} k(y_i, y_j).
    table[w..]
        .par_chunks_mut(w)
        .zip(y.par_iter())
        .for_each(|(row, &yi)| {
            let mut acc = NeumaierSum::new();
            for (b, &yj) in y.iter().enumerate() {
                acc.add(kernel.value(yi, yj));
                row[b + 1] = acc.value();
            }
        });
    let mut columns = vec![NeumaierSum::new(); w];
    for a in 1..w {
        let row = &mut table[a * w..(a + 1) * w];
        for (cell, col) in row.iter_mut().zip(columns.iter_mut()) {
            col.add(*cell);
            *cell = col.value();
        }
    }
    for a in 0..w {
        for b in a + 1..w {
            table[b * w + a] = table[a * w + b];
        }
    }
    table
}

/// Off-diagonal observed pair sum over a growing interval.
#[derive(Debug, Clone)]
pub struct IntervalAccumulator<'a> {
    summaries: &'a GramSummaries,
    start: usize,
    end: usize,
    pairs: NeumaierSum,
}

impl IntervalAccumulator<'_> {
    pub fn interval(&self) -> Interval {
        Interval::new(self.start, self.end - self.start)
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    /// `Σ_{i,j∈I, i≠j} k(y_i, y_j)` for the current interval.
    pub fn pair_sum(&self) -> f64 {
        self.pairs.value()
    }

    fn add_node(&mut self, node: usize) {
        let y = &self.summaries.observed;
        let k = &self.summaries.kernel;
        let v = y[node];
        let mut row = NeumaierSum::new();
        for &other in &y[self.start..self.end] {
            row.add(k.value(v, other));
        }
        self.pairs.add(2.0 * row.value());
    }

    /// Extends the interval by one node on the right; false at the boundary.
    pub fn grow_right(&mut self) -> bool {
        if self.end >= self.summaries.n {
            return false;
        }
        self.add_node(self.end);
        self.end += 1;
        true
    }

    /// Extends the interval by one node on the left; false at the boundary.
    pub fn grow_left(&mut self) -> bool {
        if self.start == 0 {
            return false;
        }
        self.add_node(self.start - 1);
        self.start -= 1;
        true
    }

    /// Statistic of the current interval; NaN while it holds a single node.
    pub fn statistic(&self) -> f64 {
        if self.end - self.start < 2 {
            return f64::NAN;
        }
        self.summaries.combine(&self.interval(), self.pair_sum())
    }
}
