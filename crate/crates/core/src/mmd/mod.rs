//! Unbiased MMD² estimation and per-interval statistics.
//!
//! For samples `x_1..x_n` and `y_1..y_m` the unbiased estimator is
//!
//! ```text
//! mmd²_u = 1/(n(n-1)) Σ_{i≠j} k(x_i, x_j)
//!        + 1/(m(m-1)) Σ_{i≠j} k(y_i, y_j)
//!        - 2/(nm)     Σ_{i,j} k(x_i, y_j)
//! ```
//!
//! It may be negative. The per-interval statistic uses the whole reference
//! sequence for the first term and only the observed samples inside the
//! interval for the other two; [`GramSummaries`] precomputes the aggregates
//! that make it cheap to evaluate on many intervals.

mod population;
mod summaries;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::numeric::NeumaierSum;

pub use population::{mmd2_population_gaussian, mmd2_population_mixture, GaussianComponent};
pub use summaries::{
    build_summaries, GramSummaries, IntervalAccumulator, SummaryMode, SummaryOptions,
    DEFAULT_DENSE_LIMIT,
};

/// Reference sequence `X` (drawn from `p`) and observed sequence `Y` (one
/// sample per node), of equal length `n >= 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSeries {
    reference: Vec<f64>,
    observed: Vec<f64>,
}

impl SampleSeries {
    pub fn new(reference: Vec<f64>, observed: Vec<f64>) -> Result<Self> {
        if reference.len() != observed.len() {
            return Err(Error::invalid(format!(
                "reference has {} samples but observed has {}",
                reference.len(),
                observed.len()
            )));
        }
        if reference.len() < 2 {
            return Err(Error::InsufficientSamples {
                needed: 2,
                got: reference.len(),
            });
        }
        check_finite("reference", &reference)?;
        check_finite("observed", &observed)?;
        Ok(Self {
            reference,
            observed,
        })
    }

    pub fn len(&self) -> usize {
        self.reference.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reference.is_empty()
    }

    pub fn reference(&self) -> &[f64] {
        &self.reference
    }

    pub fn observed(&self) -> &[f64] {
        &self.observed
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.reference, self.observed)
    }
}

pub(crate) fn check_finite(name: &str, values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::invalid(format!(
            "{name} sample {i} is not finite ({})",
            values[i]
        ))),
        None => Ok(()),
    }
}

/// `Σ_{i≠j} k(s_i, s_j)`. Rows are summed in parallel and merged in row
/// order, so the value is independent of the worker count.
pub(crate) fn off_diagonal_sum(samples: &[f64], kernel: &Kernel) -> f64 {
    let rows: Vec<NeumaierSum> = (0..samples.len())
        .into_par_iter()
        .map(|i| {
            let a = samples[i];
            samples[i + 1..].iter().map(|&b| kernel.value(a, b)).sum()
        })
        .collect();
    let mut total = NeumaierSum::new();
    for row in &rows {
        total.merge(row);
    }
    2.0 * total.value()
}

pub(crate) fn cross_sum(x: &[f64], y: &[f64], kernel: &Kernel) -> f64 {
    let rows: Vec<NeumaierSum> = x
        .par_iter()
        .map(|&a| y.iter().map(|&b| kernel.value(a, b)).sum())
        .collect();
    let mut total = NeumaierSum::new();
    for row in &rows {
        total.merge(row);
    }
    total.value()
}

/// Unbiased estimate of MMD²[p, q] from `x ~ p` and `y ~ q`.
///
/// Lies in `[-2K, 2K]`; never clamped at zero.
pub fn mmd2_unbiased(x: &[f64], y: &[f64], kernel: &Kernel) -> Result<f64> {
    for len in [x.len(), y.len()] {
        if len < 2 {
            return Err(Error::InsufficientSamples { needed: 2, got: len });
        }
    }
    check_finite("x", x)?;
    check_finite("y", y)?;
    let n = x.len() as f64;
    let m = y.len() as f64;
    let xx = off_diagonal_sum(x, kernel) / (n * (n - 1.0));
    let yy = off_diagonal_sum(y, kernel) / (m * (m - 1.0));
    let xy = cross_sum(x, y, kernel) / (n * m);
    Ok(xx + yy - 2.0 * xy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_samples_give_zero() {
        let k = Kernel::gaussian(1.0).unwrap();
        assert_eq!(mmd2_unbiased(&[5.0; 3], &[5.0; 2], &k).unwrap(), 0.0);
    }

    #[test]
    fn two_point_example() {
        let k = Kernel::gaussian(1.0).unwrap();
        let e05 = (-0.5f64).exp();
        let e2 = (-2.0f64).exp();
        let expected = e05 + e2 - 0.5 * (1.0 + e2 + 2.0 * e05);
        let got = mmd2_unbiased(&[0.0, 1.0], &[0.0, 2.0], &k).unwrap();
        assert!((got - expected).abs() < 1e-15);
        assert!((got + 0.43233).abs() < 1e-5);
    }

    #[test]
    fn insufficient_samples() {
        let k = Kernel::laplace(1.0).unwrap();
        assert!(matches!(
            mmd2_unbiased(&[1.0], &[1.0, 2.0], &k),
            Err(Error::InsufficientSamples { needed: 2, got: 1 })
        ));
        assert!(mmd2_unbiased(&[1.0, 2.0], &[], &k).is_err());
    }

    #[test]
    fn series_validation() {
        assert!(SampleSeries::new(vec![0.0, 1.0], vec![0.0]).is_err());
        assert!(matches!(
            SampleSeries::new(vec![0.0], vec![0.0]),
            Err(Error::InsufficientSamples { .. })
        ));
        assert!(SampleSeries::new(vec![0.0, f64::NAN], vec![0.0, 1.0]).is_err());
        assert!(SampleSeries::new(vec![0.0, 1.0], vec![f64::INFINITY, 1.0]).is_err());
        assert_eq!(SampleSeries::new(vec![0.0; 4], vec![1.0; 4]).unwrap().len(), 4);
    }
}
