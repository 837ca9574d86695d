//! Kernel MMD scan test for an anomalous interval on a line network.
//!
//! A network of `n` nodes carries one observed sample per node, and an
//! independent reference sample per node drawn from the nominal distribution
//! `p`. Under H1 some interval of at least `I_min` consecutive nodes is
//! drawn from another distribution `q`. The test scans intervals with the
//! unbiased MMD² statistic between the reference set and the interval's
//! observations.
//!
//! ```
//! use mmdscan::{scan, Kernel, SampleSeries, TestConfig, ThresholdRule};
//!
//! let reference: Vec<f64> = (0..64).map(|i| ((i * 37) % 17) as f64 / 17.0).collect();
//! let mut observed = reference.clone();
//! observed.rotate_left(3);
//! for v in &mut observed[20..40] {
//!     *v += 5.0;
//! }
//! let series = SampleSeries::new(reference, observed)?;
//! let kernel = Kernel::gaussian(1.0)?;
//! let outcome = scan(&series, &kernel, &TestConfig::new(8, ThresholdRule::Fixed { t: 0.25 }))?;
//! assert!(outcome.is_alarm());
//! # Ok::<(), mmdscan::Error>(())
//! ```
//!
//! Modules:
//! - [`kernels`]: bounded Gaussian and Laplace kernels.
//! - [`mmd`]: the unbiased estimator and O(1)-per-interval Gram summaries.
//! - [`intervals`]: candidate sets, the dyadic grid and l-level extensions.
//! - [`detector`]: exhaustive and multiscale scan tests, thresholds.
//! - [`experiments`]: synthetic distributions and Monte Carlo error rates.
//! - [`cli`]: the `mmdscan` command line.

pub mod cli;
pub mod detector;
pub mod error;
pub mod experiments;
pub mod intervals;
pub mod io;
pub mod kernels;
pub mod mmd;
pub mod numeric;

pub use detector::{
    scan, scan_exhaustive, scan_multiscale, Algorithm, Decision, ScanOutcome, TestConfig,
    ThresholdRule, Trigger,
};
pub use error::{Error, Result};
pub use intervals::Interval;
pub use kernels::{Kernel, KernelKind};
pub use mmd::{mmd2_unbiased, GramSummaries, SampleSeries, SummaryMode, SummaryOptions};
