//! Bounded translation-invariant kernels on scalar observations.
//!
//! Both kernels satisfy `0 <= k(x, y) <= K` with `k(x, x) = K`, where the
//! bound `K` is stored on the kernel and consumed by the threshold formulas
//! in [`crate::detector`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    /// `exp(-(x - y)^2 / (2 sigma^2))`
    Gaussian,
    /// `exp(-|x - y| / (2 sigma))`
    Laplace,
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelKind::Gaussian => f.write_str("gaussian"),
            KernelKind::Laplace => f.write_str("laplace"),
        }
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "rbf" => Ok(KernelKind::Gaussian),
            "laplace" | "laplacian" => Ok(KernelKind::Laplace),
            other => Err(Error::invalid(format!("unknown kernel '{other}'"))),
        }
    }
}

/// A bounded kernel with an explicit bandwidth.
///
/// Values are immutable once built and cheap to copy into worker threads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    kind: KernelKind,
    bandwidth: f64,
    bound: f64,
}

impl Kernel {
    pub fn new(kind: KernelKind, bandwidth: f64) -> Result<Self> {
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(Error::invalid(format!(
                "kernel bandwidth must be finite and positive, got {bandwidth}"
            )));
        }
        Ok(Self {
            kind,
            bandwidth,
            bound: 1.0,
        })
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        Self::new(KernelKind::Gaussian, sigma)
    }

    pub fn laplace(sigma: f64) -> Result<Self> {
        Self::new(KernelKind::Laplace, sigma)
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// The constant `K` with `0 <= k(x, y) <= K`.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Checked evaluation; rejects non-finite inputs.
    pub fn evaluate(&self, x: f64, y: f64) -> Result<f64> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::invalid(format!(
                "kernel arguments must be finite, got ({x}, {y})"
            )));
        }
        Ok(self.value(x, y))
    }

    /// Unchecked evaluation for inputs that were validated upstream.
    #[inline]
    pub fn value(&self, x: f64, y: f64) -> f64 {
        let d = x - y;
        match self.kind {
            KernelKind::Gaussian => {
                self.bound * (-(d * d) / (2.0 * self.bandwidth * self.bandwidth)).exp()
            }
            KernelKind::Laplace => self.bound * (-d.abs() / (2.0 * self.bandwidth)).exp(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn documented_values() {
        let g = Kernel::gaussian(1.0).unwrap();
        assert_eq!(g.evaluate(3.7, 3.7).unwrap(), 1.0);
        assert!((g.evaluate(0.0, 1.0).unwrap() - (-0.5f64).exp()).abs() < 1e-15);
        let l = Kernel::laplace(1.0).unwrap();
        assert!((l.evaluate(0.0, 2.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!((l.evaluate(0.0, 2.0).unwrap() - 0.36788).abs() < 1e-5);
    }

    #[test]
    fn rejects_bad_bandwidth_and_inputs() {
        assert!(Kernel::gaussian(0.0).is_err());
        assert!(Kernel::laplace(-1.0).is_err());
        assert!(Kernel::gaussian(f64::NAN).is_err());
        let g = Kernel::gaussian(1.0).unwrap();
        assert!(matches!(
            g.evaluate(f64::NAN, 0.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(g.evaluate(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn parses_kind() {
        assert_eq!("gaussian".parse::<KernelKind>().unwrap(), KernelKind::Gaussian);
        assert_eq!("Laplace".parse::<KernelKind>().unwrap(), KernelKind::Laplace);
        assert!("cosine".parse::<KernelKind>().is_err());
    }

    #[test]
    fn decay_is_monotone_on_sorted_grid() {
        for kernel in [Kernel::gaussian(0.7).unwrap(), Kernel::laplace(1.3).unwrap()] {
            let x = 0.25;
            let mut prev = f64::INFINITY;
            for i in 0..2000 {
                let v = kernel.value(x, x + i as f64 * 0.01);
                assert!(v <= prev);
                prev = v;
            }
        }
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded(
            x in -1e3f64..1e3,
            y in -1e3f64..1e3,
            sigma in 0.01f64..10.0,
            laplace in any::<bool>(),
        ) {
            let kind = if laplace { KernelKind::Laplace } else { KernelKind::Gaussian };
            let k = Kernel::new(kind, sigma).unwrap();
            let a = k.evaluate(x, y).unwrap();
            let b = k.evaluate(y, x).unwrap();
            prop_assert_eq!(a, b);
            prop_assert!((0.0..=1.0).contains(&a));
            prop_assert_eq!(k.evaluate(x, x).unwrap(), 1.0);
        }
    }
}
