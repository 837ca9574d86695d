//! Closed-form MMD² between Gaussians (and finite Gaussian mixtures) under the
//! Gaussian kernel.
//!
//! For `x ~ N(μ₁, s₁²)`, `y ~ N(μ₂, s₂²)` independent and
//! `k(x, y) = exp(-(x-y)²/(2σ²))`:
//!
//! ```text
//! E k(x, y) = σ / sqrt(σ² + s₁² + s₂²) · exp(-(μ₁-μ₂)² / (2(σ² + s₁² + s₂²)))
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weighted Gaussian component `(weight, mean, variance)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianComponent {
    pub weight: f64,
    pub mean: f64,
    pub variance: f64,
}

impl GaussianComponent {
    pub fn new(weight: f64, mean: f64, variance: f64) -> Self {
        Self {
            weight,
            mean,
            variance,
        }
    }
}

fn expected_kernel(m1: f64, v1: f64, m2: f64, v2: f64, sigma: f64) -> f64 {
    let s2 = sigma * sigma + v1 + v2;
    let d = m1 - m2;
    sigma / s2.sqrt() * (-(d * d) / (2.0 * s2)).exp()
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::invalid(format!(
            "bandwidth must be finite and positive, got {sigma}"
        )));
    }
    Ok(())
}

fn check_mixture(name: &str, mix: &[GaussianComponent]) -> Result<()> {
    if mix.is_empty() {
        return Err(Error::invalid(format!("{name} mixture has no components")));
    }
    for c in mix {
        if !(c.variance.is_finite() && c.variance >= 0.0) {
            return Err(Error::invalid(format!(
                "{name} variance must be non-negative, got {}",
                c.variance
            )));
        }
        if !(c.weight.is_finite() && c.weight > 0.0) || !c.mean.is_finite() {
            return Err(Error::invalid(format!("{name} component {c:?} is invalid")));
        }
    }
    let total: f64 = mix.iter().map(|c| c.weight).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!(
            "{name} mixture weights sum to {total}, expected 1"
        )));
    }
    Ok(())
}

fn mixture_cross(a: &[GaussianComponent], b: &[GaussianComponent], sigma: f64) -> f64 {
    a.iter()
        .flat_map(|ca| {
            b.iter().map(move |cb| {
                ca.weight
                    * cb.weight
                    * expected_kernel(ca.mean, ca.variance, cb.mean, cb.variance, sigma)
            })
        })
        .sum()
}

/// Population MMD² between `N(mean1, var1)` and `N(mean2, var2)`.
pub fn mmd2_population_gaussian(
    mean1: f64,
    var1: f64,
    mean2: f64,
    var2: f64,
    sigma: f64,
) -> Result<f64> {
    mmd2_population_mixture(
        &[GaussianComponent::new(1.0, mean1, var1)],
        &[GaussianComponent::new(1.0, mean2, var2)],
        sigma,
    )
}

/// Population MMD² between two finite Gaussian mixtures, by linearity of the
/// kernel expectations.
pub fn mmd2_population_mixture(
    p: &[GaussianComponent],
    q: &[GaussianComponent],
    sigma: f64,
) -> Result<f64> {
    check_sigma(sigma)?;
    check_mixture("p", p)?;
    check_mixture("q", q)?;
    Ok(mixture_cross(p, p, sigma) - 2.0 * mixture_cross(p, q, sigma) + mixture_cross(q, q, sigma))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_distributions() {
        assert_eq!(mmd2_population_gaussian(0.0, 1.0, 0.0, 1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn unit_shift() {
        let v = mmd2_population_gaussian(0.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let expected = 2.0 / 3f64.sqrt() * (1.0 - (-1.0f64 / 6.0).exp());
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.177268).abs() < 1e-6);
    }

    #[test]
    fn point_masses() {
        let v = mmd2_population_gaussian(0.0, 0.0, 3.0, 0.0, 1.0).unwrap();
        assert!((v - (2.0 - 2.0 * (-4.5f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn rejects_negative_variance() {
        assert!(mmd2_population_gaussian(0.0, -1.0, 0.0, 1.0, 1.0).is_err());
        assert!(mmd2_population_gaussian(0.0, 1.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn mixture_with_one_component_matches_gaussian() {
        let a = mmd2_population_gaussian(0.3, 0.5, -1.0, 2.0, 0.8).unwrap();
        let b = mmd2_population_mixture(
            &[GaussianComponent::new(1.0, 0.3, 0.5)],
            &[
                GaussianComponent::new(0.5, -1.0, 2.0),
                GaussianComponent::new(0.5, -1.0, 2.0),
            ],
            0.8,
        )
        .unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn mixture_weights_must_sum_to_one() {
        let bad = [GaussianComponent::new(0.5, 0.0, 1.0)];
        assert!(mmd2_population_mixture(&bad, &bad, 1.0).is_err());
    }
}
