use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::Interval;
use crate::kernels::{Kernel, KernelKind};
use crate::mmd::{mmd2_population_mixture, GaussianComponent, SampleSeries};

/// Mixture component given by weight, mean and variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub weight: f64,
    pub mean: f64,
    pub variance: f64,
}

impl Component {
    pub fn new(weight: f64, mean: f64, variance: f64) -> Self {
        Self {
            weight,
            mean,
            variance,
        }
    }
}

/// The distribution families used for synthetic networks. Parameters are
/// means and variances; a Laplace component with variance `v` has scale
/// `b = sqrt(v / 2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSpec {
    Gaussian { mean: f64, variance: f64 },
    GaussianMixture { components: Vec<Component> },
    LaplaceMixture { components: Vec<Component> },
}

impl DistributionSpec {
    pub fn gaussian(mean: f64, variance: f64) -> Self {
        DistributionSpec::Gaussian { mean, variance }
    }

    pub fn gaussian_mixture(components: Vec<Component>) -> Self {
        DistributionSpec::GaussianMixture { components }
    }

    pub fn laplace_mixture(components: Vec<Component>) -> Self {
        DistributionSpec::LaplaceMixture { components }
    }

    /// Equal-weight two-component mixture at `±offset`.
    pub fn symmetric_gaussian_pair(offset: f64, variance: f64) -> Self {
        Self::gaussian_mixture(vec![
            Component::new(0.5, -offset, variance),
            Component::new(0.5, offset, variance),
        ])
    }

    pub fn symmetric_laplace_pair(offset: f64, variance: f64) -> Self {
        Self::laplace_mixture(vec![
            Component::new(0.5, -offset, variance),
            Component::new(0.5, offset, variance),
        ])
    }

    pub fn validate(&self) -> Result<()> {
        let components = match self {
            DistributionSpec::Gaussian { mean, variance } => {
                return check_component(&Component::new(1.0, *mean, *variance));
            }
            DistributionSpec::GaussianMixture { components }
            | DistributionSpec::LaplaceMixture { components } => components,
        };
        if components.is_empty() {
            return Err(Error::invalid("mixture needs at least one component"));
        }
        for c in components {
            check_component(c)?;
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        match self {
            DistributionSpec::Gaussian { mean, .. } => *mean,
            DistributionSpec::GaussianMixture { components }
            | DistributionSpec::LaplaceMixture { components } => {
                components.iter().map(|c| c.weight * c.mean).sum()
            }
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            DistributionSpec::Gaussian { variance, .. } => *variance,
            DistributionSpec::GaussianMixture { components }
            | DistributionSpec::LaplaceMixture { components } => {
                let mean = self.mean();
                components
                    .iter()
                    .map(|c| c.weight * (c.variance + c.mean * c.mean))
                    .sum::<f64>()
                    - mean * mean
            }
        }
    }

    fn gaussian_components(&self) -> Option<Vec<GaussianComponent>> {
        match self {
            DistributionSpec::Gaussian { mean, variance } => {
                Some(vec![GaussianComponent::new(1.0, *mean, *variance)])
            }
            DistributionSpec::GaussianMixture { components } => Some(
                components
                    .iter()
                    .map(|c| GaussianComponent::new(c.weight, c.mean, c.variance))
                    .collect(),
            ),
            DistributionSpec::LaplaceMixture { .. } => None,
        }
    }

    /// One draw.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            DistributionSpec::Gaussian { mean, variance } => draw_gaussian(rng, *mean, *variance),
            DistributionSpec::GaussianMixture { components } => {
                let c = pick(components, rng);
                draw_gaussian(rng, c.mean, c.variance)
            }
            DistributionSpec::LaplaceMixture { components } => {
                let c = pick(components, rng);
                draw_laplace(rng, c.mean, c.variance)
            }
        }
    }

    pub fn draw_many<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<f64> {
        (0..count).map(|_| self.draw(rng)).collect()
    }
}

fn check_component(c: &Component) -> Result<()> {
    if !(c.variance.is_finite() && c.variance > 0.0) {
        return Err(Error::invalid(format!(
            "variance must be positive, got {}",
            c.variance
        )));
    }
    if !(c.weight.is_finite() && c.weight > 0.0) {
        return Err(Error::invalid(format!(
            "mixture weight must be positive, got {}",
            c.weight
        )));
    }
    if !c.mean.is_finite() {
        return Err(Error::invalid("mean must be finite"));
    }
    Ok(())
}

fn pick<'a, R: Rng + ?Sized>(components: &'a [Component], rng: &mut R) -> &'a Component {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for c in components {
        acc += c.weight;
        if u < acc {
            return c;
        }
    }
    components.last().expect("validated mixture is non-empty")
}

fn draw_gaussian<R: Rng + ?Sized>(rng: &mut R, mean: f64, variance: f64) -> f64 {
    Normal::new(mean, variance.sqrt())
        .expect("validated variance")
        .sample(rng)
}

fn draw_laplace<R: Rng + ?Sized>(rng: &mut R, mean: f64, variance: f64) -> f64 {
    let scale = (variance / 2.0).sqrt();
    // Inverse CDF on u in (-1/2, 1/2).
    let u = loop {
        let u: f64 = rng.random::<f64>() - 0.5;
        if u > -0.5 {
            break u;
        }
    };
    mean - scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
}

/// `count` i.i.d. draws from `dist`, reproducible from `seed`.
pub fn sample(dist: &DistributionSpec, count: usize, seed: u64) -> Result<Vec<f64>> {
    dist.validate()?;
    if count == 0 {
        return Err(Error::invalid("sample count must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(dist.draw_many(count, &mut rng))
}

/// Reference sequence from `p`; observed sequence from `p` except on
/// `anomaly`, where it is drawn from `q`.
pub fn plant_instance(
    p: &DistributionSpec,
    q: &DistributionSpec,
    n: usize,
    anomaly: Option<Interval>,
    seed: u64,
) -> Result<SampleSeries> {
    p.validate()?;
    q.validate()?;
    if let Some(a) = anomaly {
        a.check_within(n)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reference = p.draw_many(n, &mut rng);
    let mut observed = p.draw_many(n, &mut rng);
    if let Some(a) = anomaly {
        for slot in &mut observed[a.range()] {
            *slot = q.draw(&mut rng);
        }
    }
    SampleSeries::new(reference, observed)
}

/// Closed-form MMD² when both distributions are Gaussian (mixtures) and the
/// kernel is Gaussian.
pub fn population_mmd2(
    p: &DistributionSpec,
    q: &DistributionSpec,
    kernel: &Kernel,
) -> Option<f64> {
    if kernel.kind() != KernelKind::Gaussian {
        return None;
    }
    let p = p.gaussian_components()?;
    let q = q.gaussian_components()?;
    mmd2_population_mixture(&p, &q, kernel.bandwidth())
        .ok()
        .map(|v| v * kernel.bound())
}
