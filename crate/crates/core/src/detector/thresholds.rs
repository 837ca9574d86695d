//! Threshold and minimum-length formulas. `log n` is the natural logarithm
//! throughout.

use crate::error::{Error, Result};

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::invalid(format!(
            "{name} must be finite and positive, got {v}"
        )));
    }
    Ok(())
}

/// `t = (1 - δ) · MMD²[p, q]` for a known population MMD².
pub fn threshold_known(mmd2: f64, delta: f64) -> Result<f64> {
    positive("mmd2", mmd2)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok((1.0 - delta) * mmd2)
}

/// Vanishing threshold `t_n = 4 sqrt(ln n / n^0.9)` for unknown MMD².
pub fn threshold_decaying(n: usize) -> f64 {
    let nf = n as f64;
    4.0 * (nf.ln() / nf.powf(0.9)).sqrt()
}

/// Smallest integer `I_min >= 16 K² (1 + η) ln n / t²`.
pub fn i_min_bound(kernel_bound: f64, t: f64, eta: f64, n: usize) -> Result<usize> {
    positive("kernel bound", kernel_bound)?;
    positive("threshold", t)?;
    positive("eta", eta)?;
    if n < 2 {
        return Err(Error::invalid(format!("n must be at least 2, got {n}")));
    }
    Ok(i_min_bound_real(kernel_bound, t, eta, n as f64).ceil() as usize)
}

pub(crate) fn i_min_bound_real(kernel_bound: f64, t: f64, eta: f64, n: f64) -> f64 {
    16.0 * kernel_bound * kernel_bound * (1.0 + eta) * n.ln() / (t * t)
}

/// Extension depth `l = ceil(log2((1 + η) / η) + 2)`.
pub fn default_levels(eta: f64) -> u32 {
    (((1.0 + eta) / eta).log2() + 2.0).ceil().max(1.0) as u32
}
