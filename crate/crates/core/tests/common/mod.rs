//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use mmdscan::KernelKind;

pub fn kernel(kind: KernelKind, sigma: f64, a: f64, b: f64) -> f64 {
    let d = a - b;
    match kind {
        KernelKind::Gaussian => (-d * d / (2.0 * sigma * sigma)).exp(),
        KernelKind::Laplace => (-d.abs() / (2.0 * sigma)).exp(),
    }
}

/// Direct double-loop evaluation of the unbiased estimator.
pub fn naive_mmd2(kind: KernelKind, sigma: f64, x: &[f64], y: &[f64]) -> f64 {
    let (n, m) = (x.len() as f64, y.len() as f64);
    let mut xx = 0.0;
    for (i, a) in x.iter().enumerate() {
        for (j, b) in x.iter().enumerate() {
            if i != j {
                xx += kernel(kind, sigma, *a, *b);
            }
        }
    }
    let mut yy = 0.0;
    for (i, a) in y.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            if i != j {
                yy += kernel(kind, sigma, *a, *b);
            }
        }
    }
    let mut xy = 0.0;
    for a in x {
        for b in y {
            xy += kernel(kind, sigma, *a, *b);
        }
    }
    xx / (n * (n - 1.0)) + yy / (m * (m - 1.0)) - 2.0 * xy / (n * m)
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * 1f64.max(a.abs()).max(b.abs())
}

/// `E k(X, Y)` for independent `X ~ N(m1, v1)`, `Y ~ N(m2, v2)` under the
/// Gaussian kernel, by numerical integration over the difference
/// `D ~ N(m1 - m2, v1 + v2)`.
pub fn gaussian_kernel_mean_numeric(m1: f64, v1: f64, m2: f64, v2: f64, sigma: f64) -> f64 {
    let mu = m1 - m2;
    let s2 = v1 + v2;
    if s2 == 0.0 {
        return (-mu * mu / (2.0 * sigma * sigma)).exp();
    }
    let s = s2.sqrt();
    let steps = 20_000;
    let lo = mu - 12.0 * s;
    let h = 24.0 * s / steps as f64;
    let f = |d: f64| {
        let z = (d - mu) / s;
        (-0.5 * z * z).exp() / (s * (2.0 * std::f64::consts::PI).sqrt())
            * (-d * d / (2.0 * sigma * sigma)).exp()
    };
    // Simpson's rule.
    let mut acc = f(lo) + f(lo + steps as f64 * h);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(lo + i as f64 * h);
    }
    acc * h / 3.0
}

/// Mixture MMD² by numerical integration, from `(weight, mean, variance)`
/// components.
pub fn mixture_mmd2_numeric(p: &[(f64, f64, f64)], q: &[(f64, f64, f64)], sigma: f64) -> f64 {
    let e = |a: &[(f64, f64, f64)], b: &[(f64, f64, f64)]| {
        let mut s = 0.0;
        for &(wa, ma, va) in a {
            for &(wb, mb, vb) in b {
                s += wa * wb * gaussian_kernel_mean_numeric(ma, va, mb, vb, sigma);
            }
        }
        s
    };
    e(p, p) + e(q, q) - 2.0 * e(p, q)
}

/// Small deterministic generator for test inputs (xorshift64*).
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1)
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}
