//! The rank-one operator
//!
//! ```text
//! T f(x) = f'(x) - ρ f(x) + Σ_j k_j a_j (f(x) - f(-x)) / (1 - e^{-a_j x})
//! ```
//!
//! and the Laplacian `L = T²`. The reflection term is written as
//! `k_j B(a_j x) E(x)` with `B(y) = y/(1 - e^{-y})` and
//! `E(x) = (f(x) - f(-x))/x`, both smooth through `x = 0`.

use std::sync::Arc;

use num_complex::Complex64;

use super::functions::{odd_quotient, odd_quotient_deriv, SharedFn, SmoothFunction};
use crate::opdam_kernel::{KernelPath, RankOne};

type C64 = Complex64;

/// `y / (1 - e^{-y})`.
pub fn bernoulli_b(y: f64) -> f64 {
    if y.abs() < 0.1 {
        let y2 = y * y;
        1.0 + 0.5 * y + y2 * (1.0 / 12.0 - y2 * (1.0 / 720.0 - y2 * (1.0 / 30240.0 - y2 / 1209600.0)))
    } else {
        y / -(-y).exp_m1()
    }
}

/// Derivative of [`bernoulli_b`].
pub fn bernoulli_b_deriv(y: f64) -> f64 {
    if y.abs() < 0.1 {
        let y2 = y * y;
        0.5 + y * (1.0 / 6.0 - y2 * (1.0 / 180.0 - y2 * (1.0 / 5040.0 - y2 / 151200.0)))
    } else {
        let d = -(-y).exp_m1();
        (d - y * (-y).exp()) / (d * d)
    }
}

/// `T f` as a function with one derivative.
#[derive(Clone)]
pub struct ApplyT {
    pub cfg: RankOne,
    pub inner: SharedFn,
}

impl ApplyT {
    pub fn new(cfg: &RankOne, inner: SharedFn) -> Self {
        Self {
            cfg: cfg.clone(),
            inner,
        }
    }
}

impl SmoothFunction for ApplyT {
    fn deriv(&self, x: f64, n: usize) -> C64 {
        let f = self.inner.as_ref();
        let rho = self.cfg.rho;
        match n {
            0 => {
                let e = odd_quotient(f, x);
                let refl: f64 = self.cfg.terms.iter().map(|&(a, k)| k * bernoulli_b(a * x)).sum();
                f.deriv(x, 1) - f.value(x) * rho + e * refl
            }
            1 => {
                let e = odd_quotient(f, x);
                let de = odd_quotient_deriv(f, x);
                let (mut b, mut db) = (0.0, 0.0);
                for &(a, k) in &self.cfg.terms {
                    b += k * bernoulli_b(a * x);
                    db += k * a * bernoulli_b_deriv(a * x);
                }
                f.deriv(x, 2) - f.deriv(x, 1) * rho + e * db + de * b
            }
            _ => panic!("ApplyT provides derivatives up to order 1"),
        }
    }

    fn max_derivative(&self) -> usize {
        self.inner.max_derivative().saturating_sub(1).min(1)
    }

    fn support(&self) -> Option<(f64, f64)> {
        let (a, b) = self.inner.support()?;
        let r = a.abs().max(b.abs());
        Some((-r, r))
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.inner
            .breakpoints()
            .into_iter()
            .flat_map(|b| [b, -b])
            .collect()
    }
}

/// `T f (x)`.
pub fn apply_t(cfg: &RankOne, f: SharedFn, x: f64) -> C64 {
    ApplyT::new(cfg, f).value(x)
}

/// `L f (x) = T(T f)(x)`.
pub fn apply_l(cfg: &RankOne, f: SharedFn, x: f64) -> C64 {
    let tf: SharedFn = Arc::new(ApplyT::new(cfg, f));
    ApplyT::new(cfg, tf).value(x)
}

/// A solved kernel `x ↦ G_λ(x)` viewed as a smooth function on `[-x_max, x_max]`.
#[derive(Clone)]
pub struct KernelFunction(pub Arc<KernelPath>);

impl SmoothFunction for KernelFunction {
    fn deriv(&self, x: f64, n: usize) -> C64 {
        match self.0.eval_full(x) {
            Ok((g, dg, _)) => match n {
                0 => g,
                1 => dg,
                _ => panic!("KernelFunction provides derivatives up to order 1"),
            },
            Err(_) => C64::new(f64::NAN, f64::NAN),
        }
    }

    fn max_derivative(&self) -> usize {
        1
    }

    fn support(&self) -> Option<(f64, f64)> {
        None
    }
}
