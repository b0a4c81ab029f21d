//! Radial Paley-Wiener profiles: Euclidean Fourier transforms of ball bumps.
//!
//! For the bump `(1 - |x|²/R²)₊^m` in dimension `d`,
//! `h(λ) = R^d π^{d/2} Γ(m+1) (2/x)^ν J_ν(x)` with `ν = m + d/2`, `x = R|λ|`.
//! The same function is the entire series
//! `R^d π^{d/2} Γ(m+1) Σ_j (-x²/4)^j / (j! Γ(ν+j+1))` in `s = ⟨λ,λ⟩`.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::bessel::bessel_j;
use super::gamma::log_gamma;
use crate::error::{Error, Result};

type C64 = Complex64;

fn ln_gamma(x: f64) -> f64 {
    log_gamma(C64::new(x, 0.0)).map(|v| v.re).unwrap_or(f64::INFINITY)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProfile {
    pub radius: f64,
    pub order: u32,
    pub dim: usize,
    /// `R^d π^{d/2} Γ(m+1)`.
    prefactor: f64,
}

impl RadialProfile {
    /// Profile of radius `R`, bump power `m`, dimension `d`, required to decay
    /// at least like `r^{-n0}` on real rays.
    pub fn new(radius: f64, order: u32, dim: usize, n0: f64) -> Result<Self> {
        if !(radius > 0.0) || order == 0 || dim == 0 {
            return Err(Error::Precondition(format!(
                "profile needs R > 0, m >= 1, d >= 1 (got R={radius}, m={order}, d={dim})"
            )));
        }
        let decay = order as f64 + (dim as f64 + 1.0) / 2.0;
        if decay < n0 {
            return Err(Error::ProfileTooRough {
                order,
                decay,
                required: n0,
            });
        }
        let d = dim as f64;
        let prefactor =
            (d * radius.ln() + 0.5 * d * PI.ln() + ln_gamma(order as f64 + 1.0)).exp();
        Ok(Self {
            radius,
            order,
            dim,
            prefactor,
        })
    }

    /// Smallest bump power meeting the decay requirement `n0`.
    pub fn for_budget(radius: f64, dim: usize, n0: f64) -> Result<Self> {
        let m = (n0 - (dim as f64 + 1.0) / 2.0).ceil().max(1.0) as u32;
        Self::new(radius, m, dim, n0)
    }

    pub fn bessel_order(&self) -> f64 {
        self.order as f64 + self.dim as f64 / 2.0
    }

    /// Decay exponent on real rays.
    pub fn decay_exponent(&self) -> f64 {
        self.order as f64 + (self.dim as f64 + 1.0) / 2.0
    }

    /// `h` as a function of `s = ⟨λ,λ⟩` (complex), by the entire series.
    pub fn eval_sq(&self, s: C64) -> C64 {
        let nu = self.bessel_order();
        let q = -s * (self.radius * self.radius / 4.0);
        let mut term = C64::new((-ln_gamma(nu + 1.0)).exp(), 0.0);
        let mut sum = term;
        let mut j = 1.0;
        loop {
            term *= q / (j * (nu + j));
            sum += term;
            if term.norm() <= 1e-17 * sum.norm() && j > q.norm().sqrt() {
                break;
            }
            j += 1.0;
            if j > 5000.0 {
                break;
            }
        }
        sum * self.prefactor
    }

    /// `h(rσ)` on a real ray.
    pub fn eval_radius(&self, r: f64) -> f64 {
        let x = self.radius * r.abs();
        let nu = self.bessel_order();
        if x <= 2.0 || x * x <= 4.0 * (nu + 1.0) {
            return self.eval_sq(C64::new(r * r, 0.0)).re;
        }
        self.prefactor * (nu * (2.0 / x).ln()).exp() * bessel_j(nu, x)
    }

    /// `h(zσ)` for a complex radial coordinate `z`.
    pub fn eval_complex(&self, z: C64) -> C64 {
        if z.im == 0.0 {
            return C64::new(self.eval_radius(z.re), 0.0);
        }
        self.eval_sq(z * z)
    }
}
