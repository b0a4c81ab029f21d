//! Complex log-Gamma, Gamma ratios and Stirling-type bounds.
//!
//! `log_gamma` shifts the argument with the recurrence until `|z| >= 10`
//! and `Re z >= 1/2`, then sums the Stirling series with the ten Bernoulli
//! coefficients below. Arguments with `Re z < -50` go through the
//! reflection formula first; their imaginary part is only defined modulo
//! `2π` (only `exp` of such values is meaningful).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

type C64 = Complex64;

/// `B_{2n} / (2n (2n - 1))` for n = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const STIRLING_RADIUS: f64 = 10.0;
const REFLECTION_THRESHOLD: f64 = -50.0;

/// Index `n` such that `z = -n` when `z` is a pole of Gamma.
pub fn pole_index(z: C64) -> Option<i64> {
    if z.im.abs() > 1e-14 || z.re > 1e-14 {
        return None;
    }
    let n = (-z.re).round();
    if (z.re + n).abs() <= 1e-14 * n.max(1.0) {
        Some(n as i64)
    } else {
        None
    }
}

fn stirling_series(z: C64) -> C64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut corr = C64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        corr += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + corr
}

fn ln_sin_pi(z: C64) -> C64 {
    if z.im.abs() < 5.0 {
        return (z * PI).sin().ln();
    }
    // sin(πz) = (i/2) e^{-iπz} (1 - e^{2iπz}) for Im z > 0, mirrored below.
    let iz = C64::i() * PI * z;
    if z.im > 0.0 {
        C64::new(-std::f64::consts::LN_2, PI / 2.0) - iz + (C64::new(1.0, 0.0) - (iz * 2.0).exp()).ln()
    } else {
        C64::new(-std::f64::consts::LN_2, -PI / 2.0) + iz + (C64::new(1.0, 0.0) - (-iz * 2.0).exp()).ln()
    }
}

/// Principal branch of `ln Γ(z)` for `Re z >= -50`.
pub fn log_gamma(z: C64) -> Result<C64> {
    if let Some(n) = pole_index(z) {
        return Err(Error::Pole {
            factor: "Γ".into(),
            index: n,
        });
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Precondition(format!("non-finite argument {z}")));
    }
    if z.re < REFLECTION_THRESHOLD {
        let rest = log_gamma(C64::new(1.0, 0.0) - z)?;
        return Ok(C64::new(PI.ln(), 0.0) - ln_sin_pi(z) - rest);
    }
    let mut w = z;
    let mut shift = C64::new(0.0, 0.0);
    while w.re < 0.5 || w.norm() < STIRLING_RADIUS {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling_series(w) - shift)
}

/// `ln Γ(z)` modulo `2πi`; cheaper than [`log_gamma`] because the shift
/// factors are multiplied before taking a single logarithm.
pub fn log_gamma_mod(z: C64) -> Result<C64> {
    if let Some(n) = pole_index(z) {
        return Err(Error::Pole {
            factor: "Γ".into(),
            index: n,
        });
    }
    if z.re < REFLECTION_THRESHOLD {
        let rest = log_gamma_mod(C64::new(1.0, 0.0) - z)?;
        return Ok(C64::new(PI.ln(), 0.0) - ln_sin_pi(z) - rest);
    }
    let mut w = z;
    let mut prod = C64::new(1.0, 0.0);
    let mut shift = C64::new(0.0, 0.0);
    let mut count = 0;
    while w.re < 0.5 || w.norm() < STIRLING_RADIUS {
        prod *= w;
        w += 1.0;
        count += 1;
        if count % 16 == 0 {
            shift += prod.ln();
            prod = C64::new(1.0, 0.0);
        }
    }
    Ok(stirling_series(w) - shift - prod.ln())
}

/// `Γ(z)` for real `z` (not a pole).
pub fn gamma_real(z: f64) -> Result<f64> {
    let lg = log_gamma(C64::new(z, 0.0))?;
    let sign = if lg.im.rem_euclid(2.0 * PI) > PI / 2.0 && lg.im.rem_euclid(2.0 * PI) < 1.5 * PI {
        -1.0
    } else {
        1.0
    };
    Ok(sign * lg.re.exp())
}

/// `1/Γ(z)`, which is entire; returns zero at the poles of Γ.
pub fn recip_gamma(z: C64) -> C64 {
    match log_gamma_mod(z) {
        Ok(lg) => (-lg).exp(),
        Err(_) => C64::new(0.0, 0.0),
    }
}

/// `Γ(a)/Γ(b)`.
///
/// When `a - b` is an integer of modest size the ratio is the Pochhammer
/// product, which resolves coincident poles exactly. A pole of the
/// denominator alone yields zero; a pole of the numerator alone is an error
/// carrying the pole index.
pub fn gamma_ratio(a: C64, b: C64) -> Result<C64> {
    let d = a - b;
    let n = d.re.round();
    if d.im.abs() <= 1e-13 && (d.re - n).abs() <= 1e-13 && n.abs() <= 64.0 {
        let n = n as i64;
        if n >= 0 {
            let mut p = C64::new(1.0, 0.0);
            for j in 0..n {
                p *= b + j as f64;
            }
            return Ok(p);
        }
        let mut p = C64::new(1.0, 0.0);
        for j in 0..(-n) {
            let f = a + j as f64;
            if f.norm() <= 1e-14 {
                return Err(Error::Pole {
                    factor: "Γ".into(),
                    index: j,
                });
            }
            p *= f;
        }
        return Ok(p.inv());
    }
    if let Some(idx) = pole_index(a) {
        return Err(Error::Pole {
            factor: "Γ".into(),
            index: idx,
        });
    }
    if pole_index(b).is_some() {
        return Ok(C64::new(0.0, 0.0));
    }
    Ok((log_gamma_mod(a)? - log_gamma_mod(b)?).exp())
}

/// A Gamma ratio `Γ(s·ξ + p) / Γ(s·ξ + q)` with `ξ = i z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaRatio {
    pub scale: f64,
    pub num_shift: f64,
    pub den_shift: f64,
}

impl GammaRatio {
    pub const fn new(scale: f64, num_shift: f64, den_shift: f64) -> Self {
        Self {
            scale,
            num_shift,
            den_shift,
        }
    }

    fn arguments(&self, z: C64) -> (C64, C64) {
        let xi = C64::i() * z * self.scale;
        (xi + self.num_shift, xi + self.den_shift)
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        let (a, b) = self.arguments(z);
        gamma_ratio(a, b)
    }
}

/// Half-width of the excluded sector around the negative real axis.
pub const STIRLING_SECTOR_MARGIN: f64 = 0.1;

fn stirling_leading(w: C64) -> C64 {
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI
}

fn stirling_remainder_bound(w: C64) -> f64 {
    let half = 0.5 * w.arg();
    1.0 / (12.0 * w.norm() * half.cos().powi(2))
}

/// Certified upper bound for `Π |Γ(s ξ + p)/Γ(s ξ + q)|` at `ξ = i z`.
///
/// Each Gamma is replaced by its leading Stirling form; the first omitted
/// term bounds the remainder inside the sector `|arg| <= π - 0.1` once
/// multiplied by `sec²(arg/2)`.
pub fn stirling_ratio_bound(z: C64, ratios: &[GammaRatio]) -> Result<f64> {
    let mut log_bound = 0.0;
    for r in ratios {
        let (a, b) = r.arguments(z);
        for w in [a, b] {
            if w.norm() < 1.0 || w.arg().abs() > PI - STIRLING_SECTOR_MARGIN {
                return Err(Error::OutsideStirlingSector { re: w.re, im: w.im });
            }
        }
        log_bound += (stirling_leading(a) - stirling_leading(b)).re
            + stirling_remainder_bound(a)
            + stirling_remainder_bound(b);
    }
    Ok(log_bound.exp())
}
