//! Gauss hypergeometric function `₂F₁(a, b; c; z)` for complex parameters.
//!
//! The power series is summed directly for `|z| <= 0.8`. Elsewhere one of
//! the Pfaff or `1 - z` connection formulas maps the argument into that
//! disc. When `c - a - b` is within `1e-6` of an integer the `1 - z`
//! formula is evaluated at `b ± δ`, `b ± 2δ` and Richardson-extrapolated.

use num_complex::Complex64;

use super::gamma::{log_gamma_mod, pole_index, recip_gamma};
use crate::error::{Error, Result};

type C64 = Complex64;

const DISC: f64 = 0.8;
const MAX_TERMS: usize = 20_000;
const DEGENERATE_GAP: f64 = 1e-6;
const PERTURBATION: f64 = 1e-3;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn series(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    let mut sum = one();
    let mut term = one();
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let num = (a + nf) * (b + nf);
        if num.norm() == 0.0 {
            return Ok(sum);
        }
        let den = (c + nf) * (nf + 1.0);
        if den.norm() == 0.0 {
            return Err(Error::HypergeometricPole(c.re));
        }
        term = term * num / den * z;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergent(format!(
        "2F1({a}, {b}; {c}; {z}) after {MAX_TERMS} terms"
    )))
}

fn gamma(z: C64) -> Result<C64> {
    Ok(log_gamma_mod(z)?.exp())
}

/// Connection formula around `z = 1`, assuming `c - a - b` is not an integer.
fn around_one(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    let s = c - a - b;
    let w = one() - z;
    let gc = gamma(c)?;
    let t1 = gc * gamma(s)? * recip_gamma(c - a) * recip_gamma(c - b);
    let t2 = gc * gamma(-s)? * recip_gamma(a) * recip_gamma(b);
    let mut out = C64::new(0.0, 0.0);
    if t1.norm() != 0.0 {
        out += t1 * series(a, b, one() - s, w)?;
    }
    if t2.norm() != 0.0 {
        out += t2 * w.powc(s) * series(c - a, c - b, s + 1.0, w)?;
    }
    Ok(out)
}

fn near_integer(s: C64) -> bool {
    s.im.abs() < DEGENERATE_GAP && (s.re - s.re.round()).abs() < DEGENERATE_GAP
}

fn around_one_regularized(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    if !near_integer(c - a - b) {
        return around_one(a, b, c, z);
    }
    let avg = |d: f64| -> Result<C64> {
        Ok((around_one(a, b + d, c, z)? + around_one(a, b - d, c, z)?) * 0.5)
    };
    let h1 = avg(PERTURBATION)?;
    let h2 = avg(2.0 * PERTURBATION)?;
    Ok((h1 * 4.0 - h2) / 3.0)
}

/// `₂F₁(a, b; c; z)`.
pub fn gauss_2f1(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    if pole_index(c).is_some() {
        return Err(Error::HypergeometricPole(c.re));
    }
    if z.norm() == 0.0 {
        return Ok(one());
    }
    if z.norm() <= DISC {
        return series(a, b, c, z);
    }
    let w = one() - z;
    let pfaff = z / (z - 1.0);
    if pfaff.norm() <= DISC {
        return Ok(w.powc(-a) * series(a, c - b, c, pfaff)?);
    }
    if w.norm() <= DISC {
        return around_one_regularized(a, b, c, z);
    }
    let inv = w.inv();
    if inv.norm() <= DISC {
        // Pfaff to z/(z-1), whose distance to 1 is 1/|1-z|.
        return Ok(w.powc(-a) * around_one_regularized(a, c - b, c, pfaff)?);
    }
    Err(Error::NonConvergent(format!(
        "no transformation covers z = {z}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn elementary_closed_forms() {
        // 2F1(1,1;2;z) = -ln(1-z)/z
        for &z in &[c(0.3, 0.0), c(-0.9, 0.0), c(-5.0, 0.0), c(0.6, 0.5), c(-30.0, 0.0)] {
            let got = gauss_2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), z).unwrap();
            let want = -(one() - z).ln() / z;
            assert!((got - want).norm() < 1e-11 * want.norm(), "z={z}: {got} vs {want}");
        }
        // 2F1(a,b;b;z) = (1-z)^{-a}
        let z = c(-7.0, 0.0);
        let got = gauss_2f1(c(0.4, 0.0), c(1.3, 0.0), c(1.3, 0.0), z).unwrap();
        assert!((got - (one() - z).powf(-0.4)).norm() < 1e-12);
    }

    #[test]
    fn terminating_series() {
        // 2F1(-2, b; c; z) = 1 - 2bz/c + b(b+1)z^2/(c(c+1))
        let (b, cc, z) = (c(0.7, 0.0), c(1.5, 0.0), c(-12.0, 0.0));
        let got = gauss_2f1(c(-2.0, 0.0), b, cc, z).unwrap();
        let want = one() - b * z * 2.0 / cc + b * (b + 1.0) * z * z / (cc * (cc + 1.0));
        assert!((got - want).norm() < 1e-10 * want.norm());
    }

    #[test]
    fn pole_in_c() {
        assert!(matches!(
            gauss_2f1(one(), one(), c(-1.0, 0.0), c(0.2, 0.0)),
            Err(Error::HypergeometricPole(_))
        ));
    }
}
