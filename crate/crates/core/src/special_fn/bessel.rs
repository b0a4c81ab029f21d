//! Bessel functions of real argument for integer and half-integer order.

use std::f64::consts::PI;

use super::gamma::log_gamma;
use num_complex::Complex64;

fn ln_gamma_real(x: f64) -> f64 {
    log_gamma(Complex64::new(x, 0.0))
        .map(|v| v.re)
        .unwrap_or(f64::INFINITY)
}

fn series_j(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let lead = (nu * half.ln() - ln_gamma_real(nu + 1.0)).exp();
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..400 {
        let jf = j as f64;
        term *= q / (jf * (nu + jf));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// `J_{frac + j}(x)` for `j = 0..=nmax`, with `frac` equal to `0` or `1/2`.
/// Computed by Miller's backward recurrence, normalised with the Neumann
/// sum (integer order) or the elementary closed form (half-integer order).
pub fn bessel_j_ladder(frac: f64, nmax: usize, x: f64) -> Vec<f64> {
    assert!(x > 0.0, "ladder needs x > 0");
    assert!(frac == 0.0 || frac == 0.5, "order must be integer or half-integer");
    let top = (nmax as f64).max(x);
    let start = (top + 30.0 + 4.0 * top.sqrt()).ceil() as usize + 2;
    let start = start + (start % 2);
    // p[j + 1] holds the unnormalised J_{frac + j}; p[0] holds J_{frac - 1}.
    let mut p = vec![0.0f64; start + 3];
    p[start + 1] = 1e-300;
    for idx in (0..=start).rev() {
        let mu = frac + idx as f64;
        let mut next = 2.0 * mu / x * p[idx + 1] - p[idx + 2];
        if next.abs() > 1e250 {
            for v in p.iter_mut().skip(idx + 1) {
                *v *= 1e-250;
            }
            next = 2.0 * mu / x * p[idx + 1] - p[idx + 2];
        }
        p[idx] = next;
    }
    let scale = if frac == 0.0 {
        let mut s = p[1];
        let mut j = 2;
        while j + 1 < p.len() {
            s += 2.0 * p[j + 1];
            j += 2;
        }
        1.0 / s
    } else {
        let amp = (2.0 / (PI * x)).sqrt();
        let (sn, cs) = x.sin_cos();
        if sn.abs() >= cs.abs() {
            amp * sn / p[1]
        } else {
            amp * cs / p[0]
        }
    };
    (0..=nmax).map(|j| p[j + 1] * scale).collect()
}

/// `J_ν(x)` for `ν >= 0` an integer or half-integer and `x >= 0`.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x <= 2.0 || x * x <= 4.0 * (nu + 1.0) {
        return series_j(nu, x);
    }
    let frac = nu - nu.floor();
    let n = nu.floor() as usize;
    bessel_j_ladder(frac, n, x)[n]
}

/// Spherical Bessel functions `j_0(y) ..= j_nmax(y)`.
pub fn spherical_bessel_all(nmax: usize, y: f64) -> Vec<f64> {
    let ay = y.abs();
    let parity = |n: usize, v: f64| if y < 0.0 && n % 2 == 1 { -v } else { v };
    if ay == 0.0 {
        return (0..=nmax).map(|n| if n == 0 { 1.0 } else { 0.0 }).collect();
    }
    if ay <= 1.0 {
        let q = -0.5 * ay * ay;
        let mut lead = 1.0;
        return (0..=nmax)
            .map(|n| {
                if n > 0 {
                    lead *= ay / (2 * n + 1) as f64;
                }
                let mut term = 1.0;
                let mut sum = 1.0;
                for k in 1..60 {
                    term *= q / (k as f64 * (2 * n + 2 * k + 1) as f64);
                    sum += term;
                    if term.abs() < 1e-18 * sum.abs() {
                        break;
                    }
                }
                parity(n, lead * sum)
            })
            .collect();
    }
    let amp = (PI / (2.0 * ay)).sqrt();
    bessel_j_ladder(0.5, nmax, ay)
        .into_iter()
        .enumerate()
        .map(|(n, v)| parity(n, amp * v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // J0(5), J1(10), J_{5/2}(3) from standard tables.
        assert!((bessel_j(0.0, 5.0) + 0.177_596_771_314_338_3).abs() < 1e-13);
        assert!((bessel_j(1.0, 10.0) - 0.043_472_746_168_861_44).abs() < 1e-13);
        let x: f64 = 3.0;
        let j52 = (2.0 / (PI * x)).sqrt()
            * ((3.0 / (x * x) - 1.0) * x.sin() - 3.0 * x.cos() / x);
        assert!((bessel_j(2.5, x) - j52).abs() < 1e-13);
    }

    #[test]
    fn series_matches_recurrence_at_switch() {
        for &nu in &[0.0, 1.0, 1.5, 3.5, 6.0] {
            let x = 2.0 * (nu + 1.0f64).sqrt() + 1e-9;
            let a = series_j(nu, x);
            let n = nu.floor() as usize;
            let b = bessel_j_ladder(nu - nu.floor(), n, x)[n];
            assert!((a - b).abs() < 1e-12, "nu={nu}");
        }
    }

    #[test]
    fn spherical_low_orders() {
        for &y in &[0.3, 1.0, 2.5, 17.0, 140.0, -4.0] {
            let j = spherical_bessel_all(3, y);
            let (s, c) = (y.sin(), y.cos());
            let j0 = s / y;
            let j1 = s / (y * y) - c / y;
            let j2 = (3.0 / (y * y) - 1.0) * s / y - 3.0 * c / (y * y);
            assert!((j[0] - j0).abs() < 1e-13, "y={y}");
            assert!((j[1] - j1).abs() < 1e-13, "y={y}");
            assert!((j[2] - j2).abs() < 1e-12, "y={y}");
        }
    }
}
