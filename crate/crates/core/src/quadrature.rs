//! Gauss-Legendre rules, composite panels, compensated sums and a
//! Filon-Legendre rule for `∫ f(r) e^{iωr} dr`.

use num_complex::Complex64;

use crate::special_fn::spherical_bessel_all;

type C64 = Complex64;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// `P_0(z) ..= P_nmax(z)`.
pub fn legendre_all(nmax: usize, z: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(1.0);
    if nmax >= 1 {
        out.push(z);
    }
    for k in 2..=nmax {
        let kf = k as f64;
        let v = ((2.0 * kf - 1.0) * z * out[k - 1] - (kf - 1.0) * out[k - 2]) / kf;
        out.push(v);
    }
    out
}

/// A quadrature rule as flat node and weight arrays.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// Composite Gauss rule with `n` nodes on each interval between
    /// consecutive `breaks`.
    pub fn composite(breaks: &[f64], n: usize) -> Self {
        let (gx, gw) = gauss_legendre(n);
        let mut rule = Rule::default();
        for pair in breaks.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, w) in gx.iter().zip(&gw) {
                rule.nodes.push(mid + half * x);
                rule.weights.push(half * w);
            }
        }
        rule
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let mut s = NeumaierSum::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s.add(w * f(*x));
        }
        s.value()
    }
}

/// Break points of uniform panels of width at most `max_width` on `[a, b]`.
pub fn uniform_breaks(a: f64, b: f64, max_width: f64) -> Vec<f64> {
    let n = ((b - a) / max_width).ceil().max(1.0) as usize;
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

/// Geometrically graded break points `0, a q^{J-1}, …, a q, a`.
pub fn graded_breaks(a: f64, ratio: f64, levels: usize) -> Vec<f64> {
    let mut out = vec![0.0];
    for j in (0..levels).rev() {
        out.push(a * ratio.powi(j as i32));
    }
    out
}

/// Neumaier-compensated running sum of `f64` terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated complex sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn add(&mut self, v: C64) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    pub fn value(&self) -> C64 {
        C64::new(self.re.value(), self.im.value())
    }
}

pub fn neumaier(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = NeumaierSum::default();
    values.into_iter().for_each(|v| s.add(v));
    s.value()
}

pub fn neumaier_c(values: impl IntoIterator<Item = C64>) -> C64 {
    let mut s = ComplexSum::default();
    values.into_iter().for_each(|v| s.add(v));
    s.value()
}

/// Filon-type rule: interpolates `f` on one panel by the Legendre series
/// through its Gauss nodes and integrates `P_j(s) e^{iωr}` exactly.
#[derive(Debug, Clone)]
pub struct FilonLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `poly[j][i] = (2j+1)/2 · w_i · P_j(x_i)`.
    projection: Vec<Vec<f64>>,
}

impl FilonLegendre {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        let mut projection = vec![vec![0.0; n]; n];
        for (i, (&x, &w)) in nodes.iter().zip(&weights).enumerate() {
            let p = legendre_all(n - 1, x);
            for j in 0..n {
                projection[j][i] = (2 * j + 1) as f64 / 2.0 * w * p[j];
            }
        }
        Self {
            nodes,
            weights,
            projection,
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Gauss nodes mapped to `[a, b]`.
    pub fn panel_nodes(&self, a: f64, b: f64) -> Vec<f64> {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes.iter().map(|x| mid + half * x).collect()
    }

    pub fn reference_weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f(r) e^{iωr} dr` from the samples of `f` at `panel_nodes(a, b)`.
    pub fn integrate(&self, a: f64, b: f64, samples: &[C64], omega: f64) -> C64 {
        let n = self.nodes.len();
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let y = omega * half;
        let jn = spherical_bessel_all(n - 1, y);
        let mut acc = ComplexSum::default();
        let mut ipow = C64::new(1.0, 0.0);
        for j in 0..n {
            let cj = neumaier_c(
                self.projection[j]
                    .iter()
                    .zip(samples)
                    .map(|(p, s)| *s * *p),
            );
            acc.add(cj * ipow * (2.0 * jn[j]));
            ipow *= C64::i();
        }
        acc.value() * C64::from_polar(half, omega * mid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rule_exact_for_polynomials() {
        let (x, w) = gauss_legendre(7);
        for deg in 0..14 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "deg {deg}");
        }
    }

    #[test]
    fn large_rules_sum_to_two() {
        for n in [20, 40, 64] {
            let (_, w) = gauss_legendre(n);
            assert!((neumaier(w) - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn composite_graded_rule_handles_power_singularity() {
        let mut breaks = graded_breaks(0.5, 0.15, 12);
        breaks.extend(uniform_breaks(0.5, 1.0, 0.5).into_iter().skip(1));
        let rule = Rule::composite(&breaks, 20);
        // ∫_0^1 x^{0.3} dx
        let got = rule.integrate(|x| x.powf(0.3));
        assert!((got - 1.0 / 1.3).abs() < 1e-11);
    }

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        assert_eq!(neumaier([1.0, 1e100, 1.0, -1e100]), 2.0);
    }

    #[test]
    fn filon_matches_closed_form() {
        let rule = FilonLegendre::new(20);
        let (a, b) = (0.3, 1.7);
        let nodes = rule.panel_nodes(a, b);
        let samples: Vec<C64> = nodes.iter().map(|&r| C64::new(r * r, 0.0)).collect();
        for &omega in &[0.0, 0.5, 7.0, 300.0] {
            let got = rule.integrate(a, b, &samples, omega);
            // ∫ r² e^{iωr} dr via high-order Gauss on fine panels.
            let fine = Rule::composite(&uniform_breaks(a, b, 0.002), 20);
            let re = fine.integrate(|r| r * r * (omega * r).cos());
            let im = fine.integrate(|r| r * r * (omega * r).sin());
            assert!((got - C64::new(re, im)).norm() < 1e-12, "omega {omega}: {got}");
        }
    }
}
