//! Test functions on the line with analytic derivatives.

use std::sync::Arc;

use num_complex::Complex64;

type C64 = Complex64;

/// A function on the line with derivatives available in closed form.
pub trait SmoothFunction: Send + Sync {
    /// `f^{(n)}(x)` for `n <= max_derivative()`.
    fn deriv(&self, x: f64, n: usize) -> C64;

    fn value(&self, x: f64) -> C64 {
        self.deriv(x, 0)
    }

    fn max_derivative(&self) -> usize;

    /// Interval outside which the function vanishes, if compactly supported.
    fn support(&self) -> Option<(f64, f64)>;

    /// Points where smoothness drops (edges of polynomial pieces).
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

pub type SharedFn = Arc<dyn SmoothFunction>;

fn falling(m: u32, i: usize) -> f64 {
    (0..i).map(|j| (m as f64) - j as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `p(y) (1 - y²)^m` with `y = (x - c)/w` on `|y| < 1`, zero outside.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyBump {
    pub center: f64,
    pub half_width: f64,
    pub order: u32,
    /// Coefficients of `p` in powers of `y`.
    pub poly: Vec<C64>,
}

impl PolyBump {
    pub fn new(center: f64, half_width: f64, order: u32) -> Self {
        Self {
            center,
            half_width,
            order,
            poly: vec![C64::new(1.0, 0.0)],
        }
    }

    pub fn with_poly(mut self, poly: Vec<C64>) -> Self {
        self.poly = poly;
        self
    }

    fn poly_deriv(&self, y: f64, n: usize) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (j, c) in self.poly.iter().enumerate().skip(n).rev() {
            acc = acc * y + c * falling(j as u32, n);
        }
        acc
    }
}

impl SmoothFunction for PolyBump {
    fn deriv(&self, x: f64, n: usize) -> C64 {
        let y = (x - self.center) / self.half_width;
        if y.abs() >= 1.0 {
            return C64::new(0.0, 0.0);
        }
        let m = self.order;
        let (a, b) = (1.0 - y, 1.0 + y);
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..=n.min(m as usize) {
            let di = if i % 2 == 0 { 1.0 } else { -1.0 } * falling(m, i) * a.powi(m as i32 - i as i32);
            for j in 0..=(n - i).min(m as usize) {
                let l = n - i - j;
                let dj = falling(m, j) * b.powi(m as i32 - j as i32);
                let coef = binomial(n, i) * binomial(n - i, j);
                acc += self.poly_deriv(y, l) * (coef * di * dj);
            }
        }
        acc / self.half_width.powi(n as i32)
    }

    fn max_derivative(&self) -> usize {
        (self.order as usize).saturating_sub(1)
    }

    fn support(&self) -> Option<(f64, f64)> {
        Some((self.center - self.half_width, self.center + self.half_width))
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![self.center - self.half_width, self.center + self.half_width]
    }
}

/// `exp(-((x - c)/s)²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian {
    pub center: f64,
    pub width: f64,
}

impl SmoothFunction for Gaussian {
    fn deriv(&self, x: f64, n: usize) -> C64 {
        let y = (x - self.center) / self.width;
        // d^n/dy^n e^{-y²} = (-1)^n H_n(y) e^{-y²}
        let (mut h0, mut h1) = (1.0, 2.0 * y);
        let h = match n {
            0 => h0,
            _ => {
                for j in 1..n {
                    let h2 = 2.0 * y * h1 - 2.0 * j as f64 * h0;
                    h0 = h1;
                    h1 = h2;
                }
                h1
            }
        };
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        C64::new(sign * h * (-y * y).exp() / self.width.powi(n as i32), 0.0)
    }

    fn max_derivative(&self) -> usize {
        usize::MAX
    }

    fn support(&self) -> Option<(f64, f64)> {
        None
    }
}

/// `x ↦ f(-x)`.
#[derive(Clone)]
pub struct Reflected(pub SharedFn);

impl SmoothFunction for Reflected {
    fn deriv(&self, x: f64, n: usize) -> C64 {
        let v = self.0.deriv(-x, n);
        if n % 2 == 0 {
            v
        } else {
            -v
        }
    }

    fn max_derivative(&self) -> usize {
        self.0.max_derivative()
    }

    fn support(&self) -> Option<(f64, f64)> {
        self.0.support().map(|(a, b)| (-b, -a))
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.0.breakpoints().into_iter().map(|b| -b).collect()
    }
}

/// `Σ c_j f_j`.
#[derive(Clone, Default)]
pub struct LinearCombination(pub Vec<(C64, SharedFn)>);

impl SmoothFunction for LinearCombination {
    fn deriv(&self, x: f64, n: usize) -> C64 {
        self.0.iter().map(|(c, f)| c * f.deriv(x, n)).sum()
    }

    fn max_derivative(&self) -> usize {
        self.0.iter().map(|(_, f)| f.max_derivative()).min().unwrap_or(usize::MAX)
    }

    fn support(&self) -> Option<(f64, f64)> {
        let mut out: Option<(f64, f64)> = None;
        for (_, f) in &self.0 {
            let (a, b) = f.support()?;
            out = Some(match out {
                None => (a, b),
                Some((lo, hi)) => (lo.min(a), hi.max(b)),
            });
        }
        Some(out.unwrap_or((0.0, 0.0)))
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.0.iter().flat_map(|(_, f)| f.breakpoints()).collect()
    }
}

/// Largest `|x|` in the support, or `None` for non-compact functions.
pub fn support_radius(f: &dyn SmoothFunction) -> Option<f64> {
    f.support().map(|(a, b)| a.abs().max(b.abs()))
}

/// `(f(x) - f(-x)) / x`, continued to `x = 0`.
pub fn odd_quotient(f: &dyn SmoothFunction, x: f64) -> C64 {
    if x.abs() >= SMALL {
        return (f.value(x) - f.value(-x)) / x;
    }
    // f(x) - f(-x) = x ∫_{-1}^{1} f'(s x) ds
    split_gauss(f, x, |s, f, x| f.deriv(s * x, 1))
}

/// Derivative of [`odd_quotient`]; needs `f''`.
pub fn odd_quotient_deriv(f: &dyn SmoothFunction, x: f64) -> C64 {
    if x.abs() >= SMALL {
        let e = (f.value(x) - f.value(-x)) / x;
        return ((f.deriv(x, 1) + f.deriv(-x, 1)) - e) / x;
    }
    split_gauss(f, x, |s, f, x| f.deriv(s * x, 2) * s)
}

const SMALL: f64 = 1e-2;

fn split_gauss(
    f: &dyn SmoothFunction,
    x: f64,
    integrand: impl Fn(f64, &dyn SmoothFunction, f64) -> C64,
) -> C64 {
    let (gx, gw) = crate::quadrature::gauss_legendre(24);
    let mut cuts = vec![-1.0, 1.0];
    if x != 0.0 {
        for b in f.breakpoints() {
            let s = b / x;
            if s.abs() < 1.0 {
                cuts.push(s);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    let mut acc = C64::new(0.0, 0.0);
    for w in cuts.windows(2) {
        let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
        for (t, wt) in gx.iter().zip(&gw) {
            acc += integrand(mid + half * t, f, x) * (half * wt);
        }
    }
    acc
}
