//! Rank-one Opdam kernels `G_λ(x)`.
//!
//! With `u(x) = G_λ(x)`, `v(x) = G_λ(-x)`, `s = u + v` and `w = u - v`, the
//! eigen-equation `T G_λ = λ G_λ` becomes the first-order system
//!
//! ```text
//! s' = (λ - ρ) w
//! w' = (λ + ρ) s - C(x) w,     C(x) = Σ_j k_j a_j coth(a_j x / 2),
//! ```
//!
//! on `x > 0`, with `s(0) = 2`, `w(0) = 0`. Near the origin `x C(x)` is
//! analytic and the system is solved by a power series (the jet); beyond
//! `x₀` a Taylor-series integrator re-expands `C` around each step's left
//! endpoint. One pass yields both `G_λ(x)` and `G_λ(-x)`.

use std::io::{BufRead, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::root_system::RootSystemData;

type C64 = Complex64;

const JET_ORDER: usize = 40;
const STEP_ORDER: usize = 40;

/// Rank-one data: positive roots `a_j > 0` with multiplicities `k_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankOne {
    pub terms: Vec<(f64, f64)>,
    pub rho: f64,
    pub weyl_order: usize,
}

/// Taylor coefficients of `y coth y` in powers of `y` (odd ones vanish).
fn y_coth_y(order: usize) -> Vec<f64> {
    // cosh y = (sinh y / y) · (y coth y)
    let mut ch = vec![0.0; order + 1];
    let mut sh = vec![0.0; order + 1];
    let mut fact = 1.0;
    for n in 0..=order {
        if n > 0 {
            fact *= n as f64;
        }
        if n % 2 == 0 {
            ch[n] = 1.0 / fact;
            sh[n] = 1.0 / (fact * (n as f64 + 1.0));
        }
    }
    let mut out = vec![0.0; order + 1];
    for n in 0..=order {
        let mut acc = ch[n];
        for i in 1..=n {
            acc -= sh[i] * out[n - i];
        }
        out[n] = acc / sh[0];
    }
    out
}

impl RankOne {
    pub fn from_system(system: &RootSystemData) -> Result<Self> {
        let terms = system.rank_one_terms()?;
        Ok(Self {
            terms,
            rho: system.rho[0],
            weyl_order: system.weyl_order(),
        })
    }

    pub fn new(terms: Vec<(f64, f64)>) -> Self {
        let rho = 0.5 * terms.iter().map(|(a, k)| a * k).sum::<f64>();
        Self {
            terms,
            rho,
            weyl_order: 2,
        }
    }

    pub fn a_max(&self) -> f64 {
        self.terms.iter().map(|t| t.0).fold(0.0, f64::max)
    }

    pub fn is_trivial(&self) -> bool {
        self.terms.iter().all(|t| t.1 == 0.0)
    }

    /// `C(x) = Σ k a coth(a x/2)`.
    pub fn coth_sum(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.1 != 0.0)
            .map(|&(a, k)| {
                let y = a * x;
                // coth(y/2) = (1 + e^{-y}) / (1 - e^{-y})
                k * a * (2.0 - (-(-y).exp_m1())) / (-(-y).exp_m1())
            })
            .sum()
    }

    /// Coefficients of `x C(x)` in powers of `x`.
    pub fn x_coth_series(&self, order: usize) -> Vec<f64> {
        let base = y_coth_y(order);
        let mut out = vec![0.0; order + 1];
        for &(a, k) in &self.terms {
            let mut p = 1.0;
            for (n, b) in base.iter().enumerate() {
                out[n] += 2.0 * k * b * p;
                p *= a / 2.0;
            }
        }
        out
    }

    /// Taylor coefficients of `C(c + h)` in `h`, for `c > 0`.
    pub fn coth_sum_taylor(&self, c: f64, order: usize) -> Vec<f64> {
        let mut out = vec![0.0; order + 1];
        for &(a, k) in &self.terms {
            if k == 0.0 {
                continue;
            }
            let q = (-a * c).exp();
            let mut e = vec![0.0; order + 1];
            let mut t = q;
            for (n, en) in e.iter_mut().enumerate() {
                if n > 0 {
                    t *= -a / n as f64;
                }
                *en = t;
            }
            let d0 = -(-a * c).exp_m1();
            let mut coth = vec![0.0; order + 1];
            for n in 0..=order {
                let num = if n == 0 { 1.0 + e[0] } else { e[n] };
                let mut acc = num;
                for i in 1..=n {
                    acc += e[i] * coth[n - i];
                }
                coth[n] = acc / d0;
            }
            for n in 0..=order {
                out[n] += k * a * coth[n];
            }
        }
        out
    }
}

/// Power-series jet of `(s, w)` at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub s: Vec<C64>,
    pub w: Vec<C64>,
}

impl Jet {
    pub fn order(&self) -> usize {
        self.s.len() - 1
    }

    /// `(G(x), G(-x))` for `x >= 0` inside the radius of validity.
    pub fn eval_pair(&self, x: f64) -> (C64, C64) {
        let (s, w) = (horner(&self.s, x), horner(&self.w, x));
        ((s + w) * 0.5, (s - w) * 0.5)
    }

    /// Taylor coefficients of `G(x)` around 0 (valid for both signs of `x`).
    pub fn kernel_coefficients(&self) -> Vec<C64> {
        self.s.iter().zip(&self.w).map(|(s, w)| (s + w) * 0.5).collect()
    }
}

fn horner(c: &[C64], x: f64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, v| acc * x + v)
}

fn horner_deriv(c: &[C64], x: f64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for n in (1..c.len()).rev() {
        acc = acc * x + c[n] * n as f64;
    }
    acc
}

/// Jet of `(s, w)` at 0 to the given order.
///
/// The recursion divides by `n + 1 + 2Σk_j`, which never vanishes for
/// nonnegative multiplicities.
pub fn seed_series(cfg: &RankOne, lambda: C64, order: usize) -> Result<Jet> {
    if order < 4 {
        return Err(Error::Precondition(format!("jet order {order} < 4")));
    }
    let c = cfg.x_coth_series(order + 1);
    if c[0] < 0.0 {
        return Err(Error::NonConvergent("negative multiplicity in jet recursion".into()));
    }
    let mut s = vec![C64::new(0.0, 0.0); order + 1];
    let mut w = vec![C64::new(0.0, 0.0); order + 1];
    s[0] = C64::new(2.0, 0.0);
    let (lm, lp) = (lambda - cfg.rho, lambda + cfg.rho);
    for n in 0..order {
        s[n + 1] = lm * w[n] / (n as f64 + 1.0);
        let mut acc = lp * s[n];
        for i in 1..=n + 1 {
            acc -= w[n + 1 - i] * c[i];
        }
        w[n + 1] = acc / (n as f64 + 1.0 + c[0]);
    }
    Ok(Jet { s, w })
}

#[derive(Debug, Clone)]
struct Step {
    left: f64,
    right: f64,
    coth: Vec<f64>,
}

/// Step layout and `C` expansions shared by all `λ` with `|λ| <= lambda_max`.
#[derive(Debug, Clone)]
pub struct KernelSolver {
    pub cfg: RankOne,
    pub x_max: f64,
    pub lambda_max: f64,
    pub tolerance: f64,
    pub x0: f64,
    steps: Vec<Step>,
}

/// Dense solution for one `λ` on `[-x_max, x_max]`.
#[derive(Debug, Clone)]
pub struct KernelPath {
    pub lambda: C64,
    jet: Jet,
    x0: f64,
    lefts: Vec<f64>,
    s: Vec<Vec<C64>>,
    w: Vec<Vec<C64>>,
    h: Vec<f64>,
    /// Accumulated truncation estimate at the right end of each step.
    err: Vec<f64>,
    jet_err: f64,
    trivial: bool,
    pub x_max: f64,
}

impl KernelSolver {
    pub fn new(cfg: RankOne, lambda_max: f64, x_max: f64) -> Self {
        let scale = lambda_max.abs() + cfg.rho.abs() + 1.0;
        let a = cfg.a_max().max(1e-3);
        let x0 = (0.25 * 2.0 * std::f64::consts::PI / a).min(2.0 / scale).min(x_max.max(1e-12));
        let h_max = 0.5f64.min(4.0 / scale);
        let mut steps = Vec::new();
        let mut x = x0;
        if !cfg.is_trivial() {
            while x < x_max - 1e-14 {
                let h = h_max.min(x / 3.0).min(x_max - x);
                steps.push(Step {
                    left: x,
                    right: x + h,
                    coth: cfg.coth_sum_taylor(x, STEP_ORDER),
                });
                x += h;
            }
        }
        Self {
            cfg,
            x_max,
            lambda_max,
            tolerance: 1e-10,
            x0,
            steps,
        }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    pub fn solve(&self, lambda: C64) -> Result<KernelPath> {
        if lambda.norm() > self.lambda_max * (1.0 + 1e-12) + 1e-12 {
            return Err(Error::Precondition(format!(
                "|λ| = {} exceeds the solver range {}",
                lambda.norm(),
                self.lambda_max
            )));
        }
        let jet = seed_series(&self.cfg, lambda, JET_ORDER)?;
        let n = JET_ORDER;
        let jet_err = (jet.s[n].norm() + jet.w[n].norm()) * self.x0.powi(n as i32)
            + (jet.s[n - 1].norm() + jet.w[n - 1].norm()) * self.x0.powi(n as i32 - 1);
        let (lm, lp) = (lambda - self.cfg.rho, lambda + self.cfg.rho);
        let mut s0 = horner(&jet.s, self.x0);
        let mut w0 = horner(&jet.w, self.x0);
        let mut path = KernelPath {
            lambda,
            jet,
            x0: self.x0,
            lefts: Vec::with_capacity(self.steps.len()),
            s: Vec::with_capacity(self.steps.len()),
            w: Vec::with_capacity(self.steps.len()),
            h: Vec::with_capacity(self.steps.len()),
            err: Vec::with_capacity(self.steps.len()),
            jet_err,
            trivial: self.cfg.is_trivial(),
            x_max: self.x_max,
        };
        if self.cfg.is_trivial() {
            return Ok(path);
        }
        let mut acc_err = jet_err;
        for st in &self.steps {
            let mut s = vec![C64::new(0.0, 0.0); STEP_ORDER + 1];
            let mut w = vec![C64::new(0.0, 0.0); STEP_ORDER + 1];
            s[0] = s0;
            w[0] = w0;
            for m in 0..STEP_ORDER {
                let mf = m as f64 + 1.0;
                s[m + 1] = lm * w[m] / mf;
                let mut acc = lp * s[m];
                for i in 0..=m {
                    acc -= w[m - i] * st.coth[i];
                }
                w[m + 1] = acc / mf;
            }
            let h = st.right - st.left;
            let nn = STEP_ORDER;
            let tail = (s[nn].norm() + w[nn].norm()) * h.powi(nn as i32)
                + (s[nn - 1].norm() + w[nn - 1].norm()) * h.powi(nn as i32 - 1);
            s0 = horner(&s, h);
            w0 = horner(&w, h);
            acc_err += tail + 1e-16 * (s0.norm() + w0.norm());
            path.lefts.push(st.left);
            path.s.push(s);
            path.w.push(w);
            path.h.push(h);
            path.err.push(acc_err);
        }
        if acc_err > self.tolerance * (1.0 + s0.norm() + w0.norm()) {
            return Err(Error::KernelTolerance {
                estimate: acc_err,
                tolerance: self.tolerance,
            });
        }
        Ok(path)
    }

    /// Relative residual of the ODE at the midpoint of every step.
    pub fn residual(&self, path: &KernelPath) -> f64 {
        let (lm, lp) = (path.lambda - self.cfg.rho, path.lambda + self.cfg.rho);
        let mut worst: f64 = 0.0;
        for (i, &left) in path.lefts.iter().enumerate() {
            for frac in [0.25, 0.5, 0.75] {
                let dx = frac * path.h[i];
                let (s, w) = (horner(&path.s[i], dx), horner(&path.w[i], dx));
                let (ds, dw) = (horner_deriv(&path.s[i], dx), horner_deriv(&path.w[i], dx));
                let c = self.cfg.coth_sum(left + dx);
                let r1 = (ds - lm * w).norm();
                let r2 = (dw - lp * s + w * c).norm();
                let scale = (lp.norm() + 1.0) * (s.norm() + w.norm()) + c.abs() * w.norm();
                worst = worst.max((r1 + r2) / scale);
            }
        }
        worst
    }
}

impl KernelPath {
    fn locate(&self, x: f64) -> Option<usize> {
        if x <= self.x0 || self.lefts.is_empty() {
            return None;
        }
        let i = self.lefts.partition_point(|&l| l <= x);
        Some(i.saturating_sub(1))
    }

    fn eval_sw(&self, ax: f64) -> (C64, C64, C64, C64, f64) {
        match self.locate(ax) {
            None => {
                let j = &self.jet;
                (
                    horner(&j.s, ax),
                    horner(&j.w, ax),
                    horner_deriv(&j.s, ax),
                    horner_deriv(&j.w, ax),
                    self.jet_err,
                )
            }
            Some(i) => {
                let dx = ax - self.lefts[i];
                (
                    horner(&self.s[i], dx),
                    horner(&self.w[i], dx),
                    horner_deriv(&self.s[i], dx),
                    horner_deriv(&self.w[i], dx),
                    self.err[i],
                )
            }
        }
    }

    /// `G_λ(x)` for `|x| <= x_max`.
    pub fn eval(&self, x: f64) -> Result<C64> {
        Ok(self.eval_with_error(x)?.0)
    }

    /// `(G_λ(x), error estimate)`.
    pub fn eval_with_error(&self, x: f64) -> Result<(C64, f64)> {
        let (g, _, e) = self.eval_full(x)?;
        Ok((g, e))
    }

    /// `(G_λ(x), G_λ'(x), error estimate)`.
    pub fn eval_full(&self, x: f64) -> Result<(C64, C64, f64)> {
        if x.abs() > self.x_max * (1.0 + 1e-12) {
            return Err(Error::BeyondXmax {
                x,
                x_max: self.x_max,
            });
        }
        let ax = x.abs();
        if self.trivial {
            let g = (self.lambda * x).exp();
            return Ok((g, self.lambda * g, 0.0));
        }
        let (s, w, ds, dw, e) = self.eval_sw(ax);
        if x >= 0.0 {
            Ok(((s + w) * 0.5, (ds + dw) * 0.5, e))
        } else {
            Ok(((s - w) * 0.5, -(ds - dw) * 0.5, e))
        }
    }

    /// `(G_λ(x), G_λ(-x))` for `x >= 0`.
    pub fn eval_pair(&self, x: f64) -> Result<(C64, C64)> {
        if x.abs() > self.x_max * (1.0 + 1e-12) {
            return Err(Error::BeyondXmax {
                x,
                x_max: self.x_max,
            });
        }
        if self.trivial {
            let g = (self.lambda * x).exp();
            return Ok((g, (-self.lambda * x).exp()));
        }
        let (s, w, ..) = self.eval_sw(x.abs());
        let (p, m) = ((s + w) * 0.5, (s - w) * 0.5);
        Ok(if x >= 0.0 { (p, m) } else { (m, p) })
    }

    pub fn max_error(&self) -> f64 {
        self.err.last().copied().unwrap_or(self.jet_err)
    }
}

/// `G_λ(x)` by a one-off solve.
pub fn eval_kernel_rank1(cfg: &RankOne, lambda: C64, x: f64, x_max: f64) -> Result<C64> {
    if x.abs() > x_max {
        return Err(Error::BeyondXmax { x, x_max });
    }
    let solver = KernelSolver::new(cfg.clone(), lambda.norm(), x_max);
    solver.solve(lambda)?.eval(x)
}

/// Kernel values on a `(λ, x)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTable {
    pub lambdas: Vec<C64>,
    pub xs: Vec<f64>,
    /// Row-major: `values[i * xs.len() + j] = G_{λ_i}(x_j)`.
    pub values: Vec<C64>,
    pub errors: Vec<f64>,
    pub cfg: RankOne,
}

impl KernelTable {
    pub fn build(cfg: &RankOne, lambdas: &[C64], xs: &[f64]) -> Result<Self> {
        let lmax = lambdas.iter().map(|l| l.norm()).fold(0.0, f64::max);
        let xmax = xs.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let solver = KernelSolver::new(cfg.clone(), lmax, xmax.max(1e-9));
        let rows: Vec<Result<Vec<(C64, f64)>>> = lambdas
            .par_iter()
            .map(|&l| {
                let path = solver.solve(l)?;
                xs.iter().map(|&x| path.eval_with_error(x)).collect()
            })
            .collect();
        let mut values = Vec::with_capacity(lambdas.len() * xs.len());
        let mut errors = Vec::with_capacity(lambdas.len() * xs.len());
        for row in rows {
            for (v, e) in row? {
                values.push(v);
                errors.push(e);
            }
        }
        Ok(Self {
            lambdas: lambdas.to_vec(),
            xs: xs.to_vec(),
            values,
            errors,
            cfg: cfg.clone(),
        })
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.values[i * self.xs.len() + j]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// CSV with header `lambda_re,lambda_im,x,g_re,g_im,err`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "lambda_re,lambda_im,x,g_re,g_im,err")?;
        for (i, l) in self.lambdas.iter().enumerate() {
            for (j, x) in self.xs.iter().enumerate() {
                let g = self.get(i, j);
                let e = self.errors[i * self.xs.len() + j];
                writeln!(
                    out,
                    "{:e},{:e},{:e},{:e},{:e},{:e}",
                    l.re, l.im, x, g.re, g.im, e
                )?;
            }
        }
        Ok(())
    }

    /// Reads a table written by [`KernelTable::write_csv`]. Rows must form a
    /// full grid in row-major order.
    pub fn read_csv<R: BufRead>(input: R, cfg: &RankOne) -> Result<Self> {
        let mut lambdas: Vec<C64> = Vec::new();
        let mut xs: Vec<f64> = Vec::new();
        let mut values = Vec::new();
        let mut errors = Vec::new();
        for (ln, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            if ln == 0 || line.trim().is_empty() {
                continue;
            }
            let f: Vec<f64> = line
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", ln + 1)))?;
            if f.len() != 6 {
                return Err(Error::Parse(format!("line {}: expected 6 fields", ln + 1)));
            }
            let l = C64::new(f[0], f[1]);
            if lambdas.last() != Some(&l) {
                lambdas.push(l);
            }
            if lambdas.len() == 1 {
                xs.push(f[2]);
            }
            values.push(C64::new(f[3], f[4]));
            errors.push(f[5]);
        }
        if values.len() != lambdas.len() * xs.len() {
            return Err(Error::Parse("kernel table is not a full grid".into()));
        }
        Ok(Self {
            lambdas,
            xs,
            values,
            errors,
            cfg: cfg.clone(),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub entries: usize,
    pub violations: usize,
    /// Largest `|G| / bound`.
    pub worst_ratio: f64,
    /// Histogram of `log10(bound / |G|)`: `(lower edge, count)` in unit bins.
    pub margin_histogram: Vec<(f64, usize)>,
}

/// Checks `|G_λ(x)| <= |W|^{1/2} e^{|Re λ| |x|}` at every entry.
pub fn verify_kernel_bound(table: &KernelTable) -> BoundReport {
    let sqrt_w = (table.cfg.weyl_order as f64).sqrt();
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    let mut bins: std::collections::BTreeMap<i64, usize> = Default::default();
    for (i, l) in table.lambdas.iter().enumerate() {
        for (j, x) in table.xs.iter().enumerate() {
            let g = table.get(i, j).norm();
            let bound = sqrt_w * (l.re.abs() * x.abs()).exp();
            let ratio = g / bound;
            worst = worst.max(ratio);
            if ratio > 1.0 {
                violations += 1;
            }
            let margin = (bound / g.max(1e-300)).log10().floor() as i64;
            *bins.entry(margin.min(20)).or_default() += 1;
        }
    }
    BoundReport {
        entries: table.len(),
        violations,
        worst_ratio: worst,
        margin_histogram: bins.into_iter().map(|(k, v)| (k as f64, v)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coth_series_matches_direct() {
        let cfg = RankOne::new(vec![(std::f64::consts::SQRT_2, 1.0), (0.7, 0.5)]);
        let c = cfg.x_coth_series(40);
        for &x in &[0.05f64, 0.3, 1.0] {
            let series: f64 = c.iter().enumerate().map(|(n, v)| v * x.powi(n as i32)).sum();
            assert!((series - x * cfg.coth_sum(x)).abs() < 1e-13, "x={x}");
        }
        let t = cfg.coth_sum_taylor(0.8, 30);
        let h: f64 = 0.1;
        let series: f64 = t.iter().enumerate().map(|(n, v)| v * h.powi(n as i32)).sum();
        assert!((series - cfg.coth_sum(0.9)).abs() < 1e-13);
    }

    #[test]
    fn trivial_multiplicity_is_exponential() {
        let cfg = RankOne::new(vec![(std::f64::consts::SQRT_2, 0.0)]);
        for &l in &[C64::new(0.0, 3.0), C64::new(1.5, -2.0)] {
            for &x in &[-2.0, -0.01, 0.0, 0.4, 2.0] {
                let g = eval_kernel_rank1(&cfg, l, x, 2.0).unwrap();
                assert!((g - (l * x).exp()).norm() < 1e-12 * g.norm());
            }
        }
        let jet = seed_series(&cfg, C64::new(0.7, 0.0), 8).unwrap();
        let mut fact = 1.0;
        for (n, c) in jet.kernel_coefficients().iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            assert!((c.re - 0.7f64.powi(n as i32) / fact).abs() < 1e-15);
        }
    }

    #[test]
    fn jet_starts_at_one() {
        let cfg = RankOne::new(vec![(std::f64::consts::SQRT_2, 1.0)]);
        let jet = seed_series(&cfg, C64::new(0.0, 1.0), 6).unwrap();
        assert_eq!(jet.eval_pair(0.0), (C64::new(1.0, 0.0), C64::new(1.0, 0.0)));
        assert!(seed_series(&cfg, C64::new(0.0, 1.0), 3).is_err());
    }

    #[test]
    fn beyond_range_is_rejected() {
        let cfg = RankOne::new(vec![(std::f64::consts::SQRT_2, 1.0)]);
        assert!(matches!(
            eval_kernel_rank1(&cfg, C64::new(0.0, 1.0), 3.0, 2.0),
            Err(Error::BeyondXmax { .. })
        ));
    }
}
