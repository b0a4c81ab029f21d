//! Functions known only on a symmetric grid.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use super::functions::SmoothFunction;
use crate::error::{Error, Result};

type C64 = Complex64;

const STENCIL: usize = 9;

/// Finite-difference weights (Fornberg): `w[k][j]` is the weight of node `j`
/// for the `k`-th derivative at `x0`.
pub fn fornberg_weights(x0: f64, nodes: &[f64], max_deriv: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_deriv + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(max_deriv);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Values on a symmetric grid, interpolated by local degree-8 polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub xs: Vec<f64>,
    pub values: Vec<C64>,
    /// Radius outside which the samples vanish.
    pub support_radius: f64,
}

impl SampledFunction {
    /// Requires at least nine points, strictly increasing, symmetric about 0.
    pub fn new(xs: Vec<f64>, values: Vec<C64>, support_radius: f64) -> Result<Self> {
        let n = xs.len();
        if n < STENCIL || values.len() != n {
            return Err(Error::Precondition(format!(
                "sampled function needs at least {STENCIL} points and one value per point"
            )));
        }
        for i in 0..n {
            if i > 0 && xs[i] <= xs[i - 1] {
                return Err(Error::Precondition("grid must be strictly increasing".into()));
            }
            if (xs[i] + xs[n - 1 - i]).abs() > 1e-12 * (1.0 + xs[i].abs()) {
                return Err(Error::Precondition("grid must be symmetric about 0".into()));
            }
        }
        Ok(Self {
            xs,
            values,
            support_radius,
        })
    }

    /// Samples `f` on `xs`.
    pub fn from_function(f: &dyn SmoothFunction, xs: Vec<f64>) -> Result<Self> {
        let values = xs.iter().map(|&x| f.value(x)).collect();
        let radius = f
            .support()
            .map(|(a, b)| a.abs().max(b.abs()))
            .unwrap_or_else(|| xs.last().copied().unwrap_or(0.0));
        Self::new(xs, values, radius)
    }

    /// Uniform symmetric grid `-X, …, X` with `2n + 1` points.
    pub fn uniform_grid(x_max: f64, n: usize) -> Vec<f64> {
        (0..=2 * n)
            .map(|i| x_max * (i as f64 - n as f64) / n as f64)
            .collect()
    }

    fn window(&self, x: f64) -> usize {
        let i = self.xs.partition_point(|&g| g < x);
        let half = STENCIL / 2;
        i.saturating_sub(half).min(self.xs.len() - STENCIL)
    }

    /// CSV with header `x,re,im`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,re,im")?;
        for (x, v) in self.xs.iter().zip(&self.values) {
            writeln!(out, "{:.17e},{:.17e},{:.17e}", x, v.re, v.im)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let rows = super::read_triples(input, "x,re,im")?;
        let xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let values: Vec<C64> = rows.iter().map(|r| C64::new(r.1, r.2)).collect();
        let radius = xs
            .iter()
            .zip(&values)
            .filter(|(_, v)| v.norm() > 0.0)
            .map(|(x, _)| x.abs())
            .fold(0.0, f64::max);
        Self::new(xs, values, radius)
    }
}

impl SmoothFunction for SampledFunction {
    fn deriv(&self, x: f64, n: usize) -> C64 {
        let (lo, hi) = (self.xs[0], *self.xs.last().unwrap());
        if x < lo || x > hi || x.abs() > self.support_radius {
            return C64::new(0.0, 0.0);
        }
        let start = self.window(x);
        let nodes = &self.xs[start..start + STENCIL];
        let w = fornberg_weights(x, nodes, n);
        w[n].iter()
            .zip(&self.values[start..start + STENCIL])
            .map(|(wi, v)| v * wi)
            .sum()
    }

    fn max_derivative(&self) -> usize {
        2
    }

    fn support(&self) -> Option<(f64, f64)> {
        Some((-self.support_radius, self.support_radius))
    }
}
