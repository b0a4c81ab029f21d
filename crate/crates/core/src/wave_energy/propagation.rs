//! Physical-space reconstruction of rank-one solutions and the support check.

use num_complex::Complex64;
use serde::Serialize;

use super::energy::wave_factors;
use crate::cherednik_transform::{mirrored, radial_rule, support_radius, SmoothFunction, Transformer};
use crate::error::{Error, Result};
use crate::quadrature::{NeumaierSum, Rule};
use crate::tolerances::FINITE_PROPAGATION;

type C64 = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReconstructionSpec {
    pub lambda_max: f64,
    pub panel_width: f64,
    pub order: usize,
    /// Spacing of the `x` grid.
    pub spacing: f64,
    /// Width of the excluded shell beyond `R + |t|`, in grid cells.
    pub delta_cells: usize,
    /// How far past `R + |t|` the grid extends.
    pub margin: f64,
    /// Largest admissible share of `∫(|𝓕f| + |𝓕g|)|ν|` in the outer tenth.
    pub tail_budget: f64,
}

impl Default for ReconstructionSpec {
    fn default() -> Self {
        Self {
            lambda_max: 60.0,
            panel_width: 0.17,
            order: 16,
            spacing: 0.02,
            delta_cells: 3,
            margin: 1.5,
            tail_budget: 1e-8,
        }
    }
}

/// Spectral data of rank-one initial conditions on a line rule, ready for
/// reconstruction at any time.
#[derive(Debug, Clone)]
pub struct Reconstructor<'a> {
    pub transformer: &'a Transformer,
    pub rule: Rule,
    pub f_hat: Vec<C64>,
    pub g_hat: Vec<C64>,
    pub radius: f64,
    pub c0: f64,
    pub tail: f64,
}

impl<'a> Reconstructor<'a> {
    pub fn new(
        transformer: &'a Transformer,
        f: &dyn SmoothFunction,
        g: &dyn SmoothFunction,
        c0: f64,
        spec: &ReconstructionSpec,
    ) -> Result<Self> {
        let radius = support_radius(f)
            .zip(support_radius(g))
            .map(|(a, b)| a.max(b))
            .ok_or_else(|| Error::Precondition("data must have compact support".into()))?;
        let rule = mirrored(&radial_rule(spec.lambda_max, spec.panel_width, spec.order));
        let mut s = transformer.transform_batch(&[f, g], &rule.nodes)?;
        let g_hat = s.pop().unwrap().forward;
        let f_hat = s.pop().unwrap().forward;
        let nu = transformer.density_on(&rule.nodes)?;
        let (mut all, mut outer) = (NeumaierSum::default(), NeumaierSum::default());
        for (j, (&l, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            let m = w * (f_hat[j].norm() + g_hat[j].norm()) * nu[j].norm();
            all.add(m);
            if l.abs() >= 0.9 * spec.lambda_max {
                outer.add(m);
            }
        }
        let tail = outer.value() / all.value();
        if !(tail <= spec.tail_budget) {
            return Err(Error::TailBudget {
                tail,
                budget: spec.tail_budget,
            });
        }
        Ok(Self {
            transformer,
            rule,
            f_hat,
            g_hat,
            radius,
            c0,
            tail,
        })
    }

    /// `u(t, x)` at each point of `xs`.
    pub fn solution(&self, t: f64, xs: &[f64]) -> Result<Vec<C64>> {
        let values: Vec<C64> = self
            .rule
            .nodes
            .iter()
            .enumerate()
            .map(|(j, &l)| {
                let (c, sinc, _) = wave_factors(t, l.abs());
                self.f_hat[j] * c + self.g_hat[j] * sinc
            })
            .collect();
        self.transformer.inverse(&self.rule, &values, xs, self.c0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PropagationSample {
    pub t: f64,
    /// `R + |t| + δ`.
    pub checked_radius: f64,
    pub peak: f64,
    /// Largest `|u(t,x)|` with `|x| >= R + |t| + δ`.
    pub outside: f64,
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropagationReport {
    pub radius: f64,
    pub delta: f64,
    pub tail: f64,
    pub tolerance: f64,
    pub samples: Vec<PropagationSample>,
    pub pass: bool,
}

/// Reconstructs `u(t,·)` on a uniform grid and measures what lies beyond
/// `R + |t| + δ`.
pub fn finite_propagation_check(
    transformer: &Transformer,
    f: &dyn SmoothFunction,
    g: &dyn SmoothFunction,
    c0: f64,
    times: &[f64],
    spec: &ReconstructionSpec,
) -> Result<PropagationReport> {
    let rec = Reconstructor::new(transformer, f, g, c0, spec)?;
    let delta = spec.delta_cells as f64 * spec.spacing;
    let mut samples = Vec::with_capacity(times.len());
    for &t in times {
        let extent = rec.radius + t.abs() + spec.margin;
        let n = (extent / spec.spacing).round() as i64;
        let xs: Vec<f64> = (-n..=n).map(|j| j as f64 * spec.spacing).collect();
        let u = rec.solution(t, &xs)?;
        let checked_radius = rec.radius + t.abs() + delta;
        let (mut peak, mut outside) = (0.0f64, 0.0f64);
        for (x, v) in xs.iter().zip(&u) {
            peak = peak.max(v.norm());
            if x.abs() >= checked_radius {
                outside = outside.max(v.norm());
            }
        }
        let ratio = outside / peak;
        samples.push(PropagationSample {
            t,
            checked_radius,
            peak,
            outside,
            ratio,
            pass: ratio <= FINITE_PROPAGATION,
        });
    }
    Ok(PropagationReport {
        radius: rec.radius,
        delta,
        tail: rec.tail,
        tolerance: FINITE_PROPAGATION,
        pass: samples.iter().all(|s| s.pass),
        samples,
    })
}
