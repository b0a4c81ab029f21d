//! The flat one-dimensional wave equation, solved by d'Alembert's formula.

use serde::Serialize;

use crate::cherednik_transform::SmoothFunction;
use crate::error::{Error, Result};
use crate::quadrature::{NeumaierSum, Rule};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalEnergies {
    pub t: f64,
    pub kinetic: f64,
    pub potential: f64,
}

/// `(u_t, u_x)` at `(t, x)` for `u = ½(f(x+t) + f(x-t)) + ½∫_{x-t}^{x+t} g`.
pub fn dalembert_gradient(f: &dyn SmoothFunction, g: &dyn SmoothFunction, t: f64, x: f64) -> (f64, f64) {
    let (fp, fm) = (f.deriv(x + t, 1).re, f.deriv(x - t, 1).re);
    let (gp, gm) = (g.value(x + t).re, g.value(x - t).re);
    (0.5 * (fp - fm) + 0.5 * (gp + gm), 0.5 * (fp + fm) + 0.5 * (gp - gm))
}

/// `K = ½∫u_t²`, `P = ½∫u_x²` for real compactly supported data.
pub fn dalembert_energies(f: &dyn SmoothFunction, g: &dyn SmoothFunction, t: f64) -> Result<ClassicalEnergies> {
    let mut breaks = Vec::new();
    for h in [f, g] {
        let (a, b) = h
            .support()
            .ok_or_else(|| Error::Precondition("d'Alembert oracle needs compact support".into()))?;
        for p in [a, b] {
            breaks.push(p - t);
            breaks.push(p + t);
        }
        for p in h.breakpoints() {
            breaks.push(p - t);
            breaks.push(p + t);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let mut fine = Vec::new();
    for pair in breaks.windows(2) {
        let n = ((pair[1] - pair[0]) / 0.05).ceil().max(1.0) as usize;
        for j in 0..n {
            fine.push(pair[0] + (pair[1] - pair[0]) * j as f64 / n as f64);
        }
    }
    fine.push(*breaks.last().unwrap());
    let rule = Rule::composite(&fine, 20);
    let (mut k, mut p) = (NeumaierSum::default(), NeumaierSum::default());
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let (ut, ux) = dalembert_gradient(f, g, t, x);
        k.add(w * ut * ut);
        p.add(w * ux * ux);
    }
    Ok(ClassicalEnergies {
        t,
        kinetic: 0.5 * k.value(),
        potential: 0.5 * p.value(),
    })
}
