use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::energy::{energies, energy_difference, energy_scale};
use super::state::{DataMode, SpectralState};
use crate::error::{Error, Result};
use crate::fit::{fit_line, fit_loglog, LineFit};
use crate::plancherel::{sphere_directions, strip_width, SpectralDensity};
use crate::tolerances::{
    CONSERVATION, DUAL_PATH, EXPONENTIAL_RATE_FRACTION, EXPONENTIAL_R_SQUARED, FLOOR_FACTOR,
    NON_DEGENERACY, POLYNOMIAL_SLOPE_SLACK, STRICT_EQUIPARTITION, STRICT_MARGIN,
};

/// One time point of an energy trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergySample {
    pub t: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub total: f64,
    /// `P - K` from the energies.
    pub difference: f64,
    /// `P - K` from the radial integral, Gauss and Filon paths.
    pub difference_gauss: f64,
    pub difference_filon: f64,
    pub floor: f64,
    /// `|difference| / E(0)`.
    pub relative_difference: f64,
    /// `|difference - difference_gauss| / E(0)`.
    pub dual_path: f64,
    pub imaginary: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyTrace {
    pub mode: DataMode,
    pub c0: f64,
    pub initial_energy: f64,
    pub samples: Vec<EnergySample>,
}

impl EnergyTrace {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    /// `max |E(t) - E(0)| / E(0)`.
    pub fn drift(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.total - self.initial_energy).abs() / self.initial_energy)
            .fold(0.0, f64::max)
    }

    pub fn max_dual_path(&self) -> f64 {
        self.samples.iter().map(|s| s.dual_path).fold(0.0, f64::max)
    }

    /// Columns `t, K, P, E, P_minus_K`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,K,P,E,P_minus_K")?;
        for s in &self.samples {
            writeln!(
                out,
                "{:e},{:e},{:e},{:e},{:e}",
                s.t, s.kinetic, s.potential, s.total, s.difference
            )?;
        }
        Ok(())
    }

    /// Columns `t, P_minus_K, gauss, filon, floor, relative`.
    pub fn write_difference_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,P_minus_K,gauss,filon,floor,relative")?;
        for s in &self.samples {
            writeln!(
                out,
                "{:e},{:e},{:e},{:e},{:e},{:e}",
                s.t, s.difference, s.difference_gauss, s.difference_filon, s.floor, s.relative_difference
            )?;
        }
        Ok(())
    }
}

/// Energies and both `P - K` paths at every time, evaluated independently.
pub fn trace(state: &SpectralState, times: &[f64]) -> Result<EnergyTrace> {
    let e0 = energies(state, 0.0)?.total;
    if !(e0 > 0.0) {
        return Err(Error::Precondition(format!("initial energy {e0} is not positive")));
    }
    let scale = energy_scale(state);
    let samples = times
        .par_iter()
        .map(|&t| {
            let e = energies(state, t)?;
            let d = energy_difference(state, t)?;
            let difference = e.potential - e.kinetic;
            Ok(EnergySample {
                t,
                kinetic: e.kinetic,
                potential: e.potential,
                total: e.total,
                difference,
                difference_gauss: d.gauss,
                difference_filon: d.filon,
                floor: d.floor + 16.0 * f64::EPSILON * scale,
                relative_difference: difference.abs() / e0,
                dual_path: (difference - d.gauss).abs() / e0,
                imaginary: e.imaginary.max(d.imaginary),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnergyTrace {
        mode: state.mode,
        c0: state.c0,
        initial_energy: e0,
        samples,
    })
}

/// `n` equally spaced times on `[a, b]`.
pub fn linear_times(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![a];
    }
    (0..n).map(|j| a + (b - a) * j as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConservationReport {
    pub drift: f64,
    pub dual_path: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub trace: EnergyTrace,
}

pub fn conservation_experiment(state: &SpectralState, times: &[f64]) -> Result<ConservationReport> {
    let trace = trace(state, times)?;
    let drift = trace.drift();
    let dual_path = trace.max_dual_path();
    Ok(ConservationReport {
        drift,
        dual_path,
        tolerance: CONSERVATION,
        pass: drift <= CONSERVATION && dual_path <= DUAL_PATH,
        trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrictReport {
    pub radius: f64,
    /// `R(1 + ε)`.
    pub threshold: f64,
    /// `max |P-K|/E` over sampled `|t| >= threshold`.
    pub max_beyond: f64,
    /// `max |P-K|/E` over sampled `|t| < R`.
    pub max_inside: f64,
    pub degenerate: bool,
    pub tolerance: f64,
    pub dual_path: f64,
    pub pass: bool,
    pub trace: EnergyTrace,
}

fn is_whole(k: f64) -> bool {
    k >= 0.0 && (k - k.round()).abs() < 1e-12
}

pub fn strict_equipartition_experiment(state: &SpectralState, times: &[f64]) -> Result<StrictReport> {
    if state.dim % 2 == 0 {
        return Err(Error::Precondition(format!(
            "strict equipartition needs odd dimension, got {}",
            state.dim
        )));
    }
    if let Some(&k) = state.system.multiplicities.iter().find(|&&k| !is_whole(k)) {
        return Err(Error::NonIntegerMultiplicity(k));
    }
    let trace = trace(state, times)?;
    let r = state.radius;
    let threshold = r * (1.0 + STRICT_MARGIN);
    let (mut beyond, mut inside) = (0.0f64, 0.0f64);
    for s in &trace.samples {
        if s.t.abs() >= threshold {
            beyond = beyond.max(s.relative_difference);
        } else if s.t.abs() < r {
            inside = inside.max(s.relative_difference);
        }
    }
    let degenerate = !(inside > NON_DEGENERACY);
    let dual_path = trace.max_dual_path();
    Ok(StrictReport {
        radius: r,
        threshold,
        max_beyond: beyond,
        max_inside: inside,
        degenerate,
        tolerance: STRICT_EQUIPARTITION,
        dual_path,
        pass: beyond <= STRICT_EQUIPARTITION && !degenerate && dual_path <= DUAL_PATH,
        trace,
    })
}

/// Points of the trace with `|P-K|` at least `FLOOR_FACTOR` times the floor.
fn fit_window(trace: &EnergyTrace) -> (Vec<f64>, Vec<f64>) {
    trace
        .samples
        .iter()
        .filter(|s| s.difference.abs() >= FLOOR_FACTOR * s.floor && s.difference != 0.0)
        .map(|s| (s.t.abs(), s.difference.abs()))
        .unzip()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentialReport {
    pub gamma0: f64,
    /// Fitted `-d log|P-K| / dt`.
    pub rate: f64,
    pub gamma_fit: f64,
    pub required_rate: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub fit: LineFit,
    pub pass: bool,
    pub trace: EnergyTrace,
}

/// Strip width of the density attached to the state.
pub fn state_strip_width(state: &SpectralState) -> Option<f64> {
    let d = SpectralDensity::new(&state.system);
    strip_width(&d, &sphere_directions(state.dim, 720)).gamma0
}

pub fn exponential_decay_experiment(state: &SpectralState, times: &[f64]) -> Result<ExponentialReport> {
    if state.dim % 2 == 0 {
        return Err(Error::Precondition(format!(
            "exponential decay needs odd dimension, got {}",
            state.dim
        )));
    }
    let gamma0 = state_strip_width(state).ok_or_else(|| {
        Error::Precondition("multiplicities are integers: the strip width is infinite".into())
    })?;
    let trace = trace(state, times)?;
    let (t, y) = fit_window(&trace);
    if t.len() < 3 {
        return Err(Error::Precondition(format!(
            "|P-K| reaches the quadrature floor with only {} usable times; enlarge the spectral bandwidth of the data",
            t.len()
        )));
    }
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let fit = fit_line(&t, &ly).ok_or_else(|| Error::Quadrature("degenerate fit window".into()))?;
    let rate = -fit.slope;
    let required_rate = 2.0 * EXPONENTIAL_RATE_FRACTION * gamma0;
    Ok(ExponentialReport {
        gamma0,
        rate,
        gamma_fit: 0.5 * rate,
        required_rate,
        r_squared: fit.r_squared,
        window: (t[0], *t.last().unwrap()),
        fit,
        pass: rate >= required_rate && fit.r_squared >= EXPONENTIAL_R_SQUARED,
        trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolynomialReport {
    pub dim: usize,
    /// `|R₀⁺|`.
    pub divisor_degree: usize,
    pub slope: f64,
    pub r_squared: f64,
    /// `-(d + |R₀⁺|)`.
    pub bound: f64,
    /// `-(d + 2|R₀⁺|)`, the exponent expected for W-invariant data.
    pub invariant_exponent: f64,
    pub required_slope: f64,
    pub beats_bound: bool,
    pub reaches_invariant_exponent: bool,
    pub window: (f64, f64),
    pub fit: LineFit,
    pub pass: bool,
    pub trace: EnergyTrace,
}

pub fn polynomial_decay_experiment(state: &SpectralState, times: &[f64]) -> Result<PolynomialReport> {
    if state.dim % 2 == 1 {
        return Err(Error::Precondition(format!(
            "polynomial decay needs even dimension, got {}",
            state.dim
        )));
    }
    if state.mode != DataMode::ModelProfile {
        return Err(Error::Precondition("polynomial decay runs on model-profile data".into()));
    }
    let trace = trace(state, times)?;
    let (t, y) = fit_window(&trace);
    if t.len() < 3 {
        return Err(Error::Quadrature(format!(
            "only {} times lie above the quadrature floor",
            t.len()
        )));
    }
    let fit = fit_loglog(&t, &y).ok_or_else(|| Error::Quadrature("degenerate fit window".into()))?;
    let d = state.dim as f64;
    let big_d = state.indivisible_count() as f64;
    let bound = -(d + big_d);
    let required_slope = bound + POLYNOMIAL_SLOPE_SLACK;
    let invariant_exponent = -(d + 2.0 * big_d);
    Ok(PolynomialReport {
        dim: state.dim,
        divisor_degree: state.indivisible_count(),
        slope: fit.slope,
        r_squared: fit.r_squared,
        bound,
        invariant_exponent,
        required_slope,
        beats_bound: fit.slope < bound,
        reaches_invariant_exponent: fit.slope <= invariant_exponent + POLYNOMIAL_SLOPE_SLACK,
        window: (t[0], *t.last().unwrap()),
        fit,
        pass: fit.slope <= required_slope,
        trace,
    })
}
