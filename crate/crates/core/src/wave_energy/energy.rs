//! Energies of the spectral solution
//!
//! ```text
//! 𝓕u(t,λ)  = cos(t‖λ‖) 𝓕f(λ) + sin(t‖λ‖)/‖λ‖ 𝓕g(λ)
//! P(t)     = (c₀/2) ∫ ‖λ‖² 𝓕u 𝓕̃u ν dλ
//! K(t)     = (c₀/2) ∫ ∂ₜ𝓕u ∂ₜ𝓕̃u ν dλ
//! P(t)-K(t) = (c₀/2) ∫₀^∞ {cos(2tr) Φ(r) + sin(2tr) r Ψ(r)} r^{d-1} dr
//! ```
//!
//! with `Φ = r² a_ff - a_gg` and `Ψ = a_fg`.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use super::state::{SpectralState, SpectralValues};
use crate::error::{Error, Result};
use crate::quadrature::{ComplexSum, FilonLegendre, NeumaierSum};

type C64 = Complex64;

/// `𝓕u, ∂ₜ𝓕u, 𝓕̃u, ∂ₜ𝓕̃u` at `r_i σ_s`, index `i·n_σ + s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagated {
    pub u: Vec<C64>,
    pub u_t: Vec<C64>,
    pub u_tilde: Vec<C64>,
    pub u_t_tilde: Vec<C64>,
}

/// `(cos(tr), sin(tr)/r, -r sin(tr))` with the limit `t` for `sin(tr)/r` at `r = 0`.
pub fn wave_factors(t: f64, r: f64) -> (f64, f64, f64) {
    let (s, c) = (t * r).sin_cos();
    let sinc = if r == 0.0 { t } else { s / r };
    (c, sinc, -r * s)
}

pub fn propagate(state: &SpectralState, t: f64) -> Propagated {
    let ns = state.direction_count();
    let n = state.radial_len() * ns;
    let mut out = Propagated {
        u: Vec::with_capacity(n),
        u_t: Vec::with_capacity(n),
        u_tilde: Vec::with_capacity(n),
        u_t_tilde: Vec::with_capacity(n),
    };
    for (i, &r) in state.rule.nodes.iter().enumerate() {
        let (c, sinc, ds) = wave_factors(t, r);
        for s in 0..ns {
            let j = i * ns + s;
            let (f, g, ft, gt) = match &state.values {
                SpectralValues::Sampled {
                    f,
                    g,
                    f_tilde,
                    g_tilde,
                    ..
                } => (f[j], g[j], f_tilde[j], g_tilde[j]),
                SpectralValues::Radial { f, g, .. } => {
                    let (a, b) = (C64::new(f[i], 0.0), C64::new(g[i], 0.0));
                    (a, b, a, b)
                }
            };
            out.u.push(f * c + g * sinc);
            out.u_t.push(f * ds + g * c);
            out.u_tilde.push(ft * c + gt * sinc);
            out.u_t_tilde.push(ft * ds + gt * c);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Energies {
    pub kinetic: f64,
    pub potential: f64,
    pub total: f64,
    /// Largest imaginary part left in `K` or `P`.
    pub imaginary: f64,
}

fn check_resolved(state: &SpectralState, t: f64) -> Result<()> {
    if state.grid.resolves(t) {
        Ok(())
    } else {
        Err(Error::Quadrature(format!(
            "panels of width {:.4} do not resolve the period π/(2|t|) at t = {t}",
            state.grid.panel_width()
        )))
    }
}

pub fn energies(state: &SpectralState, t: f64) -> Result<Energies> {
    check_resolved(state, t)?;
    let c = &state.coefficients;
    let (mut p, mut k) = (ComplexSum::default(), ComplexSum::default());
    let dm1 = state.dim as i32 - 1;
    for (i, (&r, &w)) in state.rule.nodes.iter().zip(&state.rule.weights).enumerate() {
        let (s, co) = (t * r).sin_cos();
        let m = w * r.powi(dm1);
        let (a, b, x) = (c.ff[i] * (r * r), c.gg[i], c.fg[i] * (r * co * s));
        p.add((a * (co * co) + b * (s * s) + x) * m);
        k.add((a * (s * s) + b * (co * co) - x) * m);
    }
    let half = 0.5 * state.c0;
    let (p, k) = (p.value() * half, k.value() * half);
    Ok(Energies {
        kinetic: k.re,
        potential: p.re,
        total: k.re + p.re,
        imaginary: k.im.abs().max(p.im.abs()),
    })
}

/// Two evaluations of the radial oscillatory integral for `P - K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyDifference {
    /// Panel Gauss rule.
    pub gauss: f64,
    /// Filon-Legendre product rule on the same panels.
    pub filon: f64,
    /// Estimated quadrature floor: path disagreement, round-off and tail.
    pub floor: f64,
    pub imaginary: f64,
}

pub fn energy_difference(state: &SpectralState, t: f64) -> Result<EnergyDifference> {
    check_resolved(state, t)?;
    let rd = radial_densities(state);
    let n = state.grid.order;
    let omega = 2.0 * t;
    let half = 0.5 * state.c0;
    let dm1 = state.dim as i32 - 1;
    let a: Vec<C64> = rd
        .r
        .iter()
        .zip(&rd.phi)
        .map(|(&r, &p)| p * r.powi(dm1))
        .collect();
    let b: Vec<C64> = rd
        .r
        .iter()
        .zip(&rd.psi)
        .map(|(&r, &p)| p * r.powi(dm1 + 1))
        .collect();

    let mut gauss = ComplexSum::default();
    let mut magnitude = NeumaierSum::default();
    for (i, (&r, &w)) in state.rule.nodes.iter().zip(&state.rule.weights).enumerate() {
        let (s, c) = (omega * r).sin_cos();
        let term = (a[i] * c + b[i] * s) * w;
        gauss.add(term);
        magnitude.add((a[i].norm() + b[i].norm()) * w);
    }

    let filon = FilonLegendre::new(n);
    let mut osc = ComplexSum::default();
    for (p, pair) in state.breaks.windows(2).enumerate() {
        let (lo, hi) = (pair[0], pair[1]);
        let (sa, sb) = (&a[p * n..(p + 1) * n], &b[p * n..(p + 1) * n]);
        let (ap, am) = (filon.integrate(lo, hi, sa, omega), filon.integrate(lo, hi, sa, -omega));
        let (bp, bm) = (filon.integrate(lo, hi, sb, omega), filon.integrate(lo, hi, sb, -omega));
        osc.add((ap + am) * 0.5 + (bp - bm) / C64::new(0.0, 2.0));
    }

    let g = gauss.value() * half;
    let f = osc.value() * half;
    let total = energy_scale(state);
    let floor = (g.re - f.re).abs()
        + 16.0 * f64::EPSILON * magnitude.value() * half
        + state.tail * total;
    Ok(EnergyDifference {
        gauss: g.re,
        filon: f.re,
        floor,
        imaginary: g.im.abs(),
    })
}

/// `(c₀/2) ∫ r^{d-1} (r²|a_ff| + |a_gg|) dr`, an upper bound on the energy.
pub(crate) fn energy_scale(state: &SpectralState) -> f64 {
    let mut s = NeumaierSum::default();
    for e in state.energy_terms() {
        s.add(e);
    }
    0.5 * state.c0 * s.value()
}

/// `Φ`, `Ψ` on the radial grid and their divisibility-normalised forms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialDensities {
    pub r: Vec<f64>,
    pub phi: Vec<C64>,
    pub psi: Vec<C64>,
    /// `|R₀⁺|`.
    pub divisor_degree: usize,
    pub phi_scaled: Vec<C64>,
    pub psi_scaled: Vec<C64>,
}

pub fn radial_densities(state: &SpectralState) -> RadialDensities {
    let c = &state.coefficients;
    let d = state.indivisible_count() as i32;
    let r = state.rule.nodes.clone();
    let phi: Vec<C64> = r
        .iter()
        .enumerate()
        .map(|(i, &x)| c.ff[i] * (x * x) - c.gg[i])
        .collect();
    let psi = c.fg.clone();
    let phi_scaled = phi.iter().zip(&r).map(|(p, x)| p / x.powi(d)).collect();
    let psi_scaled = psi.iter().zip(&r).map(|(p, x)| p / x.powi(d)).collect();
    RadialDensities {
        r,
        phi,
        psi,
        divisor_degree: d as usize,
        phi_scaled,
        psi_scaled,
    }
}

impl RadialDensities {
    /// `sup_{r < cut} |Φ|/r^D` and the same for `Ψ`.
    pub fn divisibility_bound(&self, cut: f64) -> (f64, f64) {
        let mut out = (0.0f64, 0.0f64);
        for (i, &r) in self.r.iter().enumerate() {
            if r < cut {
                out.0 = out.0.max(self.phi_scaled[i].norm());
                out.1 = out.1.max(self.psi_scaled[i].norm());
            }
        }
        out
    }

    /// Columns `r, phi_re, phi_im, psi_re, psi_im, phi_scaled, psi_scaled`
    /// (the last two as moduli).
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "r,phi_re,phi_im,psi_re,psi_im,phi_scaled,psi_scaled")?;
        for i in 0..self.r.len() {
            writeln!(
                out,
                "{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                self.r[i],
                self.phi[i].re,
                self.phi[i].im,
                self.psi[i].re,
                self.psi[i].im,
                self.phi_scaled[i].norm(),
                self.psi_scaled[i].norm()
            )?;
        }
        Ok(())
    }
}

/// Largest relative change of `Φ`, `Ψ` under `r → -r`, computed from the
/// spectral values at the antipodal directions.
pub fn evenness_defect(state: &SpectralState) -> f64 {
    let here = &state.coefficients;
    let there = state.coefficients_at(true);
    let mut scale = 0.0f64;
    let mut worst = 0.0f64;
    for i in 0..state.radial_len() {
        let r2 = state.rule.nodes[i].powi(2);
        let (p, q) = (here.ff[i] * r2 - here.gg[i], there.ff[i] * r2 - there.gg[i]);
        scale = scale.max(p.norm()).max(here.fg[i].norm());
        worst = worst.max((p - q).norm()).max((here.fg[i] - there.fg[i]).norm());
    }
    if scale == 0.0 {
        0.0
    } else {
        worst / scale
    }
}
