//! The Plancherel density `ν(λ)`: Gamma-product evaluation, the
//! factorisation `ν = c·π·ν̃`, the polynomial form for integer
//! multiplicities, the pole ledger and the strip width `γ₀`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::{fit_loglog, geometric_grid, LineFit};
use crate::root_system::{dot, norm, IndivisibleRoot, RootSystemData};
use crate::special_fn::gamma::{gamma_ratio, stirling_ratio_bound, GammaRatio};

type C64 = Complex64;

const FACTOR_NAMES: [&str; 4] = [
    "Γ(i⟨λ,α̌⟩+k_α)",
    "Γ((i⟨λ,α̌⟩+k_α)/2+k_2α)",
    "Γ(-i⟨λ,α̌⟩+k_α)",
    "Γ((-i⟨λ,α̌⟩+k_α)/2+k_2α+1)",
];

fn cdot(lambda: &[C64], v: &[f64]) -> C64 {
    lambda.iter().zip(v).map(|(l, x)| l * x).sum()
}

pub fn real_point(x: &[f64]) -> Vec<C64> {
    x.iter().map(|&v| C64::new(v, 0.0)).collect()
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-12
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityMode {
    GammaProduct,
    IntegerPolynomial,
}

/// Evaluator for `ν`.
#[derive(Debug, Clone)]
pub struct SpectralDensity {
    pub system: RootSystemData,
    pub roots: Vec<IndivisibleRoot>,
    pub mode: DensityMode,
    /// Overall multiplicative convention; 1 reproduces the Gamma product.
    pub scale: f64,
    polynomial: Option<IntegerPolynomialDensity>,
}

/// The Gamma ratios of one indivisible root, as functions of `ξ = i⟨λ,α̌⟩`.
pub fn root_ratios(root: &IndivisibleRoot) -> [GammaRatio; 4] {
    let (k, k2) = (root.k, root.k_double);
    [
        GammaRatio::new(1.0, k, 0.0),
        GammaRatio::new(0.5, 0.5 * k + k2, 0.5 * k),
        GammaRatio::new(-1.0, k, 1.0),
        GammaRatio::new(-0.5, 0.5 * k + k2 + 1.0, 0.5 * k),
    ]
}

/// Product of the four Gamma ratios of `root` at `z = ⟨λ,α̌⟩`.
pub fn root_factor(root: &IndivisibleRoot, z: C64) -> Result<C64> {
    let mut out = C64::new(1.0, 0.0);
    for (idx, r) in root_ratios(root).iter().enumerate() {
        match r.eval(z) {
            Ok(v) => out *= v,
            Err(Error::Pole { index, .. }) => {
                return Err(Error::Pole {
                    factor: FACTOR_NAMES[idx].into(),
                    index,
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// `root_factor / z`, with the removable singularity at `z = 0` resolved by
/// `1/Γ(w) = w/Γ(w+1)`; includes the factor `i` from `w = iz`.
fn root_factor_tilde(root: &IndivisibleRoot, z: C64) -> Result<C64> {
    let w = C64::i() * z;
    let (k, k2) = (root.k, root.k_double);
    let pieces = [
        gamma_ratio(w + k, w + 1.0),
        gamma_ratio((w + k) * 0.5 + k2, (w + k) * 0.5),
        gamma_ratio(-w + k, -w + 1.0),
        gamma_ratio((-w + k) * 0.5 + k2 + 1.0, (-w + k) * 0.5),
    ];
    let mut out = C64::new(1.0, 0.0);
    for (idx, p) in pieces.into_iter().enumerate() {
        match p {
            Ok(v) => out *= v,
            Err(Error::Pole { index, .. }) => {
                return Err(Error::Pole {
                    factor: FACTOR_NAMES[idx].into(),
                    index,
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

impl SpectralDensity {
    pub fn new(system: &RootSystemData) -> Self {
        Self {
            roots: system.indivisible_roots(),
            system: system.clone(),
            mode: DensityMode::GammaProduct,
            scale: 1.0,
            polynomial: None,
        }
    }

    /// Switches evaluation to the polynomial closed form.
    pub fn with_polynomial_mode(mut self) -> Result<Self> {
        let poly = IntegerPolynomialDensity::new(&self)?;
        self.polynomial = Some(poly);
        self.mode = DensityMode::IntegerPolynomial;
        Ok(self)
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn dim(&self) -> usize {
        self.system.dim
    }

    /// `D = |R₀⁺|`.
    pub fn degree_pi(&self) -> usize {
        self.roots.len()
    }

    /// `2|k|`, the growth exponent.
    pub fn growth_degree(&self) -> f64 {
        2.0 * self.system.k_total()
    }

    pub fn is_integer_configuration(&self) -> bool {
        self.roots
            .iter()
            .all(|r| r.k >= 1.0 && is_integer(r.k) && r.k_double >= 0.0 && is_integer(r.k_double))
    }

    pub fn eval(&self, lambda: &[C64]) -> Result<C64> {
        match (&self.mode, &self.polynomial) {
            (DensityMode::IntegerPolynomial, Some(p)) => Ok(p.eval(lambda) * self.scale),
            _ => self.eval_gamma(lambda),
        }
    }

    pub fn eval_real(&self, lambda: &[f64]) -> Result<C64> {
        self.eval(&real_point(lambda))
    }

    /// The Gamma product, regardless of mode.
    pub fn eval_gamma(&self, lambda: &[C64]) -> Result<C64> {
        let mut out = C64::new(self.scale, 0.0);
        for root in &self.roots {
            out *= root_factor(root, cdot(lambda, &root.coroot))?;
        }
        Ok(out)
    }

    /// `π(λ) = Π ⟨λ,α̌⟩`.
    pub fn pi(&self, lambda: &[C64]) -> C64 {
        self.roots.iter().map(|r| cdot(lambda, &r.coroot)).product()
    }

    /// `ν̃(λ)`, normalised so that `ν = i^D π ν̃` for unit `scale`.
    pub fn nu_tilde(&self, lambda: &[C64]) -> Result<C64> {
        let mut out = C64::new(1.0, 0.0);
        for root in &self.roots {
            out *= root_factor_tilde(root, cdot(lambda, &root.coroot))?;
        }
        Ok(out)
    }

    /// `λ* = ρ + (1,…,1)/√d`.
    pub fn reference_point(&self) -> Vec<f64> {
        let d = self.dim() as f64;
        self.system.rho.iter().map(|r| r + 1.0 / d.sqrt()).collect()
    }

    /// Constant `c` in `ν = c·π·ν̃`, fixed by matching at the reference point.
    pub fn factorization_constant(&self) -> Result<C64> {
        let l = real_point(&self.reference_point());
        Ok(self.eval_gamma(&l)? / (self.pi(&l) * self.nu_tilde(&l)?))
    }

    pub fn polynomial(&self) -> Option<&IntegerPolynomialDensity> {
        self.polynomial.as_ref()
    }

    /// Stirling upper bound for `|ν(λ)|`.
    pub fn stirling_bound(&self, lambda: &[C64]) -> Result<f64> {
        let mut out = self.scale.abs();
        for root in &self.roots {
            out *= stirling_ratio_bound(cdot(lambda, &root.coroot), &root_ratios(root))?;
        }
        Ok(out)
    }
}

/// The closed form `c Π z(z + i(k+2k₂)) Π_{0<j<k}(z² + j²) Π_{0≤j<k₂}(z² + (k+2j)²)`
/// with `z = ⟨λ,α̌⟩`.
#[derive(Debug, Clone)]
pub struct IntegerPolynomialDensity {
    roots: Vec<IndivisibleRoot>,
    pub constant: C64,
}

impl IntegerPolynomialDensity {
    pub fn new(density: &SpectralDensity) -> Result<Self> {
        for r in &density.roots {
            if !(r.k >= 1.0 && is_integer(r.k)) {
                return Err(Error::NonIntegerMultiplicity(r.k));
            }
            if !(r.k_double >= 0.0 && is_integer(r.k_double)) {
                return Err(Error::NonIntegerMultiplicity(r.k_double));
            }
        }
        let mut poly = Self {
            roots: density.roots.clone(),
            constant: C64::new(1.0, 0.0),
        };
        let l = real_point(&density.reference_point());
        let scale = density.scale;
        let gamma = density.eval_gamma(&l)? / scale;
        poly.constant = gamma / poly.eval(&l);
        Ok(poly)
    }

    pub fn degree(&self) -> usize {
        self.roots
            .iter()
            .map(|r| 2 * (r.k.round() as usize + r.k_double.round() as usize))
            .sum()
    }

    pub fn eval(&self, lambda: &[C64]) -> C64 {
        let mut out = self.constant;
        for r in &self.roots {
            let z = cdot(lambda, &r.coroot);
            let (k, k2) = (r.k.round() as i64, r.k_double.round() as i64);
            out *= z * (z + C64::new(0.0, (k + 2 * k2) as f64));
            let z2 = z * z;
            for j in 1..k {
                out *= z2 + (j * j) as f64;
            }
            for j in 0..k2 {
                let s = (k + 2 * j) as f64;
                out *= z2 + s * s;
            }
        }
        out
    }
}

/// One candidate pole of the density along the `w = i⟨λ,α̌⟩` axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleEntry {
    pub root_index: usize,
    /// Location in `w`; the pole sits at `⟨λ,α̌⟩ = -i w`.
    pub w: f64,
    /// `|w| / |α̌|`, the smallest height of this pole over directions.
    pub height: f64,
    pub numerator_hits: Vec<(usize, i64)>,
    pub denominator_hits: Vec<(usize, i64)>,
    /// Net order: numerator poles minus denominator zeros.
    pub order: i64,
    /// The denominator zero cancelling it is the one of `π` (at `w = 0`).
    pub cancelled_by_pi: bool,
    pub residue_confirmed: Option<bool>,
}

impl PoleEntry {
    pub fn is_genuine(&self) -> bool {
        self.order > 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PoleLedger {
    pub entries: Vec<PoleEntry>,
    pub window: f64,
}

fn progression_hit(w: f64, start: f64, step: f64) -> Option<i64> {
    let n = (w - start) / step;
    let r = n.round();
    if r >= 0.0 && (n - r).abs() < 1e-9 {
        Some(r as i64)
    } else {
        None
    }
}

/// Numerator pole and denominator zero progressions `(start, step)` in `w`.
fn progressions(k: f64, k2: f64) -> ([(f64, f64); 4], [(f64, f64); 4]) {
    (
        [
            (-k, -1.0),
            (-k - 2.0 * k2, -2.0),
            (k, 1.0),
            (k + 2.0 * k2 + 2.0, 2.0),
        ],
        [(0.0, -1.0), (-k, -2.0), (1.0, 1.0), (k, 2.0)],
    )
}

impl PoleLedger {
    /// Enumerates candidate poles with `|w| <= window` for every root.
    pub fn build(density: &SpectralDensity, window: f64) -> Self {
        let mut entries = Vec::new();
        for (ri, root) in density.roots.iter().enumerate() {
            let (num, den) = progressions(root.k, root.k_double);
            let mut candidates: Vec<f64> = Vec::new();
            for &(start, step) in &num {
                let mut n = 0;
                loop {
                    let w = start + step * n as f64;
                    if w.abs() > window {
                        break;
                    }
                    if !candidates.iter().any(|c| (c - w).abs() < 1e-9) {
                        candidates.push(w);
                    }
                    n += 1;
                }
            }
            candidates.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(a.total_cmp(b)));
            let cnorm = norm(&root.coroot);
            for w in candidates {
                let numerator_hits: Vec<(usize, i64)> = num
                    .iter()
                    .enumerate()
                    .filter_map(|(i, &(s, st))| progression_hit(w, s, st).map(|n| (i, n)))
                    .collect();
                let denominator_hits: Vec<(usize, i64)> = den
                    .iter()
                    .enumerate()
                    .filter_map(|(i, &(s, st))| progression_hit(w, s, st).map(|n| (i, n)))
                    .collect();
                let order = numerator_hits.len() as i64 - denominator_hits.len() as i64;
                entries.push(PoleEntry {
                    root_index: ri,
                    w,
                    height: w.abs() / cnorm,
                    cancelled_by_pi: order <= 0 && w.abs() < 1e-12,
                    numerator_hits,
                    denominator_hits,
                    order,
                    residue_confirmed: None,
                });
            }
        }
        Self { entries, window }
    }

    pub fn genuine(&self) -> impl Iterator<Item = &PoleEntry> {
        self.entries.iter().filter(|e| e.is_genuine())
    }

    /// Probes `|f(w₀ + ε)| / |f(w₀ + 2ε)| ≈ 2^order` for the nearest
    /// `count` genuine poles of each root.
    pub fn confirm_residues(&mut self, density: &SpectralDensity, count: usize) {
        for ri in 0..density.roots.len() {
            let root = &density.roots[ri];
            let mut seen = 0;
            for e in self.entries.iter_mut().filter(|e| e.root_index == ri) {
                if !e.is_genuine() || seen >= count {
                    continue;
                }
                seen += 1;
                let eps = 1e-6 * (1.0 + e.w.abs());
                let at = |d: f64| {
                    let w = C64::new(e.w, d);
                    root_factor(root, -C64::i() * w).map(|v| v.norm())
                };
                let ok = match (at(eps), at(2.0 * eps)) {
                    (Ok(a), Ok(b)) => {
                        let ratio = a / b;
                        let want = 2f64.powi(e.order as i32);
                        (ratio / want - 1.0).abs() < 0.05
                    }
                    _ => false,
                };
                e.residue_confirmed = Some(ok);
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StripWidth {
    /// `None` encodes `+∞`.
    pub gamma0: Option<f64>,
    pub minimizing_root: Option<usize>,
    pub sampled_estimate: Option<f64>,
    pub residues_confirmed: bool,
    pub ledger: PoleLedger,
}

impl StripWidth {
    pub fn value(&self) -> f64 {
        self.gamma0.unwrap_or(f64::INFINITY)
    }
}

/// Unit directions: `±1` for `d = 1`, `n` equally spaced angles for `d = 2`.
pub fn sphere_directions(dim: usize, n: usize) -> Vec<Vec<f64>> {
    match dim {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..n)
            .map(|j| {
                let t = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => {
            let mut out = Vec::new();
            for i in 0..dim {
                for s in [1.0, -1.0] {
                    let mut v = vec![0.0; dim];
                    v[i] = s;
                    out.push(v);
                }
            }
            out
        }
    }
}

/// `γ₀`: the height of the lowest genuine pole over all directions, which
/// is attained in the direction of the corresponding coroot.
pub fn strip_width(density: &SpectralDensity, directions: &[Vec<f64>]) -> StripWidth {
    let mut ledger = PoleLedger::build(density, 30.0);
    ledger.confirm_residues(density, 2);
    let best = ledger
        .genuine()
        .min_by(|a, b| a.height.total_cmp(&b.height))
        .cloned();
    let residues_confirmed = ledger
        .entries
        .iter()
        .all(|e| e.residue_confirmed.unwrap_or(true));
    let sampled_estimate = best.as_ref().map(|_| {
        directions
            .iter()
            .flat_map(|s| {
                ledger.genuine().filter_map(move |e| {
                    let p = dot(s, &density.roots[e.root_index].coroot).abs();
                    (p > 1e-12).then(|| e.w.abs() / p)
                })
            })
            .fold(f64::INFINITY, f64::min)
    });
    StripWidth {
        gamma0: best.as_ref().map(|e| e.height),
        minimizing_root: best.as_ref().map(|e| e.root_index),
        sampled_estimate,
        residues_confirmed,
        ledger,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthProbe {
    pub large: LineFit,
    pub small: LineFit,
    pub expected_large: f64,
    pub expected_small_min: f64,
}

/// Log-log slopes of `|ν((r + iγ)σ)|` for large `r` and of `|ν(rσ)|` for
/// small `r`.
pub fn growth_exponent_probe(
    density: &SpectralDensity,
    sigma: &[f64],
    gamma: f64,
) -> Result<GrowthProbe> {
    let eval_ray = |z: C64| -> Result<f64> {
        let l: Vec<C64> = sigma.iter().map(|s| z * *s).collect();
        Ok(density.eval(&l)?.norm())
    };
    let collect = |grid: &[f64], im: f64| -> Result<(Vec<f64>, Vec<f64>)> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for &r in grid {
            let mut z = C64::new(r, im);
            let mut v = eval_ray(z);
            let mut jitter = 0;
            while matches!(v, Err(Error::Pole { .. })) && jitter < 5 {
                z += C64::new(1e-7 * r, 0.0);
                v = eval_ray(z);
                jitter += 1;
            }
            xs.push(z.norm());
            ys.push(v?);
        }
        Ok((xs, ys))
    };
    let (lx, ly) = collect(&geometric_grid(200.0, 20000.0, 1.5), gamma)?;
    let (sx, sy) = collect(&geometric_grid(1e-5, 1e-3, 1.5), 0.0)?;
    let degenerate = || Error::Precondition("degenerate growth probe grid".into());
    Ok(GrowthProbe {
        large: fit_loglog(&lx, &ly).ok_or_else(degenerate)?,
        small: fit_loglog(&sx, &sy).ok_or_else(degenerate)?,
        expected_large: density.growth_degree(),
        expected_small_min: density.degree_pi() as f64,
    })
}
