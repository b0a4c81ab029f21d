//! Forward, tilde and inverse transforms in rank one.
//!
//! ```text
//! 𝓕f(λ) = ∫ f(x) G_{iλ}(-x) μ(x) dx
//! 𝓕̃g(λ) = ∫ conj(g(x)) G_{iλ}(x) μ(x) dx
//! f(x)   = c₀ ∫ 𝓕f(λ) G_{iλ}(x) ν(λ) dλ
//! ```
//!
//! The `x` integrals run over `(0, X]` with both `x` and `-x` taken from one
//! kernel pass.

use std::io::{BufRead, Write};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::functions::{support_radius, PolyBump, Reflected, SharedFn, SmoothFunction};
use super::operators::ApplyT;
use crate::error::{Error, Result};
use crate::fit::fit_loglog;
use crate::opdam_kernel::{KernelSolver, RankOne};
use crate::plancherel::SpectralDensity;
use crate::quadrature::{graded_breaks, uniform_breaks, ComplexSum, NeumaierSum, Rule};
use crate::root_system::RootSystemData;

type C64 = Complex64;

const CHUNK: usize = 32;

/// Composite Gauss rule on `[0, Λ]`.
pub fn radial_rule(lambda_max: f64, max_width: f64, order: usize) -> Rule {
    Rule::composite(&uniform_breaks(0.0, lambda_max, max_width), order)
}

/// The rule reflected onto `[-Λ, Λ]`: nodes `-r` (descending) then `r`.
pub fn mirrored(rule: &Rule) -> Rule {
    let mut out = Rule::default();
    for (x, w) in rule.nodes.iter().zip(&rule.weights).rev() {
        out.nodes.push(-x);
        out.weights.push(*w);
    }
    out.nodes.extend_from_slice(&rule.nodes);
    out.weights.extend_from_slice(&rule.weights);
    out
}

/// Sampled transform values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralFunction {
    pub lambdas: Vec<f64>,
    pub values: Vec<C64>,
    /// Paley-Wiener radius of the source function, when known.
    pub radius: Option<f64>,
}

impl SpectralFunction {
    /// `max (1+|λ|)^n |h(λ)|` over the grid.
    pub fn weighted_sup(&self, n: f64) -> f64 {
        self.lambdas
            .iter()
            .zip(&self.values)
            .map(|(l, v)| (1.0 + l.abs()).powf(n) * v.norm())
            .fold(0.0, f64::max)
    }

    /// Power-law decay exponent of the upper envelope over the outer three
    /// quarters of the grid.
    pub fn decay_exponent(&self) -> Option<f64> {
        let lmax = self.lambdas.iter().map(|l| l.abs()).fold(0.0, f64::max);
        let mut pts: Vec<(f64, f64)> = self
            .lambdas
            .iter()
            .zip(&self.values)
            .filter(|(l, _)| l.abs() >= 0.25 * lmax)
            .map(|(l, v)| (l.abs(), v.norm()))
            .collect();
        pts.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut env = 0.0f64;
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for (l, v) in pts {
            env = env.max(v);
            if env > 0.0 {
                xs.push(l);
                ys.push(env);
            }
        }
        fit_loglog(&xs, &ys).map(|f| -f.slope)
    }

    /// CSV with header `lambda,re,im`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "lambda,re,im")?;
        for (l, v) in self.lambdas.iter().zip(&self.values) {
            writeln!(out, "{:.17e},{:.17e},{:.17e}", l, v.re, v.im)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let rows = super::read_triples(input, "lambda,re,im")?;
        Ok(Self {
            lambdas: rows.iter().map(|r| r.0).collect(),
            values: rows.iter().map(|r| C64::new(r.1, r.2)).collect(),
            radius: None,
        })
    }
}

/// Forward and tilde transforms of one function on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectra {
    pub forward: Vec<C64>,
    pub tilde: Vec<C64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Calibration {
    pub c0: f64,
    /// Value from the second reference bump.
    pub c0_alt: f64,
    pub spread: f64,
    pub widths: [f64; 2],
    /// Relative L² round-trip error of the first reference with `c0`.
    pub round_trip: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PlancherelDefect {
    pub lhs: C64,
    pub rhs: C64,
    /// `|lhs - rhs|` over `|lhs|`, or over `‖f‖‖g‖` when `|lhs|` is below a
    /// thousandth of that product.
    pub defect: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DiagonalizationDefect {
    /// `sup |𝓕(Tf) - iλ𝓕f| / ((1+|λ|) ‖f‖₁)`.
    pub t_defect: f64,
    /// `sup |𝓕(Lf) + λ²𝓕f| / ((1+|λ|)² ‖f‖₁)`.
    pub l_defect: f64,
}

/// Transform engine for a rank-one system.
#[derive(Debug, Clone)]
pub struct Transformer {
    pub system: RootSystemData,
    pub cfg: RankOne,
    pub density: SpectralDensity,
    /// Half-width of the `x` window for functions without compact support.
    pub window: f64,
    pub panel_width: f64,
    pub order: usize,
}

impl Transformer {
    pub fn new(system: &RootSystemData) -> Result<Self> {
        Ok(Self {
            cfg: RankOne::from_system(system)?,
            density: SpectralDensity::new(system),
            system: system.clone(),
            window: 8.0,
            panel_width: 0.1,
            order: 20,
        })
    }

    pub fn with_window(mut self, window: f64) -> Self {
        self.window = window;
        self
    }

    pub fn with_panels(mut self, width: f64, order: usize) -> Self {
        self.panel_width = width;
        self.order = order;
        self
    }

    pub fn weight(&self, x: f64) -> f64 {
        self.system.weight(&[x])
    }

    fn graded(&self) -> bool {
        self.cfg
            .terms
            .iter()
            .any(|&(_, k)| ((2.0 * k) - (2.0 * k).round()).abs() > 1e-12)
    }

    /// Quadrature on `(0, X]` covering every function's support, refined
    /// geometrically at the origin when `μ` is not smooth there.
    pub fn x_rule(&self, funcs: &[&dyn SmoothFunction]) -> Rule {
        let extent = funcs
            .iter()
            .map(|f| support_radius(*f).unwrap_or(self.window))
            .fold(0.0, f64::max)
            .max(1e-6);
        let mut breaks = if self.graded() {
            graded_breaks((0.05f64).min(extent / 4.0), 0.3, 14)
        } else {
            vec![0.0]
        };
        let start = *breaks.last().unwrap();
        breaks.extend(uniform_breaks(start, extent, self.panel_width).into_iter().skip(1));
        for f in funcs {
            for b in f.breakpoints() {
                if b.abs() > start && b.abs() < extent {
                    breaks.push(b.abs());
                }
            }
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        Rule::composite(&breaks, self.order)
    }

    /// `∫ f conj(g) μ dx`.
    pub fn inner(&self, f: &dyn SmoothFunction, g: &dyn SmoothFunction) -> C64 {
        let rule = self.x_rule(&[f, g]);
        let mut acc = ComplexSum::default();
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let m = w * self.weight(x);
            acc.add((f.value(x) * g.value(x).conj() + f.value(-x) * g.value(-x).conj()) * m);
        }
        acc.value()
    }

    pub fn norm_l2(&self, f: &dyn SmoothFunction) -> f64 {
        self.inner(f, f).re.max(0.0).sqrt()
    }

    pub fn norm_l1(&self, f: &dyn SmoothFunction) -> f64 {
        let rule = self.x_rule(&[f]);
        let mut acc = NeumaierSum::default();
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            acc.add(w * self.weight(x) * (f.value(x).norm() + f.value(-x).norm()));
        }
        acc.value()
    }

    /// `ν` at real points of the line.
    pub fn density_on(&self, lambdas: &[f64]) -> Result<Vec<C64>> {
        lambdas
            .par_iter()
            .map(|&l| self.density.eval_real(&[l]))
            .collect()
    }

    /// Forward and tilde transforms of several functions at once.
    pub fn transform_batch(&self, funcs: &[&dyn SmoothFunction], lambdas: &[f64]) -> Result<Vec<Spectra>> {
        let rule = self.x_rule(funcs);
        let extent = rule.nodes.last().copied().unwrap_or(0.0).max(
            funcs
                .iter()
                .map(|f| support_radius(*f).unwrap_or(self.window))
                .fold(0.0, f64::max),
        );
        let m: Vec<f64> = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| w * self.weight(x))
            .collect();
        // samples[j][i] = (f_j(x_i), f_j(-x_i)) · w_i μ_i
        let samples: Vec<Vec<(C64, C64)>> = funcs
            .iter()
            .map(|f| {
                rule.nodes
                    .iter()
                    .zip(&m)
                    .map(|(&x, &mi)| (f.value(x) * mi, f.value(-x) * mi))
                    .collect()
            })
            .collect();
        let lmax = lambdas.iter().map(|l| l.abs()).fold(0.0, f64::max);
        let solver = KernelSolver::new(self.cfg.clone(), lmax, extent);
        let per_lambda: Vec<Vec<(C64, C64)>> = lambdas
            .par_iter()
            .map(|&l| {
                let path = solver.solve(C64::new(0.0, l))?;
                let kernel: Vec<(C64, C64)> = rule
                    .nodes
                    .iter()
                    .map(|&x| path.eval_pair(x))
                    .collect::<Result<_>>()?;
                Ok(samples
                    .iter()
                    .map(|s| {
                        let (mut fw, mut tl) = (ComplexSum::default(), ComplexSum::default());
                        for ((fp, fm), (u, v)) in s.iter().zip(&kernel) {
                            fw.add(fp * v + fm * u);
                            tl.add(fp.conj() * u + fm.conj() * v);
                        }
                        (fw.value(), tl.value())
                    })
                    .collect())
            })
            .collect::<Result<_>>()?;
        Ok((0..funcs.len())
            .map(|j| Spectra {
                forward: per_lambda.iter().map(|r| r[j].0).collect(),
                tilde: per_lambda.iter().map(|r| r[j].1).collect(),
            })
            .collect())
    }

    pub fn forward(&self, f: &dyn SmoothFunction, lambdas: &[f64]) -> Result<SpectralFunction> {
        let s = self.transform_batch(&[f], lambdas)?.remove(0);
        Ok(SpectralFunction {
            lambdas: lambdas.to_vec(),
            values: s.forward,
            radius: support_radius(f),
        })
    }

    pub fn tilde(&self, g: &dyn SmoothFunction, lambdas: &[f64]) -> Result<SpectralFunction> {
        let s = self.transform_batch(&[g], lambdas)?.remove(0);
        Ok(SpectralFunction {
            lambdas: lambdas.to_vec(),
            values: s.tilde,
            radius: support_radius(g),
        })
    }

    /// `𝓕̃g(λ)` as `conj(𝓕(w₀g)(w₀λ))`.
    pub fn tilde_by_reflection(&self, g: SharedFn, lambdas: &[f64]) -> Result<SpectralFunction> {
        let r = Reflected(g);
        let neg: Vec<f64> = lambdas.iter().map(|l| -l).collect();
        let f = self.forward(&r, &neg)?;
        Ok(SpectralFunction {
            lambdas: lambdas.to_vec(),
            values: f.values.iter().map(|v| v.conj()).collect(),
            radius: f.radius,
        })
    }

    /// `c₀ Σ_j w_j h(λ_j) G_{iλ_j}(x) ν(λ_j)` at each `x`, with `h` sampled
    /// at the nodes of `rule`. Summation order is fixed, so the result does
    /// not depend on the thread count.
    pub fn inverse(&self, rule: &Rule, values: &[C64], xs: &[f64], c0: f64) -> Result<Vec<C64>> {
        if values.len() != rule.len() {
            return Err(Error::Precondition(format!(
                "{} spectral values for {} nodes",
                values.len(),
                rule.len()
            )));
        }
        let nu = self.density_on(&rule.nodes)?;
        let lmax = rule.nodes.iter().map(|l| l.abs()).fold(0.0, f64::max);
        let xmax = xs.iter().map(|x| x.abs()).fold(1e-6, f64::max);
        let solver = KernelSolver::new(self.cfg.clone(), lmax, xmax);
        let idx: Vec<usize> = (0..rule.len()).collect();
        let partial: Vec<Vec<ComplexSum>> = idx
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut acc = vec![ComplexSum::default(); xs.len()];
                for &j in chunk {
                    let coef = values[j] * nu[j] * rule.weights[j];
                    if coef == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let path = solver.solve(C64::new(0.0, rule.nodes[j]))?;
                    for (a, &x) in acc.iter_mut().zip(xs) {
                        a.add(coef * path.eval(x)?);
                    }
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        let mut out = vec![ComplexSum::default(); xs.len()];
        for chunk in partial {
            for (o, p) in out.iter_mut().zip(chunk) {
                o.add(p.value());
            }
        }
        Ok(out.into_iter().map(|s| s.value() * c0).collect())
    }

    /// Least-squares `c₀` making `c₀ 𝓕⁻¹𝓕 f ≈ f`, from two bumps of widths
    /// `0.5 R` and `0.8 R`; fails when the two values differ by more than `tol`.
    pub fn calibrate_c0(&self, radius: f64, rule: &Rule, tol: f64) -> Result<Calibration> {
        let widths = [0.5 * radius, 0.8 * radius];
        let mut vals = [0.0; 2];
        let mut trip = 0.0;
        for (slot, &w) in widths.iter().enumerate() {
            let f = reference_bump(w);
            let (c0, err) = self.fit_c0(&f, rule)?;
            vals[slot] = c0;
            if slot == 0 {
                trip = err;
            }
        }
        let spread = (vals[0] - vals[1]).abs() / vals[0].abs();
        if !(spread <= tol) || !(vals[0] > 0.0) {
            return Err(Error::Calibration(format!(
                "c0 = {} vs {} (relative spread {spread:e})",
                vals[0], vals[1]
            )));
        }
        Ok(Calibration {
            c0: vals[0],
            c0_alt: vals[1],
            spread,
            widths,
            round_trip: trip,
        })
    }

    fn fit_c0(&self, f: &dyn SmoothFunction, rule: &Rule) -> Result<(f64, f64)> {
        let fwd = self.forward(f, &rule.nodes)?;
        let xr = self.x_rule(&[f]);
        let mut xs: Vec<f64> = xr.nodes.iter().map(|x| -x).collect();
        xs.extend_from_slice(&xr.nodes);
        let recon = self.inverse(rule, &fwd.values, &xs, 1.0)?;
        let n = xr.len();
        let (mut fi, mut ii, mut ff) = (ComplexSum::default(), NeumaierSum::default(), NeumaierSum::default());
        for (j, (&x, &w)) in xr.nodes.iter().zip(&xr.weights).enumerate() {
            let m = w * self.weight(x);
            for (val, rec) in [(f.value(-x), recon[j]), (f.value(x), recon[n + j])] {
                fi.add(val * rec.conj() * m);
                ii.add(rec.norm_sqr() * m);
                ff.add(val.norm_sqr() * m);
            }
        }
        let c0 = fi.value().re / ii.value();
        // ‖c0 I - f‖² = c0² ‖I‖² - 2 c0 Re⟨f,I⟩ + ‖f‖²
        let resid = (c0 * c0 * ii.value() - 2.0 * c0 * fi.value().re + ff.value()).max(0.0);
        Ok((c0, (resid / ff.value()).sqrt()))
    }

    /// Relative L² error of `c₀ 𝓕⁻¹𝓕 f` against `f` on the support of `f`.
    pub fn round_trip_error(&self, f: &dyn SmoothFunction, rule: &Rule, c0: f64) -> Result<f64> {
        let fwd = self.forward(f, &rule.nodes)?;
        let xr = self.x_rule(&[f]);
        let mut xs: Vec<f64> = xr.nodes.iter().map(|x| -x).collect();
        xs.extend_from_slice(&xr.nodes);
        let recon = self.inverse(rule, &fwd.values, &xs, c0)?;
        let n = xr.len();
        let (mut num, mut den) = (NeumaierSum::default(), NeumaierSum::default());
        for (j, (&x, &w)) in xr.nodes.iter().zip(&xr.weights).enumerate() {
            let m = w * self.weight(x);
            for (val, rec) in [(f.value(-x), recon[j]), (f.value(x), recon[n + j])] {
                num.add((val - rec).norm_sqr() * m);
                den.add(val.norm_sqr() * m);
            }
        }
        Ok((num.value() / den.value()).sqrt())
    }

    /// `∫ f conj(g) μ dx` against `c₀ ∫ 𝓕f 𝓕̃g ν dλ` on the line rule.
    pub fn plancherel_check(
        &self,
        f: &dyn SmoothFunction,
        g: &dyn SmoothFunction,
        rule: &Rule,
        c0: f64,
    ) -> Result<PlancherelDefect> {
        let lhs = self.inner(f, g);
        let s = self.transform_batch(&[f, g], &rule.nodes)?;
        let nu = self.density_on(&rule.nodes)?;
        let mut acc = ComplexSum::default();
        for j in 0..rule.len() {
            acc.add(s[0].forward[j] * s[1].tilde[j] * nu[j] * rule.weights[j]);
        }
        let rhs = acc.value() * c0;
        let scale = self.norm_l2(f) * self.norm_l2(g);
        let denom = if lhs.norm() > 1e-3 * scale { lhs.norm() } else { scale };
        Ok(PlancherelDefect {
            lhs,
            rhs,
            defect: (lhs - rhs).norm() / denom,
        })
    }

    /// `𝓕(Tf) = iλ 𝓕f` and `𝓕(Lf) = -λ² 𝓕f` on a grid.
    pub fn diagonalization_check(&self, f: SharedFn, lambdas: &[f64]) -> Result<DiagonalizationDefect> {
        let tf: SharedFn = Arc::new(ApplyT::new(&self.cfg, f.clone()));
        let lf = ApplyT::new(&self.cfg, tf.clone());
        let s = self.transform_batch(&[f.as_ref(), tf.as_ref(), &lf], lambdas)?;
        let norm = self.norm_l1(f.as_ref());
        let (mut dt, mut dl) = (0.0f64, 0.0f64);
        for (j, &l) in lambdas.iter().enumerate() {
            let ff = s[0].forward[j];
            let a = (s[1].forward[j] - C64::new(0.0, l) * ff).norm() / ((1.0 + l.abs()) * norm);
            let b = (s[2].forward[j] + ff * (l * l)).norm() / ((1.0 + l.abs()).powi(2) * norm);
            dt = dt.max(a);
            dl = dl.max(b);
        }
        Ok(DiagonalizationDefect {
            t_defect: dt,
            l_defect: dl,
        })
    }

    /// `|⟨Tf, g⟩ - ⟨f, w₀ T w₀ g⟩| / (‖Tf‖ ‖g‖)`; in rank one the adjoint
    /// `-w₀ T_{w₀ξ} w₀` is `h ↦ (T ȟ)ˇ`.
    pub fn skew_adjoint_defect(&self, f: SharedFn, g: SharedFn) -> f64 {
        let tf = ApplyT::new(&self.cfg, f.clone());
        let adj = Reflected(Arc::new(ApplyT::new(&self.cfg, Arc::new(Reflected(g.clone())))));
        let lhs = self.inner(&tf, g.as_ref());
        let rhs = self.inner(f.as_ref(), &adj);
        (lhs - rhs).norm() / (self.norm_l2(&tf) * self.norm_l2(g.as_ref()))
    }
}

/// Reference bump used for calibration: mildly asymmetric, order 16.
pub fn reference_bump(half_width: f64) -> PolyBump {
    PolyBump::new(0.0, half_width, 16).with_poly(vec![C64::new(1.0, 0.0), C64::new(0.3, 0.0)])
}
