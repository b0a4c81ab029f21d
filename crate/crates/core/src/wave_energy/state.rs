use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::cherednik_transform::{support_radius, SmoothFunction, Transformer};
use crate::error::{Error, Result};
use crate::plancherel::{sphere_directions, SpectralDensity};
use crate::quadrature::{uniform_breaks, NeumaierSum, Rule};
use crate::root_system::RootSystemData;
use crate::special_fn::RadialProfile;
use crate::tolerances::SPECTRAL_TAIL;

type C64 = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataMode {
    RankOneTransform,
    ModelProfile,
}

impl std::fmt::Display for DataMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DataMode::RankOneTransform => "rank-one-transform",
            DataMode::ModelProfile => "model-profile",
        })
    }
}

/// Radial grid on `[0, Λ]`: panels of width `π/(2(1+2 t_max))` carrying a
/// Gauss rule of fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub lambda_max: f64,
    pub t_max: f64,
    pub order: usize,
}

impl GridSpec {
    pub fn new(lambda_max: f64, t_max: f64) -> Self {
        Self {
            lambda_max,
            t_max: t_max.abs(),
            order: 10,
        }
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn panel_width(&self) -> f64 {
        PI / (2.0 * (1.0 + 2.0 * self.t_max))
    }

    /// Whether the panels resolve the oscillation at time `t`.
    pub fn resolves(&self, t: f64) -> bool {
        t.abs() <= self.t_max * (1.0 + 1e-12)
    }

    pub fn breaks(&self) -> Vec<f64> {
        uniform_breaks(0.0, self.lambda_max, self.panel_width())
    }
}

/// Spectral data sampled on the grid.
#[derive(Debug, Clone)]
pub enum SpectralValues {
    /// `𝓕f, 𝓕g, 𝓕̃f, 𝓕̃g, ν` at `r_i σ_s`, stored at index `i·n_σ + s`.
    Sampled {
        f: Vec<C64>,
        g: Vec<C64>,
        f_tilde: Vec<C64>,
        g_tilde: Vec<C64>,
        nu: Vec<C64>,
    },
    /// Real radial profiles (so `𝓕̃ = 𝓕`) and the sphere integral
    /// `N(r) = ∫ ν(rσ) dσ`.
    Radial {
        f: Vec<f64>,
        g: Vec<f64>,
        sphere: Vec<C64>,
    },
}

/// Sphere sums of the bracketed products: `a_ff = Σ_σ 𝓕f 𝓕̃f ν`,
/// `a_gg = Σ_σ 𝓕g 𝓕̃g ν`, `a_fg = Σ_σ (𝓕f 𝓕̃g + 𝓕g 𝓕̃f) ν`.
#[derive(Debug, Clone, Default)]
pub struct RadialCoefficients {
    pub ff: Vec<C64>,
    pub gg: Vec<C64>,
    pub fg: Vec<C64>,
}

/// Initial data on the spectral side of the wave equation.
#[derive(Debug, Clone)]
pub struct SpectralState {
    pub mode: DataMode,
    pub system: RootSystemData,
    pub dim: usize,
    /// Paley-Wiener radius of the data.
    pub radius: f64,
    pub c0: f64,
    pub grid: GridSpec,
    pub breaks: Vec<f64>,
    pub rule: Rule,
    pub directions: Vec<Vec<f64>>,
    pub direction_weights: Vec<f64>,
    pub values: SpectralValues,
    pub coefficients: RadialCoefficients,
    /// Share of the energy integrand carried by the outermost tenth of the grid.
    pub tail: f64,
}

impl SpectralState {
    /// Transforms of rank-one data `f, g` at `±r` on the grid.
    pub fn rank_one(
        transformer: &Transformer,
        f: &dyn SmoothFunction,
        g: &dyn SmoothFunction,
        c0: f64,
        grid: GridSpec,
    ) -> Result<Self> {
        let radius = [support_radius(f), support_radius(g)]
            .into_iter()
            .map(|r| r.ok_or_else(|| Error::Precondition("data must have compact support".into())))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let breaks = grid.breaks();
        let rule = Rule::composite(&breaks, grid.order);
        let lambdas: Vec<f64> = rule.nodes.iter().flat_map(|&r| [r, -r]).collect();
        let mut spectra = transformer.transform_batch(&[f, g], &lambdas)?;
        let gs = spectra.pop().unwrap();
        let fs = spectra.pop().unwrap();
        let nu = transformer.density_on(&lambdas)?;
        let values = SpectralValues::Sampled {
            f: fs.forward,
            g: gs.forward,
            f_tilde: fs.tilde,
            g_tilde: gs.tilde,
            nu,
        };
        Self::assemble(
            DataMode::RankOneTransform,
            transformer.system.clone(),
            radius,
            c0,
            grid,
            breaks,
            rule,
            sphere_directions(1, 0),
            vec![1.0, 1.0],
            values,
        )
    }

    /// Real W-invariant radial data with `𝓕f = h_f(‖λ‖)`, `𝓕g = h_g(‖λ‖)`,
    /// `c₀ = 1`. Dimensions one and two only; `circle_points` directions are
    /// used in dimension two.
    pub fn model_profile(
        system: &RootSystemData,
        f: Option<&RadialProfile>,
        g: Option<&RadialProfile>,
        grid: GridSpec,
        circle_points: usize,
    ) -> Result<Self> {
        let dim = system.dim;
        if dim > 2 {
            return Err(Error::Precondition(format!(
                "model-profile mode supports dimension 1 or 2, got {dim}"
            )));
        }
        if dim == 2 && (circle_points < 8 || circle_points % 2 == 1) {
            return Err(Error::Precondition(format!(
                "circle grid needs an even number (>= 8) of points, got {circle_points}"
            )));
        }
        let profiles = [f, g];
        let radius = profiles
            .iter()
            .flatten()
            .map(|p| p.radius)
            .fold(0.0, f64::max);
        if radius == 0.0 {
            return Err(Error::Precondition("model data needs at least one profile".into()));
        }
        if let Some(p) = profiles.iter().flatten().find(|p| p.dim != dim) {
            return Err(Error::Precondition(format!(
                "profile dimension {} does not match rank {dim}",
                p.dim
            )));
        }
        let density = SpectralDensity::new(system);
        let density = if density.is_integer_configuration() {
            density.with_polynomial_mode()?
        } else {
            density
        };
        let breaks = grid.breaks();
        let rule = Rule::composite(&breaks, grid.order);
        let (directions, direction_weights) = circle(dim, circle_points);
        let smooth = density.is_integer_configuration();
        let sphere = sphere_integral(&density, &rule.nodes, dim, circle_points, smooth)?;
        if dim == 2 {
            let check = sphere_integral(&density, &rule.nodes, dim, circle_points / 2, smooth)?;
            let scale = sphere.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let diff = sphere
                .iter()
                .zip(&check)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            if diff > 1e-10 * scale {
                return Err(Error::Quadrature(format!(
                    "sphere quadrature not converged with {circle_points} points (change {diff:e})"
                )));
            }
        }
        let eval = |p: Option<&RadialProfile>| -> Vec<f64> {
            rule.nodes
                .iter()
                .map(|&r| p.map_or(0.0, |p| p.eval_radius(r)))
                .collect()
        };
        let values = SpectralValues::Radial {
            f: eval(f),
            g: eval(g),
            sphere,
        };
        Self::assemble(
            DataMode::ModelProfile,
            system.clone(),
            radius,
            1.0,
            grid,
            breaks,
            rule,
            directions,
            direction_weights,
            values,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        mode: DataMode,
        system: RootSystemData,
        radius: f64,
        c0: f64,
        grid: GridSpec,
        breaks: Vec<f64>,
        rule: Rule,
        directions: Vec<Vec<f64>>,
        direction_weights: Vec<f64>,
        values: SpectralValues,
    ) -> Result<Self> {
        let mut state = Self {
            mode,
            dim: system.dim,
            system,
            radius,
            c0,
            grid,
            breaks,
            rule,
            directions,
            direction_weights,
            values,
            coefficients: RadialCoefficients::default(),
            tail: 0.0,
        };
        state.coefficients = state.coefficients_at(false);
        state.tail = state.tail_share();
        if !(state.tail <= SPECTRAL_TAIL) {
            return Err(Error::TailBudget {
                tail: state.tail,
                budget: SPECTRAL_TAIL,
            });
        }
        Ok(state)
    }

    pub fn radial_len(&self) -> usize {
        self.rule.len()
    }

    pub fn direction_count(&self) -> usize {
        self.directions.len()
    }

    /// `|R₀⁺|`, the number of positive indivisible roots.
    pub fn indivisible_count(&self) -> usize {
        self.system.indivisible_count()
    }

    /// Index of `-σ_s` in the direction list.
    fn antipode(&self, s: usize) -> usize {
        let n = self.directions.len();
        if self.dim == 1 {
            1 - s
        } else {
            (s + n / 2) % n
        }
    }

    /// Sphere sums at `r_i σ_s`, or at `-r_i σ_s` when `reflect` is set.
    pub(crate) fn coefficients_at(&self, reflect: bool) -> RadialCoefficients {
        let nr = self.radial_len();
        let mut out = RadialCoefficients {
            ff: Vec::with_capacity(nr),
            gg: Vec::with_capacity(nr),
            fg: Vec::with_capacity(nr),
        };
        match &self.values {
            SpectralValues::Sampled {
                f,
                g,
                f_tilde,
                g_tilde,
                nu,
            } => {
                let ns = self.direction_count();
                for i in 0..nr {
                    let (mut ff, mut gg, mut fg) = (C64::default(), C64::default(), C64::default());
                    for s in 0..ns {
                        let j = i * ns + if reflect { self.antipode(s) } else { s };
                        let w = nu[j] * self.direction_weights[s];
                        ff += f[j] * f_tilde[j] * w;
                        gg += g[j] * g_tilde[j] * w;
                        fg += (f[j] * g_tilde[j] + g[j] * f_tilde[j]) * w;
                    }
                    out.ff.push(ff);
                    out.gg.push(gg);
                    out.fg.push(fg);
                }
            }
            SpectralValues::Radial { f, g, sphere } => {
                let density = SpectralDensity::new(&self.system);
                for i in 0..nr {
                    let n = if reflect {
                        let polynomial = density.is_integer_configuration();
                        sphere_integral(&density, &[-self.rule.nodes[i]], self.dim, self.directions.len(), polynomial)
                            .map(|v| v[0])
                            .unwrap_or(C64::new(f64::NAN, 0.0))
                    } else {
                        sphere[i]
                    };
                    out.ff.push(n * (f[i] * f[i]));
                    out.gg.push(n * (g[i] * g[i]));
                    out.fg.push(n * (2.0 * f[i] * g[i]));
                }
            }
        }
        out
    }

    /// Integrand of `E` in absolute value, per radial node (weights included).
    pub(crate) fn energy_terms(&self) -> Vec<f64> {
        let c = &self.coefficients;
        self.rule
            .nodes
            .iter()
            .zip(&self.rule.weights)
            .enumerate()
            .map(|(i, (&r, &w))| {
                w * r.powi(self.dim as i32 - 1) * (r * r * c.ff[i].norm() + c.gg[i].norm())
            })
            .collect()
    }

    fn tail_share(&self) -> f64 {
        let terms = self.energy_terms();
        let cut = 0.9 * self.grid.lambda_max;
        let (mut all, mut outer) = (NeumaierSum::default(), NeumaierSum::default());
        for (&r, &e) in self.rule.nodes.iter().zip(&terms) {
            all.add(e);
            if r >= cut {
                outer.add(e);
            }
        }
        if all.value() == 0.0 {
            return 0.0;
        }
        outer.value() / all.value()
    }
}

fn circle(dim: usize, n: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let dirs = sphere_directions(dim, n);
    let w = if dim == 1 { 1.0 } else { 2.0 * PI / n as f64 };
    let weights = vec![w; dirs.len()];
    (dirs, weights)
}

/// Points on the circle of radius `r`: the base count for polynomial
/// densities, growing with `r` otherwise since `ν` then has angular layers of
/// width `~1/r` around the root hyperplanes.
fn circle_count(base: usize, r: f64, polynomial: bool) -> usize {
    if polynomial {
        base
    } else {
        base.max(2 * (1.5 * base as f64 * r).ceil() as usize)
    }
}

fn sphere_integral(
    density: &SpectralDensity,
    radii: &[f64],
    dim: usize,
    base: usize,
    polynomial: bool,
) -> Result<Vec<C64>> {
    use rayon::prelude::*;
    radii
        .par_iter()
        .map(|&r| {
            let (directions, weights) = circle(dim, circle_count(base, r.abs(), polynomial));
            let mut acc = crate::quadrature::ComplexSum::default();
            for (s, &w) in directions.iter().zip(&weights) {
                let l: Vec<f64> = s.iter().map(|x| x * r).collect();
                acc.add(density.eval_real(&l)? * w);
            }
            Ok(acc.value())
        })
        .collect()
}
