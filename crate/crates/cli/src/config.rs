//! Experiment configuration: defaults, the `key = value` file format and
//! `CWL_*` environment overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cwl_core::wave_energy::DataMode;
use cwl_core::Family;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub origin: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.origin, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Which initial data are switched on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataChoice {
    Both,
    Displacement,
    Velocity,
}

impl FromStr for DataChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "both" => Ok(Self::Both),
            "displacement" | "f" => Ok(Self::Displacement),
            "velocity" | "g" => Ok(Self::Velocity),
            _ => Err(format!("expected both, displacement or velocity, got `{s}`")),
        }
    }
}

impl DataChoice {
    pub fn displacement(self) -> bool {
        self != Self::Velocity
    }

    pub fn velocity(self) -> bool {
        self != Self::Displacement
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    pub conservation: f64,
    pub strict: f64,
    pub non_degeneracy: f64,
    pub rate_fraction: f64,
    pub r_squared: f64,
    pub slope_slack: f64,
    pub plancherel: f64,
    pub kernel: f64,
    pub skew_adjoint: f64,
    pub diagonalization: f64,
    pub density: f64,
    pub dalembert: f64,
    pub propagation: f64,
    pub dual_path: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        use cwl_core::tolerances as t;
        Self {
            conservation: t::CONSERVATION,
            strict: t::STRICT_EQUIPARTITION,
            non_degeneracy: t::NON_DEGENERACY,
            rate_fraction: t::EXPONENTIAL_RATE_FRACTION,
            r_squared: t::EXPONENTIAL_R_SQUARED,
            slope_slack: t::POLYNOMIAL_SLOPE_SLACK,
            plancherel: t::PLANCHEREL,
            kernel: t::KERNEL_RESIDUAL,
            skew_adjoint: t::SKEW_ADJOINT,
            diagonalization: t::DIAGONALIZATION,
            density: t::DENSITY_POLYNOMIAL,
            dalembert: t::DALEMBERT,
            propagation: t::FINITE_PROPAGATION,
            dual_path: t::DUAL_PATH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub family: Family,
    pub k: Vec<f64>,
    pub mode: DataMode,
    pub data: DataChoice,
    pub radius: f64,
    /// `0` picks the smallest order meeting the decay budget.
    pub profile_order: u32,
    pub lambda_max: f64,
    pub grid_order: usize,
    pub circle_points: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_count: usize,
    pub fit_t_min: f64,
    pub fit_t_max: f64,
    pub fit_ratio: f64,
    pub propagation_times: Vec<f64>,
    pub table_points: usize,
    pub density_samples: usize,
    pub pole_window: f64,
    pub kernel_lambdas: usize,
    pub kernel_xs: usize,
    pub kernel_x_max: f64,
    pub kernel_re_max: f64,
    pub kernel_im_max: f64,
    /// Relative jitter of the time grid, drawn from `seed`.
    pub jitter: f64,
    pub tolerances: Tolerances,
    pub out: PathBuf,
    pub seed: u64,
    /// `0` lets the thread pool decide.
    pub threads: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            family: Family::A1,
            k: vec![1.0],
            mode: DataMode::RankOneTransform,
            data: DataChoice::Both,
            radius: 1.0,
            profile_order: 0,
            lambda_max: 80.0,
            grid_order: 10,
            circle_points: 64,
            t_min: 0.0,
            t_max: 8.0,
            t_count: 50,
            fit_t_min: 2.0,
            fit_t_max: 12.0,
            fit_ratio: 1.4,
            propagation_times: vec![1.0, 2.0, 4.0],
            table_points: 201,
            density_samples: 1000,
            pole_window: 30.0,
            kernel_lambdas: 100,
            kernel_xs: 100,
            kernel_x_max: 3.0,
            kernel_re_max: 2.0,
            kernel_im_max: 30.0,
            jitter: 0.0,
            tolerances: Tolerances::default(),
            out: PathBuf::from("out"),
            seed: 0,
            threads: 0,
        }
    }
}

/// Every accepted key, in documentation order.
#[cfg(test)]
pub const KEYS: &[&str] = &[
    "family",
    "k",
    "mode",
    "data",
    "radius",
    "profile_order",
    "lambda_max",
    "grid_order",
    "circle_points",
    "t_min",
    "t_max",
    "t_count",
    "fit_t_min",
    "fit_t_max",
    "fit_ratio",
    "propagation_times",
    "table_points",
    "density_samples",
    "pole_window",
    "kernel_lambdas",
    "kernel_xs",
    "kernel_x_max",
    "kernel_re_max",
    "kernel_im_max",
    "jitter",
    "tol_conservation",
    "tol_strict",
    "tol_non_degeneracy",
    "tol_rate_fraction",
    "tol_r_squared",
    "tol_slope_slack",
    "tol_plancherel",
    "tol_kernel",
    "tol_skew_adjoint",
    "tol_diagonalization",
    "tol_density",
    "tol_dalembert",
    "tol_propagation",
    "tol_dual_path",
    "out",
    "seed",
    "threads",
];

fn parse<T: FromStr>(value: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    value.parse::<T>().map_err(|e| e.to_string())
}

fn parse_list(value: &str) -> Result<Vec<f64>, String> {
    value
        .split(',')
        .map(|v| parse_number(v.trim()))
        .collect()
}

/// Plain floats or fractions such as `3/2`.
fn parse_number(value: &str) -> Result<f64, String> {
    match value.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (parse(a.trim())?, parse(b.trim())?);
            if b == 0.0 {
                return Err(format!("zero denominator in `{value}`"));
            }
            Ok(a / b)
        }
        None => parse(value),
    }
}

fn parse_mode(value: &str) -> Result<DataMode, String> {
    match value {
        "rank-one-transform" => Ok(DataMode::RankOneTransform),
        "model-profile" => Ok(DataMode::ModelProfile),
        _ => Err(format!("expected rank-one-transform or model-profile, got `{value}`")),
    }
}

impl ExperimentConfig {
    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let v = value.trim();
        let tol = &mut self.tolerances;
        match key {
            "family" => self.family = parse(v)?,
            "k" => self.k = parse_list(v)?,
            "mode" => self.mode = parse_mode(v)?,
            "data" => self.data = parse(v)?,
            "radius" => self.radius = parse_number(v)?,
            "profile_order" => self.profile_order = parse(v)?,
            "lambda_max" => self.lambda_max = parse_number(v)?,
            "grid_order" => self.grid_order = parse(v)?,
            "circle_points" => self.circle_points = parse(v)?,
            "t_min" => self.t_min = parse_number(v)?,
            "t_max" => self.t_max = parse_number(v)?,
            "t_count" => self.t_count = parse(v)?,
            "fit_t_min" => self.fit_t_min = parse_number(v)?,
            "fit_t_max" => self.fit_t_max = parse_number(v)?,
            "fit_ratio" => self.fit_ratio = parse_number(v)?,
            "propagation_times" => self.propagation_times = parse_list(v)?,
            "table_points" => self.table_points = parse(v)?,
            "density_samples" => self.density_samples = parse(v)?,
            "pole_window" => self.pole_window = parse_number(v)?,
            "kernel_lambdas" => self.kernel_lambdas = parse(v)?,
            "kernel_xs" => self.kernel_xs = parse(v)?,
            "kernel_x_max" => self.kernel_x_max = parse_number(v)?,
            "kernel_re_max" => self.kernel_re_max = parse_number(v)?,
            "kernel_im_max" => self.kernel_im_max = parse_number(v)?,
            "jitter" => self.jitter = parse_number(v)?,
            "tol_conservation" => tol.conservation = parse_number(v)?,
            "tol_strict" => tol.strict = parse_number(v)?,
            "tol_non_degeneracy" => tol.non_degeneracy = parse_number(v)?,
            "tol_rate_fraction" => tol.rate_fraction = parse_number(v)?,
            "tol_r_squared" => tol.r_squared = parse_number(v)?,
            "tol_slope_slack" => tol.slope_slack = parse_number(v)?,
            "tol_plancherel" => tol.plancherel = parse_number(v)?,
            "tol_kernel" => tol.kernel = parse_number(v)?,
            "tol_skew_adjoint" => tol.skew_adjoint = parse_number(v)?,
            "tol_diagonalization" => tol.diagonalization = parse_number(v)?,
            "tol_density" => tol.density = parse_number(v)?,
            "tol_dalembert" => tol.dalembert = parse_number(v)?,
            "tol_propagation" => tol.propagation = parse_number(v)?,
            "tol_dual_path" => tol.dual_path = parse_number(v)?,
            "out" => self.out = PathBuf::from(v),
            "seed" => self.seed = parse(v)?,
            "threads" => self.threads = parse(v)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Applies a configuration file on top of `self`. Blank lines and lines
    /// starting with `#` are ignored; a key may appear once.
    pub fn apply_text(&mut self, text: &str, name: &str) -> Result<(), ConfigError> {
        let mut seen: Vec<String> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let origin = format!("{name}:{}", i + 1);
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| ConfigError {
                origin: origin.clone(),
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            if seen.iter().any(|s| s == key) {
                return Err(err(format!("duplicate key `{key}`")));
            }
            self.set(key, value).map_err(|m| err(format!("{key}: {m}")))?;
            seen.push(key.to_string());
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            origin: path.display().to_string(),
            message: e.to_string(),
        })?;
        self.apply_text(&text, &path.display().to_string())
    }

    /// Applies `CWL_<KEY>` overrides from `vars`.
    pub fn apply_env<I: IntoIterator<Item = (String, String)>>(&mut self, vars: I) -> Result<(), ConfigError> {
        let mut found: Vec<(String, String, String)> = vars
            .into_iter()
            .filter_map(|(name, value)| {
                let key = name.strip_prefix("CWL_")?.to_ascii_lowercase();
                Some((name, key, value))
            })
            .collect();
        found.sort();
        for (name, key, value) in found {
            self.set(&key, &value).map_err(|message| ConfigError { origin: name, message })?;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.family.dim()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |message: String| {
            Err(ConfigError {
                origin: "config".into(),
                message,
            })
        };
        let t = &self.tolerances;
        let tolerances = [
            ("tol_conservation", t.conservation),
            ("tol_strict", t.strict),
            ("tol_non_degeneracy", t.non_degeneracy),
            ("tol_rate_fraction", t.rate_fraction),
            ("tol_r_squared", t.r_squared),
            ("tol_slope_slack", t.slope_slack),
            ("tol_plancherel", t.plancherel),
            ("tol_kernel", t.kernel),
            ("tol_skew_adjoint", t.skew_adjoint),
            ("tol_diagonalization", t.diagonalization),
            ("tol_density", t.density),
            ("tol_dalembert", t.dalembert),
            ("tol_propagation", t.propagation),
            ("tol_dual_path", t.dual_path),
        ];
        if let Some((name, v)) = tolerances.iter().find(|(_, v)| !(*v > 0.0)) {
            return fail(format!("{name} must be positive, got {v}"));
        }
        if self.k.len() != self.family.orbit_count() {
            return fail(format!(
                "family {} takes {} multiplicities, got {}",
                self.family,
                self.family.orbit_count(),
                self.k.len()
            ));
        }
        match self.mode {
            DataMode::RankOneTransform if self.dim() != 1 => {
                return fail(format!("rank-one-transform mode needs a rank-one family, got {}", self.family))
            }
            DataMode::ModelProfile if self.dim() > 2 => {
                return fail(format!("model-profile mode supports rank at most 2, got {}", self.family))
            }
            _ => {}
        }
        let positive = [
            ("radius", self.radius),
            ("lambda_max", self.lambda_max),
            ("t_max", self.t_max),
            ("fit_t_min", self.fit_t_min),
            ("pole_window", self.pole_window),
            ("kernel_x_max", self.kernel_x_max),
        ];
        if let Some((name, v)) = positive.iter().find(|(_, v)| !(*v > 0.0)) {
            return fail(format!("{name} must be positive, got {v}"));
        }
        if !(self.t_min <= self.t_max) || self.t_count < 2 {
            return fail("time grid needs t_min <= t_max and t_count >= 2".into());
        }
        if !(self.fit_t_max > self.fit_t_min) || !(self.fit_ratio > 1.0) {
            return fail("fit grid needs fit_t_max > fit_t_min and fit_ratio > 1".into());
        }
        if !(0.0..0.5).contains(&self.jitter) {
            return fail(format!("jitter must lie in [0, 0.5), got {}", self.jitter));
        }
        if self.grid_order < 2 || self.table_points < 2 || self.kernel_lambdas == 0 || self.kernel_xs < 2 {
            return fail("grid sizes are too small".into());
        }
        Ok(())
    }
}
