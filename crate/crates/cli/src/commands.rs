use std::path::Path;
use std::sync::Arc;

use anyhow::Result;
use clap::ValueEnum;
use cwl_core::cherednik_transform::{
    mirrored, radial_rule, LinearCombination, PolyBump, SharedFn, SmoothFunction, Transformer,
};
use cwl_core::fit::geometric_grid;
use cwl_core::opdam_kernel::{verify_kernel_bound, KernelTable, RankOne};
use cwl_core::plancherel::{sphere_directions, strip_width, SpectralDensity};
use cwl_core::special_fn::RadialProfile;
use cwl_core::tolerances::FLOOR_FACTOR;
use cwl_core::wave_energy::*;
use cwl_core::{build_root_system, Complex64 as C64, RootSystemData};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::report::{Artifacts, Check, Log, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    PlancherelTable,
    PlancherelPoles,
    KernelEval,
    TransformCheck,
    WaveSim,
    Equipartition,
    DecayFit,
    ReportAll,
}

impl Command {
    pub const EXPERIMENTS: [Command; 7] = [
        Command::PlancherelTable,
        Command::PlancherelPoles,
        Command::KernelEval,
        Command::TransformCheck,
        Command::WaveSim,
        Command::Equipartition,
        Command::DecayFit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::PlancherelTable => "plancherel-table",
            Command::PlancherelPoles => "plancherel-poles",
            Command::KernelEval => "kernel-eval",
            Command::TransformCheck => "transform-check",
            Command::WaveSim => "wave-sim",
            Command::Equipartition => "equipartition",
            Command::DecayFit => "decay-fit",
            Command::ReportAll => "report-all",
        }
    }

    /// Why the command does not apply to `cfg`, if it does not.
    pub fn inapplicable(self, cfg: &ExperimentConfig) -> Option<String> {
        let whole = cfg.k.iter().all(|k| (k - k.round()).abs() < 1e-12);
        match self {
            Command::KernelEval | Command::TransformCheck if cfg.dim() != 1 => {
                Some(format!("needs a rank-one family, got {}", cfg.family))
            }
            Command::Equipartition if cfg.dim() % 2 == 0 || !whole => {
                Some("strict equipartition needs odd rank and integer multiplicities".into())
            }
            Command::DecayFit if cfg.dim() % 2 == 1 && whole => {
                Some("integer multiplicities in odd rank give strict equipartition, not decay".into())
            }
            Command::DecayFit if cfg.dim() % 2 == 0 && cfg.mode != DataMode::ModelProfile => {
                Some("even-rank decay fits run in model-profile mode".into())
            }
            _ => None,
        }
    }
}

/// Runs one experiment, writing its artifacts and `report.json` into `dir`.
pub fn run(cmd: Command, cfg: &ExperimentConfig, dir: &Path) -> Result<Report> {
    let mut files = Artifacts::new(dir)?;
    let mut report = Report::new(cmd.name(), cfg);
    if let Some(why) = cmd.inapplicable(cfg) {
        report.fail("preconditions", why);
    } else {
        match cmd {
            Command::PlancherelTable => plancherel_table(cfg, &mut report, &mut files)?,
            Command::PlancherelPoles => plancherel_poles(cfg, &mut report, &mut files)?,
            Command::KernelEval => kernel_eval(cfg, &mut report, &mut files)?,
            Command::TransformCheck => transform_check(cfg, &mut report, &mut files)?,
            Command::WaveSim => wave_sim(cfg, &mut report, &mut files)?,
            Command::Equipartition => equipartition(cfg, &mut report, &mut files)?,
            Command::DecayFit => decay_fit(cfg, &mut report, &mut files)?,
            Command::ReportAll => unreachable!("report-all is dispatched by the caller"),
        }
    }
    files.write_report(&mut report)?;
    Ok(report)
}

#[derive(Debug, Serialize)]
struct SubcommandOutcome {
    name: &'static str,
    pass: Option<bool>,
    skipped: Option<String>,
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    artifact: &'static str,
    version: &'static str,
    subcommand: &'static str,
    config: &'a ExperimentConfig,
    subcommands: Vec<SubcommandOutcome>,
    pass: bool,
}

/// Runs every applicable experiment into `dir/<name>` and writes a summary.
pub fn report_all(cfg: &ExperimentConfig, dir: &Path) -> Result<bool> {
    std::fs::create_dir_all(dir)?;
    let mut outcomes = Vec::new();
    for cmd in Command::EXPERIMENTS {
        let outcome = match cmd.inapplicable(cfg) {
            Some(why) => SubcommandOutcome {
                name: cmd.name(),
                pass: None,
                skipped: Some(why),
            },
            None => {
                let r = run(cmd, cfg, &dir.join(cmd.name()))?;
                SubcommandOutcome {
                    name: cmd.name(),
                    pass: Some(r.pass),
                    skipped: None,
                }
            }
        };
        eprintln!(
            "{:<17} {}",
            outcome.name,
            match (&outcome.pass, &outcome.skipped) {
                (Some(true), _) => "pass".to_string(),
                (Some(false), _) => "FAIL".to_string(),
                (None, Some(why)) => format!("skipped ({why})"),
                _ => String::new(),
            }
        );
        outcomes.push(outcome);
    }
    let pass = outcomes.iter().all(|o| o.pass != Some(false));
    let summary = Summary {
        artifact: "cwl",
        version: crate::report::VERSION,
        subcommand: Command::ReportAll.name(),
        config: cfg,
        subcommands: outcomes,
        pass,
    };
    std::fs::write(dir.join("report.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    Ok(pass)
}

fn system(cfg: &ExperimentConfig) -> cwl_core::Result<RootSystemData> {
    build_root_system(cfg.family, &cfg.k)
}

fn calibrated(sys: &RootSystemData) -> cwl_core::Result<(Transformer, f64)> {
    let t = Transformer::new(sys)?;
    let c0 = t.calibrate_c0(2.0, &mirrored(&radial_rule(60.0, 0.5, 16)), 1e-8)?.c0;
    Ok((t, c0))
}

fn real(cs: &[f64]) -> Vec<C64> {
    cs.iter().map(|&c| C64::new(c, 0.0)).collect()
}

/// Rank-one initial data of support radius `R`.
fn line_data(cfg: &ExperimentConfig) -> (SharedFn, SharedFn) {
    let r = cfg.radius;
    let zero: SharedFn = Arc::new(LinearCombination::default());
    let f: SharedFn = Arc::new(PolyBump::new(0.1 * r, 0.9 * r, 16).with_poly(real(&[1.0, 0.3])));
    let g: SharedFn = Arc::new(PolyBump::new(-0.15 * r, 0.85 * r, 16).with_poly(real(&[0.5, 0.0, -0.4])));
    (
        if cfg.data.displacement() { f } else { zero.clone() },
        if cfg.data.velocity() { g } else { zero },
    )
}

fn profile(cfg: &ExperimentConfig, sys: &RootSystemData) -> cwl_core::Result<RadialProfile> {
    let d = sys.dim;
    let n0 = 2.0 * sys.k_total() + d as f64 + 4.0;
    match cfg.profile_order {
        0 => RadialProfile::for_budget(cfg.radius, d, n0),
        m => RadialProfile::new(cfg.radius, m, d, n0),
    }
}

fn state(cfg: &ExperimentConfig, t_max: f64) -> cwl_core::Result<SpectralState> {
    let sys = system(cfg)?;
    let grid = GridSpec::new(cfg.lambda_max, t_max).with_order(cfg.grid_order);
    match cfg.mode {
        DataMode::RankOneTransform => {
            let (t, c0) = calibrated(&sys)?;
            let (f, g) = line_data(cfg);
            SpectralState::rank_one(&t, f.as_ref(), g.as_ref(), c0, grid)
        }
        DataMode::ModelProfile => {
            let p = profile(cfg, &sys)?;
            let f = cfg.data.displacement().then_some(&p);
            let g = cfg.data.velocity().then_some(&p);
            SpectralState::model_profile(&sys, f, g, grid, cfg.circle_points)
        }
    }
}

/// Linear grid on `[t_min, t_max]`; interior points move by up to
/// `jitter` cells, drawn from the seed.
pub fn time_grid(cfg: &ExperimentConfig) -> Vec<f64> {
    let mut ts = linear_times(cfg.t_min, cfg.t_max, cfg.t_count);
    if cfg.jitter > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let h = (cfg.t_max - cfg.t_min) / (cfg.t_count - 1) as f64;
        let n = ts.len();
        for t in &mut ts[1..n - 1] {
            *t += cfg.jitter * h * rng.gen_range(-1.0..1.0);
        }
    }
    ts
}

fn plancherel_table(cfg: &ExperimentConfig, report: &mut Report, files: &mut Artifacts) -> Result<()> {
    let Some(sys) = report.stage("root system", || system(cfg)) else { return Ok(()) };
    let density = SpectralDensity::new(&sys);
    let d = sys.dim;
    report.result("dim", &d);
    report.result("degree_pi", &density.degree_pi());
    report.result("growth_degree", &density.growth_degree());
    report.result("integer_configuration", &density.is_integer_configuration());
    let n = cfg.table_points;
    let axis: Vec<f64> = linear_times(-cfg.lambda_max, cfg.lambda_max, n);
    let points: Vec<Vec<f64>> = match d {
        1 => axis.iter().map(|&l| vec![l]).collect(),
        2 => axis.iter().flat_map(|&a| axis.iter().map(move |&b| vec![a, b])).collect(),
        _ => {
            report.fail("table", format!("tables are produced for rank 1 and 2, got rank {d}"));
            return Ok(());
        }
    };
    let values = report.stage("table", || {
        points.iter().map(|l| density.eval_real(l)).collect::<cwl_core::Result<Vec<_>>>()
    });
    if let Some(values) = values {
        let header = if d == 1 { "lambda,nu_re,nu_im" } else { "lambda_1,lambda_2,nu_re,nu_im" };
        files.write("density.csv", |out| {
            writeln!(out, "{header}")?;
            for (l, v) in points.iter().zip(&values) {
                for c in l {
                    write!(out, "{c:e},")?;
                }
                writeln!(out, "{:e},{:e}", v.re, v.im)?;
            }
            Ok(())
        })?;
        if d == 1 {
            files.plot("density.gp", "density.csv", "spectral density", 1, &[(2, "nu")], Log::Y)?;
        } else {
            let text = "set datafile separator ','\nset terminal pngcairo size 900,700\nset output 'density.png'\nset title 'spectral density'\nset logscale z\nsplot 'density.csv' using 1:2:3 every ::1 with points pointtype 7 pointsize 0.2 title 'nu'\n";
            files.write("density.gp", |out| out.write_all(text.as_bytes()))?;
        }
    }
    if density.is_integer_configuration() {
        let poly = report.stage("polynomial form", || density.clone().with_polynomial_mode());
        if let Some(poly) = poly {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let samples: Vec<Vec<C64>> = (0..cfg.density_samples)
                .map(|_| {
                    (0..d)
                        .map(|_| C64::new(rng.gen_range(-10.0..10.0), rng.gen_range(-3.0..3.0)))
                        .collect()
                })
                .collect();
            let gap = report.stage("closed form", || {
                let mut worst = 0.0f64;
                for l in &samples {
                    let (a, b) = (density.eval(l)?, poly.eval(l)?);
                    worst = worst.max((a - b).norm() / a.norm());
                }
                Ok(worst)
            });
            if let Some(gap) = gap {
                report.result("closed_form_samples", &samples.len());
                report.check(Check::at_most("closed_form_gap", gap, cfg.tolerances.density));
            }
        }
    }
    Ok(())
}

fn plancherel_poles(cfg: &ExperimentConfig, report: &mut Report, files: &mut Artifacts) -> Result<()> {
    let Some(sys) = report.stage("root system", || system(cfg)) else { return Ok(()) };
    let density = SpectralDensity::new(&sys);
    let mut sw = strip_width(&density, &sphere_directions(sys.dim, 720));
    if cfg.pole_window != sw.ledger.window {
        let mut ledger = cwl_core::plancherel::PoleLedger::build(&density, cfg.pole_window);
        ledger.confirm_residues(&density, 2);
        sw.ledger = ledger;
    }
    report.result("gamma0", &sw.gamma0);
    report.result("minimizing_root", &sw.minimizing_root);
    report.result("sampled_estimate", &sw.sampled_estimate);
    report.result("residues_confirmed", &sw.residues_confirmed);
    report.result("genuine_poles", &sw.ledger.genuine().count());
    files.write("poles.csv", |out| {
        writeln!(out, "root_index,w,height,order,genuine,cancelled_by_pi,residue_confirmed")?;
        for e in &sw.ledger.entries {
            let confirmed = match e.residue_confirmed {
                Some(true) => "1",
                Some(false) => "0",
                None => "",
            };
            writeln!(
                out,
                "{},{:e},{:e},{},{},{},{}",
                e.root_index,
                e.w,
                e.height,
                e.order,
                u8::from(e.is_genuine()),
                u8::from(e.cancelled_by_pi),
                confirmed
            )?;
        }
        Ok(())
    })?;
    files.plot("poles.gp", "poles.csv", "pole heights and orders", 3, &[(4, "order")], Log::None)?;
    report.check(Check::at_least(
        "residues_confirmed",
        f64::from(u8::from(sw.residues_confirmed)),
        1.0,
    ));
    if let (Some(g), Some(s)) = (sw.gamma0, sw.sampled_estimate) {
        report.check(Check::at_least("sampled_over_exact_gamma0", s / g, 1.0 - 1e-12));
    }
    Ok(())
}

fn kernel_eval(cfg: &ExperimentConfig, report: &mut Report, files: &mut Artifacts) -> Result<()> {
    let Some(rank_one) = report.stage("root system", || RankOne::from_system(&system(cfg)?)) else {
        return Ok(());
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let lambdas: Vec<C64> = (0..cfg.kernel_lambdas)
        .map(|_| {
            C64::new(
                rng.gen_range(-cfg.kernel_re_max..=cfg.kernel_re_max),
                rng.gen_range(-cfg.kernel_im_max..=cfg.kernel_im_max),
            )
        })
        .collect();
    let xs = linear_times(-cfg.kernel_x_max, cfg.kernel_x_max, cfg.kernel_xs);
    let Some(table) = report.stage("kernel table", || KernelTable::build(&rank_one, &lambdas, &xs)) else {
        return Ok(());
    };
    files.write("kernel_table.csv", |out| table.write_csv(out))?;
    let bound = verify_kernel_bound(&table);
    files.write("bound_margins.csv", |out| {
        writeln!(out, "log10_margin,count")?;
        for (edge, count) in &bound.margin_histogram {
            writeln!(out, "{edge:e},{count}")?;
        }
        Ok(())
    })?;
    files.plot("bound_margins.gp", "bound_margins.csv", "log10(bound / |G|)", 1, &[(2, "entries")], Log::None)?;
    let max_error = table.errors.iter().copied().fold(0.0, f64::max);
    report.result("entries", &table.len());
    report.result("worst_ratio", &bound.worst_ratio);
    report.result("max_error_estimate", &max_error);
    report.check(Check::at_most("bound_violations", bound.violations as f64, 0.0));
    report.check(Check::at_most("max_error_estimate", max_error, cfg.tolerances.kernel));
    Ok(())
}

fn bump(c: f64, w: f64, m: u32, p: &[(f64, f64)]) -> SharedFn {
    Arc::new(PolyBump::new(c, w, m).with_poly(p.iter().map(|&(a, b)| C64::new(a, b)).collect()))
}

/// Test functions for the transform identities.
fn suite() -> Vec<SharedFn> {
    vec![
        bump(0.0, 1.0, 16, &[(1.0, 0.0)]),
        bump(0.2, 0.8, 16, &[(1.0, 0.0), (0.5, 0.0)]),
        bump(-0.3, 0.7, 18, &[(0.0, 1.0), (1.0, -0.4), (0.0, 0.3)]),
        bump(0.45, 0.5, 20, &[(1.0, 0.0)]),
        bump(0.0, 0.3, 24, &[(1.0, 0.0), (-0.7, 0.2)]),
    ]
}

fn transform_check(cfg: &ExperimentConfig, report: &mut Report, files: &mut Artifacts) -> Result<()> {
    let Some(sys) = report.stage("root system", || system(cfg)) else { return Ok(()) };
    let Some(t) = report.stage("transformer", || Transformer::new(&sys)) else { return Ok(()) };
    let Some(cal) = report.stage("calibration", || {
        t.calibrate_c0(2.0, &mirrored(&radial_rule(60.0, 0.5, 16)), 1e-8)
    }) else {
        return Ok(());
    };
    report.result("calibration", &cal);
    let s = suite();
    let rule = mirrored(&radial_rule(cfg.lambda_max, 0.5, 16));
    let pairs = [(0, 0), (0, 1), (1, 2), (2, 3), (3, 4)];
    let defects = report.stage("plancherel", || {
        pairs
            .iter()
            .map(|&(a, b)| t.plancherel_check(s[a].as_ref(), s[b].as_ref(), &rule, cal.c0))
            .collect::<cwl_core::Result<Vec<_>>>()
    });
    if let Some(defects) = defects {
        let worst = defects.iter().map(|d| d.defect).fold(0.0, f64::max);
        report.result("plancherel", &defects);
        report.check(Check::at_most("plancherel_defect", worst, cfg.tolerances.plancherel));
    }
    let lambdas: Vec<f64> = (-30..=30).map(|j| 0.9 * j as f64).collect();
    let diag = report.stage("diagonalization", || {
        s.iter()
            .take(4)
            .map(|f| t.diagonalization_check(f.clone(), &lambdas))
            .collect::<cwl_core::Result<Vec<_>>>()
    });
    if let Some(diag) = diag {
        let worst = diag.iter().map(|d| d.t_defect.max(d.l_defect)).fold(0.0, f64::max);
        report.result("diagonalization", &diag);
        report.check(Check::at_most("diagonalization_defect", worst, cfg.tolerances.diagonalization));
    }
    let skew = [(0, 1), (1, 2), (2, 3), (3, 0)]
        .iter()
        .map(|&(a, b)| t.skew_adjoint_defect(s[a].clone(), s[b].clone()))
        .fold(0.0, f64::max);
    report.result("skew_adjoint_defect", &skew);
    report.check(Check::at_most("skew_adjoint_defect", skew, cfg.tolerances.skew_adjoint));
    let grid = linear_times(-cfg.lambda_max, cfg.lambda_max, cfg.table_points);
    let spectra = report.stage("spectrum", || {
        let f: &dyn SmoothFunction = s[1].as_ref();
        let mut b = t.transform_batch(&[f], &grid)?;
        Ok((b.pop().unwrap(), t.density_on(&grid)?))
    });
    if let Some((sp, nu)) = spectra {
        files.write("spectrum.csv", |out| {
            writeln!(out, "lambda,F_re,F_im,F_tilde_re,F_tilde_im,nu_re,abs_F")?;
            for (j, l) in grid.iter().enumerate() {
                let (a, b) = (sp.forward[j], sp.tilde[j]);
                writeln!(
                    out,
                    "{l:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                    a.re,
                    a.im,
                    b.re,
                    b.im,
                    nu[j].re,
                    a.norm()
                )?;
            }
            Ok(())
        })?;
        files.plot("spectrum.gp", "spectrum.csv", "|F f|", 1, &[(7, "|F f|")], Log::Y)?;
    }
    Ok(())
}

fn write_trace(files: &mut Artifacts, trace: &EnergyTrace) -> Result<()> {
    files.write("energy.csv", |out| trace.write_csv(out))?;
    files.write("difference.csv", |out| trace.write_difference_csv(out))?;
    files.plot("energy.gp", "energy.csv", "energies", 1, &[(2, "K"), (3, "P"), (4, "E")], Log::None)
}

fn wave_sim(cfg: &ExperimentConfig, report: &mut Report, files: &mut Artifacts) -> Result<()> {
    let times = time_grid(cfg);
    let t_max = times.iter().fold(0.0f64, |a, t| a.max(t.abs()));
    let Some(st) = report.stage("spectral state", || state(cfg, t_max)) else { return Ok(()) };
    report.result("c0", &st.c0);
    report.result("spectral_tail", &st.tail);
    let Some(c) = report.stage("conservation", || conservation_experiment(&st, &times)) else {
        return Ok(());
    };
    write_trace(files, &c.trace)?;
    report.result("drift", &c.drift);
    report.result("dual_path", &c.dual_path);
    report.check(Check::at_most("energy_drift", c.drift, cfg.tolerances.conservation));
    report.check(Check::at_most("dual_path", c.dual_path, cfg.tolerances.dual_path));
    let flat = cfg.dim() == 1 && cfg.k.iter().all(|&k| k == 0.0) && cfg.mode == DataMode::RankOneTransform;
    if flat {
        let (f, g) = line_data(cfg);
        let classical = report.stage("d'Alembert", || {
            times
                .iter()
                .map(|&t| dalembert_energies(f.as_ref(), g.as_ref(), t))
                .collect::<cwl_core::Result<Vec<_>>>()
        });
        if let Some(classical) = classical {
            files.write("dalembert.csv", |out| {
                writeln!(out, "t,K,P,E")?;
                for e in &classical {
                    writeln!(out, "{:e},{:e},{:e},{:e}", e.t, e.kinetic, e.potential, e.kinetic + e.potential)?;
                }
                Ok(())
            })?;
            let gap = classical
                .iter()
                .zip(&c.trace.samples)
                .map(|(e, s)| ((e.kinetic - s.kinetic).abs() + (e.potential - s.potential).abs()) / (e.kinetic + e.potential))
                .fold(0.0, f64::max);
            report.result("dalembert_gap", &gap);
            report.check(Check::at_most("dalembert_gap", gap, cfg.tolerances.dalembert));
        }
    }
    if cfg.mode == DataMode::RankOneTransform {
        let prop = report.stage("finite propagation", || {
            let sys = system(cfg)?;
            let (t, c0) = calibrated(&sys)?;
            let (f, g) = line_data(cfg);
            finite_propagation_check(&t, f.as_ref(), g.as_ref(), c0, &cfg.propagation_times, &ReconstructionSpec::default())
        });
        if let Some(p) = prop {
            files.write("propagation.csv", |out| {
                writeln!(out, "t,checked_radius,peak,outside,ratio")?;
                for s in &p.samples {
                    writeln!(out, "{:e},{:e},{:e},{:e},{:e}", s.t, s.checked_radius, s.peak, s.outside, s.ratio)?;
                }
                Ok(())
            })?;
            let worst = p.samples.iter().map(|s| s.ratio).fold(0.0, f64::max);
            report.result("propagation_delta", &p.delta);
            report.check(Check::at_most("propagation_ratio", worst, cfg.tolerances.propagation));
        }
    }
    Ok(())
}

fn equipartition(cfg: &ExperimentConfig, report: &mut Report, files: &mut Artifacts) -> Result<()> {
    let times = time_grid(cfg);
    let t_max = times.iter().fold(0.0f64, |a, t| a.max(t.abs()));
    let Some(st) = report.stage("spectral state", || state(cfg, t_max)) else { return Ok(()) };
    let Some(r) = report.stage("strict equipartition", || strict_equipartition_experiment(&st, &times)) else {
        return Ok(());
    };
    write_trace(files, &r.trace)?;
    let densities = radial_densities(&st);
    files.write("densities.csv", |out| densities.write_csv(out))?;
    files.plot("difference.gp", "difference.csv", "|P - K|", 1, &[(2, "P-K")], Log::None)?;
    report.result("radius", &r.radius);
    report.result("threshold", &r.threshold);
    report.result("max_beyond", &r.max_beyond);
    report.result("max_inside", &r.max_inside);
    report.result("evenness_defect", &evenness_defect(&st));
    report.check(Check::at_most("max_beyond", r.max_beyond, cfg.tolerances.strict));
    report.check(Check::at_least("max_inside", r.max_inside, cfg.tolerances.non_degeneracy));
    report.check(Check::at_most("dual_path", r.dual_path, cfg.tolerances.dual_path));
    Ok(())
}

fn write_fit(files: &mut Artifacts, trace: &EnergyTrace, fitted: impl Fn(f64) -> f64, window: (f64, f64), log: Log) -> Result<()> {
    files.write("decay.csv", |out| {
        writeln!(out, "t,abs_P_minus_K,floor,in_window,fitted")?;
        for s in &trace.samples {
            let inside = s.t.abs() >= window.0 && s.t.abs() <= window.1 && s.difference.abs() >= FLOOR_FACTOR * s.floor;
            writeln!(
                out,
                "{:e},{:e},{:e},{},{:e}",
                s.t,
                s.difference.abs(),
                s.floor,
                u8::from(inside),
                fitted(s.t.abs())
            )?;
        }
        Ok(())
    })?;
    files.plot("decay.gp", "decay.csv", "|P - K| and fit", 1, &[(2, "|P-K|"), (5, "fit")], log)
}

fn decay_fit(cfg: &ExperimentConfig, report: &mut Report, files: &mut Artifacts) -> Result<()> {
    let times = geometric_grid(cfg.fit_t_min, cfg.fit_t_max, cfg.fit_ratio);
    let t_max = cfg.fit_t_max.max(cfg.t_max);
    let Some(st) = report.stage("spectral state", || state(cfg, t_max)) else { return Ok(()) };
    let tol = &cfg.tolerances;
    if cfg.dim() % 2 == 1 {
        let Some(r) = report.stage("exponential fit", || exponential_decay_experiment(&st, &times)) else {
            return Ok(());
        };
        let (a, b) = (r.fit.intercept, r.fit.slope);
        write_fit(files, &r.trace, |t| (a + b * t).exp(), r.window, Log::Y)?;
        let required = 2.0 * tol.rate_fraction * r.gamma0;
        report.result("gamma0", &r.gamma0);
        report.result("rate", &r.rate);
        report.result("gamma_fit", &r.gamma_fit);
        report.result("required_rate", &required);
        report.result("r_squared", &r.r_squared);
        report.result("window", &r.window);
        report.check(Check::at_least("rate", r.rate, required));
        report.check(Check::at_least("r_squared", r.r_squared, tol.r_squared));
    } else {
        let Some(r) = report.stage("polynomial fit", || polynomial_decay_experiment(&st, &times)) else {
            return Ok(());
        };
        let (a, b) = (r.fit.intercept, r.fit.slope);
        write_fit(files, &r.trace, |t| (a + b * t.ln()).exp(), r.window, Log::XY)?;
        let required = r.bound + tol.slope_slack;
        report.result("slope", &r.slope);
        report.result("r_squared", &r.r_squared);
        report.result("bound", &r.bound);
        report.result("invariant_exponent", &r.invariant_exponent);
        report.result("beats_bound", &r.beats_bound);
        report.result("reaches_invariant_exponent", &r.reaches_invariant_exponent);
        report.result("window", &r.window);
        report.check(Check::at_most("slope", r.slope, required));
    }
    Ok(())
}
