use std::sync::Arc;

use cwl_core::cherednik_transform::{
    apply_l, apply_t, mirrored, radial_rule, Gaussian, KernelFunction, LinearCombination,
    PolyBump, SampledFunction, SharedFn, SmoothFunction, SpectralFunction, Transformer,
};
use cwl_core::opdam_kernel::KernelSolver;
use cwl_core::quadrature::{ComplexSum, Rule};
use cwl_core::root_system::{build_root_system, Family};
use cwl_core::special_fn::RadialProfile;
use cwl_core::Complex64 as C64;

fn a1(k: f64) -> Transformer {
    Transformer::new(&build_root_system(Family::A1, &[k]).unwrap()).unwrap()
}

fn line_rule(lmax: f64) -> Rule {
    mirrored(&radial_rule(lmax, 0.5, 16))
}

fn bump(c: f64, w: f64, m: u32, p: &[(f64, f64)]) -> SharedFn {
    Arc::new(PolyBump::new(c, w, m).with_poly(p.iter().map(|&(a, b)| C64::new(a, b)).collect()))
}

fn suite() -> Vec<SharedFn> {
    vec![
        bump(0.0, 1.0, 16, &[(1.0, 0.0)]),
        bump(0.2, 0.8, 16, &[(1.0, 0.0), (0.5, 0.0)]),
        bump(-0.3, 0.7, 18, &[(0.0, 1.0), (1.0, -0.4), (0.0, 0.3)]),
        bump(0.45, 0.5, 20, &[(1.0, 0.0)]),
        bump(0.0, 0.3, 24, &[(1.0, 0.0), (-0.7, 0.2)]),
    ]
}

#[test]
fn trivial_multiplicity_gives_the_euclidean_transform() {
    let t = a1(0.0);
    let f = bump(0.1, 0.8, 10, &[(1.0, 0.0), (0.2, -0.1)]);
    let lambdas = [0.0, 0.7, -3.0, 12.5, 40.0];
    let got = t.forward(f.as_ref(), &lambdas).unwrap();
    let oracle = Rule::composite(&[-0.7, 0.9], 200);
    for (l, v) in lambdas.iter().zip(&got.values) {
        let mut s = ComplexSum::default();
        for (&x, &w) in oracle.nodes.iter().zip(&oracle.weights) {
            s.add(f.value(x) * C64::new(0.0, -l * x).exp() * w);
        }
        assert!((s.value() - v).norm() < 1e-12, "λ={l}");
    }
}

#[test]
fn even_bump_transform_matches_radial_profile_when_k_vanishes() {
    let t = a1(0.0);
    let f = PolyBump::new(0.0, 1.3, 7);
    let h = RadialProfile::new(1.3, 7, 1, 1.0).unwrap();
    let lambdas: Vec<f64> = (0..40).map(|j| 0.77 * j as f64).collect();
    let got = t.forward(&f, &lambdas).unwrap();
    for (l, v) in lambdas.iter().zip(&got.values) {
        assert!((v - h.eval_radius(*l)).norm() < 1e-12, "λ={l}: {v} vs {}", h.eval_radius(*l));
    }
    let dense: Vec<f64> = (1..4000).map(|j| 0.05 * j as f64).collect();
    let e = t.forward(&f, &dense).unwrap().decay_exponent().unwrap();
    assert!((e - h.decay_exponent()).abs() < 0.3, "{e} vs {}", h.decay_exponent());
}

#[test]
fn transform_is_linear() {
    let t = a1(1.0);
    let (f, g) = (suite()[1].clone(), suite()[2].clone());
    let (a, b) = (C64::new(0.3, -1.1), C64::new(2.0, 0.5));
    let comb = LinearCombination(vec![(a, f.clone()), (b, g.clone())]);
    let lambdas = [-5.0, -0.3, 0.0, 2.2, 17.0];
    let s = t.transform_batch(&[f.as_ref(), g.as_ref(), &comb], &lambdas).unwrap();
    for j in 0..lambdas.len() {
        let want = s[0].forward[j] * a + s[1].forward[j] * b;
        assert!((s[2].forward[j] - want).norm() < 1e-13 * (1.0 + want.norm()));
    }
}

#[test]
fn tilde_transform_definitions_agree() {
    for k in [0.5, 1.0, 1.5] {
        let t = a1(k);
        let lambdas: Vec<f64> = (-10..=10).map(|j| 1.3 * j as f64).collect();
        for g in suite() {
            let a = t.tilde(g.as_ref(), &lambdas).unwrap();
            let b = t.tilde_by_reflection(g.clone(), &lambdas).unwrap();
            for (x, y) in a.values.iter().zip(&b.values) {
                assert!((x - y).norm() < 1e-8, "k={k}: {x} vs {y}");
            }
        }
        let even = PolyBump::new(0.0, 0.9, 12);
        let f = t.forward(&even, &lambdas).unwrap();
        let ft = t.tilde(&even, &lambdas).unwrap();
        for (x, y) in f.values.iter().zip(&ft.values) {
            assert!((x.conj() - y).norm() < 1e-12);
        }
    }
}

#[test]
fn calibration_is_euclidean_for_trivial_multiplicity() {
    let t = a1(0.0);
    let c = t.calibrate_c0(2.0, &line_rule(60.0), 1e-8).unwrap();
    assert!((c.c0 - std::f64::consts::FRAC_1_PI).abs() < 1e-9, "{}", c.c0);
}

#[test]
fn calibration_is_reference_independent_and_scales_with_density() {
    for k in [0.5, 1.0, 1.5] {
        let t = a1(k);
        let rule = line_rule(60.0);
        let c = t.calibrate_c0(2.0, &rule, 1e-8).unwrap();
        assert!(c.spread < 1e-8 && c.round_trip < 1e-7, "k={k}: {c:?}");
        let mut t2 = t.clone();
        t2.density = t2.density.clone().with_scale(2.0);
        let c2 = t2.calibrate_c0(2.0, &rule, 1e-8).unwrap();
        assert!((c2.c0 * 2.0 - c.c0).abs() < 1e-10 * c.c0);
    }
}

#[test]
fn round_trip_on_five_functions() {
    for k in [0.5, 1.0] {
        let t = a1(k);
        let c0 = t.calibrate_c0(2.0, &line_rule(60.0), 1e-8).unwrap().c0;
        let rule = line_rule(250.0);
        for f in suite() {
            let e = t.round_trip_error(f.as_ref(), &rule, c0).unwrap();
            assert!(e < 1e-6, "k={k}: {e}");
        }
        let zero = LinearCombination::default();
        let out = t.inverse(&rule, &vec![C64::new(0.0, 0.0); rule.len()], &[0.0, 0.5], c0).unwrap();
        assert!(out.iter().all(|v| v.norm() == 0.0));
        assert_eq!(zero.value(0.3), C64::new(0.0, 0.0));
    }
}

#[test]
fn plancherel_identity_holds() {
    for k in [0.0, 0.5, 1.0] {
        let t = a1(k);
        let c0 = t.calibrate_c0(2.0, &line_rule(60.0), 1e-8).unwrap().c0;
        let rule = line_rule(120.0);
        let s = suite();
        let left = bump(-0.6, 0.3, 16, &[(1.0, 0.0)]);
        let right = bump(0.5, 0.3, 16, &[(1.0, 0.0)]);
        let pairs: Vec<(SharedFn, SharedFn)> = vec![
            (s[0].clone(), s[0].clone()),
            (s[0].clone(), s[1].clone()),
            (s[1].clone(), s[2].clone()),
            (s[2].clone(), s[3].clone()),
            (left, right),
        ];
        for (f, g) in pairs {
            let d = t.plancherel_check(f.as_ref(), g.as_ref(), &rule, c0).unwrap();
            assert!(d.defect < 1e-6, "k={k}: {d:?}");
        }
    }
}

#[test]
fn operators_are_diagonalised_and_skew_adjoint() {
    for k in [0.0, 0.5, 1.0, 1.5] {
        let t = a1(k);
        let lambdas: Vec<f64> = (-30..=30).map(|j| 0.9 * j as f64).collect();
        for f in suite().into_iter().take(4) {
            let d = t.diagonalization_check(f.clone(), &lambdas).unwrap();
            assert!(d.t_defect < 1e-6 && d.l_defect < 1e-6, "k={k}: {d:?}");
        }
        let s = suite();
        for (f, g) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            let d = t.skew_adjoint_defect(s[f].clone(), s[g].clone());
            assert!(d < 1e-8, "k={k}: {d}");
        }
    }
}

#[test]
fn bc1_operator_identities() {
    let t = Transformer::new(&build_root_system(Family::BC1, &[0.5, 1.0]).unwrap()).unwrap();
    let s = suite();
    let lambdas: Vec<f64> = (-10..=10).map(|j| 1.7 * j as f64).collect();
    let d = t.diagonalization_check(s[1].clone(), &lambdas).unwrap();
    assert!(d.t_defect < 1e-6 && d.l_defect < 1e-6, "{d:?}");
    assert!(t.skew_adjoint_defect(s[2].clone(), s[1].clone()) < 1e-8);
}

#[test]
fn even_function_reflection_term_vanishes() {
    let t = a1(1.0);
    let f: SharedFn = Arc::new(PolyBump::new(0.0, 1.0, 8));
    for &x in &[-0.5, 0.0, 0.25] {
        let want = f.deriv(x, 1) - f.value(x) * t.cfg.rho;
        assert!((apply_t(&t.cfg, f.clone(), x) - want).norm() < 1e-13);
    }
    let zero = build_root_system(Family::A1, &[0.0]).unwrap();
    let t0 = Transformer::new(&zero).unwrap();
    let g: SharedFn = Arc::new(PolyBump::new(0.2, 0.7, 8));
    for &x in &[-0.3, 0.1, 0.4] {
        assert!((apply_l(&t0.cfg, g.clone(), x) - g.deriv(x, 2)).norm() < 1e-12);
    }
}

#[test]
fn kernel_is_an_eigenfunction_of_t() {
    for k in [0.5, 1.0, 2.0] {
        let t = a1(k);
        let solver = KernelSolver::new(t.cfg.clone(), 10.0, 3.0);
        for l in [C64::new(0.0, 4.0), C64::new(0.5, -2.0), C64::new(1.2, 0.0)] {
            let g: SharedFn = Arc::new(KernelFunction(Arc::new(solver.solve(l).unwrap())));
            for j in 1..=28 {
                let x = -2.8 + 0.2 * j as f64;
                if x.abs() < 0.05 {
                    continue;
                }
                let tg = apply_t(&t.cfg, g.clone(), x);
                let want = g.value(x) * l;
                assert!((tg - want).norm() <= 1e-7 * want.norm().max(1e-3), "k={k} λ={l} x={x}");
            }
        }
    }
}

#[test]
fn laplacian_of_sampled_kernel() {
    let t = a1(1.0);
    let solver = KernelSolver::new(t.cfg.clone(), 5.0, 2.0);
    let lam = 3.0;
    let path = solver.solve(C64::new(0.0, lam)).unwrap();
    let xs = SampledFunction::uniform_grid(2.0, 800);
    let vals = xs.iter().map(|&x| path.eval(x).unwrap()).collect();
    let g: SharedFn = Arc::new(SampledFunction::new(xs, vals, 2.0).unwrap());
    for &x in &[-1.2, -0.4, 0.3, 1.1] {
        let lg = apply_l(&t.cfg, g.clone(), x);
        let want = -g.value(x) * (lam * lam);
        assert!((lg - want).norm() < 1e-5 * want.norm(), "x={x}: {lg} vs {want}");
    }
}

#[test]
fn energy_form_is_nonpositive() {
    for k in [0.5, 1.0, 2.0] {
        let t = a1(k).with_window(6.0);
        let cfg = t.cfg.clone();
        for (c, w) in [(0.0, 0.5), (0.4, 0.3), (-1.0, 0.7)] {
            let f: SharedFn = Arc::new(Gaussian { center: c, width: w });
            let lf = cwl_core::cherednik_transform::ApplyT::new(
                &cfg,
                Arc::new(cwl_core::cherednik_transform::ApplyT::new(&cfg, f.clone())),
            );
            let e = t.inner(&lf, f.as_ref());
            assert!(e.re <= 1e-10 && e.im.abs() < 1e-8 * e.norm(), "k={k}: {e}");
        }
    }
}

#[test]
fn paley_wiener_decay() {
    let t = a1(1.0);
    let f = PolyBump::new(0.1, 0.8, 16);
    let lambdas: Vec<f64> = (0..2000).map(|j| 0.1 * j as f64).collect();
    let s = t.forward(&f, &lambdas).unwrap();
    let e = s.decay_exponent().unwrap();
    assert!(e > 6.0, "{e}");
    let sup6 = s.weighted_sup(6.0);
    assert!(sup6.is_finite() && sup6 < 1e6);
}

#[test]
fn spectral_function_csv_round_trip() {
    let s = SpectralFunction {
        lambdas: vec![-1.5, 0.0, 2.25],
        values: vec![C64::new(1.0, -2.0), C64::new(0.1, 0.0), C64::new(-3.5e-17, 4.0)],
        radius: Some(1.0),
    };
    let mut buf = Vec::new();
    s.write_csv(&mut buf).unwrap();
    let r = SpectralFunction::read_csv(&buf[..]).unwrap();
    assert_eq!(r.lambdas, s.lambdas);
    assert_eq!(r.values, s.values);
    assert!(SpectralFunction::read_csv("lambda,re\n1,2\n".as_bytes()).is_err());
}

#[test]
fn sampled_function_supports_t() {
    let t = a1(0.5);
    let f: SharedFn = Arc::new(PolyBump::new(0.1, 0.8, 12));
    let sf: SharedFn = Arc::new(SampledFunction::from_function(f.as_ref(), SampledFunction::uniform_grid(1.0, 500)).unwrap());
    for &x in &[-0.5, -0.1, 0.0, 0.33] {
        let a = apply_t(&t.cfg, f.clone(), x);
        let b = apply_t(&t.cfg, sf.clone(), x);
        assert!((a - b).norm() < 1e-7 * (1.0 + a.norm()), "x={x}: {a} vs {b}");
    }
}
