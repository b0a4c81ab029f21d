use cwl_core::fit::{fit_loglog, geometric_grid};
use cwl_core::plancherel::{
    growth_exponent_probe, real_point, sphere_directions, strip_width, SpectralDensity,
};
use cwl_core::root_system::{build_root_system, Family};
use cwl_core::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn density(f: Family, k: &[f64]) -> SpectralDensity {
    SpectralDensity::new(&build_root_system(f, k).unwrap())
}

fn integer_configurations() -> Vec<(Family, Vec<f64>)> {
    vec![
        (Family::A1, vec![1.0]),
        (Family::A1, vec![2.0]),
        (Family::A1, vec![3.0]),
        (Family::BC1, vec![1.0, 0.0]),
        (Family::BC1, vec![1.0, 1.0]),
        (Family::BC1, vec![2.0, 1.0]),
        (Family::A2, vec![1.0]),
        (Family::A2, vec![2.0]),
        (Family::B2, vec![1.0, 1.0]),
        (Family::B2, vec![2.0, 1.0]),
        (Family::B2, vec![1.0, 2.0]),
    ]
}

#[test]
fn gamma_and_polynomial_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (f, k) in integer_configurations() {
        let d = density(f, &k);
        let p = d.clone().with_polynomial_mode().unwrap();
        for _ in 0..1000 {
            let l: Vec<C64> = (0..d.dim())
                .map(|_| C64::new(rng.gen_range(-10.0..10.0), rng.gen_range(-3.0..3.0)))
                .collect();
            let a = d.eval(&l).unwrap();
            let b = p.eval(&l).unwrap();
            assert!((a - b).norm() <= 1e-10 * a.norm(), "{f} {k:?} at {l:?}: {a} vs {b}");
        }
    }
}

#[test]
fn polynomial_degree_is_twice_total_multiplicity() {
    for (f, k) in integer_configurations() {
        let d = density(f, &k).with_polynomial_mode().unwrap();
        assert_eq!(d.polynomial().unwrap().degree() as f64, d.growth_degree());
    }
}

#[test]
fn a1_k2_shape() {
    let d = density(Family::A1, &[2.0]);
    let shape = |z: C64| z * (z + C64::new(0.0, 2.0)) * (z * z + 1.0);
    let s2 = std::f64::consts::SQRT_2;
    let ratio0 = d.eval(&[C64::new(0.4, 0.1) / s2]).unwrap() / shape(C64::new(0.4, 0.1));
    for &z in &[C64::new(3.0, 0.0), C64::new(-1.2, 0.7), C64::new(8.0, -2.0)] {
        let r = d.eval(&[z / s2]).unwrap() / shape(z);
        assert!((r - ratio0).norm() < 1e-12 * ratio0.norm());
    }
}

#[test]
fn zero_multiplicity_is_power_of_half() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (f, k) in [
        (Family::A1, vec![0.0]),
        (Family::A2, vec![0.0]),
        (Family::B2, vec![0.0, 0.0]),
    ] {
        let d = density(f, &k);
        for _ in 0..50 {
            let l: Vec<C64> = (0..d.dim())
                .map(|_| C64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-0.5..0.5)))
                .collect();
            let want = 0.5f64.powi(d.degree_pi() as i32);
            assert!((d.eval(&l).unwrap() - want).norm() < 1e-13);
        }
    }
}

#[test]
fn pi_divides_density() {
    for (f, k) in [(Family::A1, vec![0.5]), (Family::A2, vec![0.5]), (Family::B2, vec![0.5, 1.5])] {
        let d = density(f, &k);
        for sigma in sphere_directions(d.dim(), 7) {
            let q: Vec<f64> = geometric_grid(1e-6, 1e-2, 3.0)
                .into_iter()
                .map(|z| {
                    let l: Vec<f64> = sigma.iter().map(|s| z * s).collect();
                    d.eval_real(&l).unwrap().norm() / z.powi(d.degree_pi() as i32)
                })
                .collect();
            let (lo, hi) = q.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
            assert!(hi.is_finite() && hi <= 1.5 * lo, "{f}: {lo}..{hi}");
        }
    }
}

#[test]
fn nu_tilde_does_not_vanish_on_real_directions() {
    for (f, k) in [(Family::A1, vec![0.5]), (Family::A2, vec![0.5]), (Family::B2, vec![0.5, 1.0])] {
        let d = density(f, &k);
        let c = d.factorization_constant().unwrap();
        assert!((c - C64::i().powi(d.degree_pi() as i32)).norm() < 1e-12);
        let mut min = f64::INFINITY;
        for sigma in sphere_directions(d.dim(), 16) {
            for j in 0..200 {
                let r = j as f64 * 0.05;
                let l: Vec<f64> = sigma.iter().map(|s| r * s).collect();
                min = min.min(d.nu_tilde(&real_point(&l)).unwrap().norm());
            }
        }
        assert!(min > 1e-3, "{f}: min |ν̃| = {min}");
    }
}

#[test]
fn weyl_symmetrised_density_is_nonnegative() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (f, k) in [(Family::A1, vec![0.5]), (Family::A2, vec![0.5]), (Family::B2, vec![1.5, 0.5])] {
        let rs = build_root_system(f, &k).unwrap();
        let d = SpectralDensity::new(&rs);
        for _ in 0..200 {
            let l: Vec<f64> = (0..rs.dim).map(|_| rng.gen_range(-6.0..6.0)).collect();
            let sum: C64 = rs.weyl.iter().map(|w| d.eval_real(&w.apply(&l)).unwrap()).sum();
            assert!(sum.im.abs() <= 1e-10 * sum.norm(), "{f}: {sum}");
            assert!(sum.re >= 0.0);
        }
    }
}

#[test]
fn strip_width_is_exact_in_coroot_direction_and_confirmed() {
    for (f, k, want) in [
        (Family::A1, vec![0.5], 0.5 / std::f64::consts::SQRT_2),
        (Family::A1, vec![1.5], 1.5 / std::f64::consts::SQRT_2),
        (Family::BC1, vec![0.5, 0.0], 0.25),
        (Family::A2, vec![0.5], 0.5 / std::f64::consts::SQRT_2),
        (Family::B2, vec![0.5, 1.0], 0.25),
    ] {
        let d = density(f, &k);
        let s = strip_width(&d, &sphere_directions(d.dim(), 720));
        assert!((s.value() - want).abs() < 1e-12, "{f} {k:?}: {}", s.value());
        assert!(s.residues_confirmed, "{f} {k:?}");
        assert!(s.sampled_estimate.unwrap() >= s.value() - 1e-12);
        assert!(s.sampled_estimate.unwrap() <= s.value() * 1.001);
        for e in s.ledger.genuine() {
            assert!(e.height >= s.value() - 1e-12);
        }
    }
}

#[test]
fn strip_width_is_infinite_for_integer_multiplicities() {
    for (f, k) in integer_configurations() {
        let d = density(f, &k);
        assert!(strip_width(&d, &sphere_directions(d.dim(), 8)).gamma0.is_none(), "{f} {k:?}");
    }
}

#[test]
fn strip_width_grows_with_non_integer_multiplicity() {
    let mut last = 0.0;
    for k in [0.1, 0.3, 0.5, 0.7, 0.9, 1.2, 1.5, 2.5] {
        let d = density(Family::A1, &[k]);
        let g = strip_width(&d, &sphere_directions(1, 0)).value();
        assert!(g >= last);
        last = g;
    }
}

#[test]
fn growth_exponents() {
    let s2 = std::f64::consts::SQRT_2;
    let p = growth_exponent_probe(&density(Family::A1, &[1.0]), &[1.0], 0.0).unwrap();
    assert!((p.large.slope - 2.0).abs() < 0.2);
    let p = growth_exponent_probe(&density(Family::A1, &[0.0]), &[1.0], 0.0).unwrap();
    assert!(p.large.slope.abs() < 1e-9);
    let d = density(Family::A2, &[0.5]);
    let sigma = [0.6, 0.8];
    let p = growth_exponent_probe(&d, &sigma, 0.5 * 0.5 / s2).unwrap();
    assert!((p.large.slope - 3.0).abs() < 0.2, "{}", p.large.slope);
    assert!(p.small.slope >= 3.0 - 0.1, "{}", p.small.slope);
}

#[test]
fn stirling_bound_dominates_density() {
    let d = density(Family::A1, &[0.5]);
    let (mut xs, mut vs, mut bs) = (vec![], vec![], vec![]);
    for r in geometric_grid(100.0, 1e4, 1.3) {
        let l = [C64::new(r, 0.0)];
        let v = d.eval(&l).unwrap().norm();
        let b = d.stirling_bound(&l).unwrap();
        assert!(v <= b);
        xs.push(r);
        vs.push(v);
        bs.push(b);
    }
    assert!((fit_loglog(&xs, &vs).unwrap().slope - 1.0).abs() < 0.05);
    let d1 = density(Family::A1, &[1.0]);
    let b1: Vec<f64> = xs.iter().map(|&r| d1.stirling_bound(&[C64::new(r, 0.0)]).unwrap()).collect();
    assert!((fit_loglog(&xs, &b1).unwrap().slope - 2.0).abs() < 0.05);
    let d0 = density(Family::A1, &[0.0]);
    let b0: Vec<f64> = xs.iter().map(|&r| d0.stirling_bound(&[C64::new(r, 0.0)]).unwrap()).collect();
    assert!(fit_loglog(&xs, &b0).unwrap().slope.abs() < 0.01);
}

#[test]
fn scale_convention_is_multiplicative() {
    let d = density(Family::A2, &[0.5]);
    let d2 = d.clone().with_scale(2.0);
    let l = real_point(&[0.7, -1.1]);
    assert!((d2.eval(&l).unwrap() - d.eval(&l).unwrap() * 2.0).norm() < 1e-14);
}

proptest! {
    #[test]
    fn conjugate_symmetry_on_real_points(x in -20.0f64..20.0, y in -20.0f64..20.0, k in 0.05f64..2.5) {
        for (f, kk) in [(Family::A2, vec![k]), (Family::B2, vec![k, 0.5 * k])] {
            let d = density(f, &kk);
            let a = d.eval_real(&[x, y]).unwrap();
            let b = d.eval_real(&[-x, -y]).unwrap();
            prop_assert!((a - b.conj()).norm() <= 1e-11 * a.norm().max(1e-300));
        }
        let d = density(Family::A1, &[k]);
        let a = d.eval_real(&[x]).unwrap();
        prop_assert!((a - d.eval_real(&[-x]).unwrap().conj()).norm() <= 1e-11 * a.norm());
        prop_assert!(a.re >= 0.0);
    }
}
