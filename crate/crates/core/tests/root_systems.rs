use cwl_core::root_system::{build_root_system, dot, Family, RootSystemData};
use proptest::prelude::*;

fn all_systems() -> Vec<RootSystemData> {
    [
        (Family::A1, vec![1.5]),
        (Family::A1Product(3), vec![0.5, 1.0, 2.0]),
        (Family::BC1, vec![0.5, 1.0]),
        (Family::A2, vec![0.5]),
        (Family::B2, vec![0.5, 1.5]),
        (Family::BC2, vec![1.0, 0.5, 2.0]),
    ]
    .into_iter()
    .map(|(f, k)| build_root_system(f, &k).unwrap())
    .collect()
}

fn same(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
}

#[test]
fn weyl_group_orders() {
    for rs in all_systems() {
        assert_eq!(rs.weyl_order(), rs.family.expected_weyl_order(), "{}", rs.family);
    }
}

#[test]
fn weyl_group_closed_under_composition() {
    for rs in all_systems() {
        for a in &rs.weyl {
            for b in &rs.weyl {
                let c = a.compose(b);
                assert!(rs.weyl.iter().any(|w| same(&w.matrix, &c.matrix)));
            }
        }
    }
}

#[test]
fn reflections_permute_roots() {
    for rs in all_systems() {
        for alpha in &rs.roots {
            for beta in &rs.roots {
                let img = rs.reflect(beta, alpha).unwrap();
                assert!(rs.root_index(&img).is_some(), "{}", rs.family);
            }
        }
    }
}

#[test]
fn longest_element_negates_positive_roots() {
    for rs in all_systems() {
        let w0 = rs.w0();
        for &i in &rs.positive {
            let img: Vec<f64> = w0.apply(&rs.roots[i]).iter().map(|x| -x).collect();
            let j = rs.root_index(&img).unwrap();
            assert!(rs.positive.contains(&j));
        }
        let sq = w0.compose(w0);
        let id = &rs.weyl[0];
        assert!(same(&sq.matrix, &id.matrix));
    }
}

#[test]
fn multiplicity_is_constant_on_orbits() {
    for rs in all_systems() {
        for (i, alpha) in rs.roots.iter().enumerate() {
            for w in &rs.weyl {
                let j = rs.root_index(&w.apply(alpha)).unwrap();
                assert_eq!(rs.k_of(i), rs.k_of(j));
            }
        }
    }
}

#[test]
fn rho_is_dominant() {
    for rs in all_systems() {
        for &i in &rs.simple {
            let c = RootSystemData::coroot(&rs.roots[i]);
            assert!(dot(&rs.rho, &c) > 0.0, "{}", rs.family);
        }
    }
}

#[test]
fn a2_conjugated_reflection() {
    let rs = build_root_system(Family::A2, &[1.0]).unwrap();
    let x = [0.37, -1.21];
    for a in &rs.roots {
        for b in &rs.roots {
            let lhs = rs.reflect(&rs.reflect(&rs.reflect(&x, a).unwrap(), b).unwrap(), a).unwrap();
            let rab = rs.reflect(b, a).unwrap();
            let rhs = rs.reflect(&x, &rab).unwrap();
            assert!(same(&lhs, &rhs));
        }
    }
}

#[test]
fn weight_vanishes_on_walls() {
    let rs = build_root_system(Family::A1, &[1.5]).unwrap();
    assert_eq!(rs.weight(&[0.0]), 0.0);
    let t = 1e-4;
    let x = [t / std::f64::consts::SQRT_2];
    assert!((rs.weight(&x) / t.powf(3.0) - 1.0).abs() < 1e-7);
}

proptest! {
    #[test]
    fn reflection_is_involution(x in -5.0f64..5.0, y in -5.0f64..5.0) {
        let rs = build_root_system(Family::B2, &[1.0, 1.0]).unwrap();
        for alpha in &rs.roots {
            let once = rs.reflect(&[x, y], alpha).unwrap();
            let twice = rs.reflect(&once, alpha).unwrap();
            prop_assert!(same(&twice, &[x, y]));
            prop_assert!((dot(&once, alpha) + dot(&[x, y], alpha)).abs() < 1e-12);
        }
    }

    #[test]
    fn weight_is_weyl_invariant(x in -3.0f64..3.0, y in -3.0f64..3.0) {
        for rs in all_systems().into_iter().filter(|r| r.dim == 2) {
            let base = rs.weight(&[x, y]);
            for w in &rs.weyl {
                let v = rs.weight(&w.apply(&[x, y]));
                prop_assert!((v - base).abs() <= 1e-12 * base.max(1e-300));
            }
        }
    }
}
