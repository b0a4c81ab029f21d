#![allow(dead_code)]

use cwl_core::root_system::Family;
use cwl_core::special_fn::gauss_2f1;
use cwl_core::Complex64 as C64;

const S2: f64 = std::f64::consts::SQRT_2;

/// Symmetric Jacobi function from the hypergeometric representation.
pub fn jacobi(f: Family, k: &[f64], lambda: C64, x: f64) -> C64 {
    let one = C64::new(1.0, 0.0);
    match f {
        Family::A1 => {
            let (a, k) = (S2, k[0]);
            let z = -(a * x / 2.0).sinh().powi(2);
            gauss_2f1(
                one * (k / 2.0) + lambda / a,
                one * (k / 2.0) - lambda / a,
                one * (k + 0.5),
                C64::new(z, 0.0),
            )
            .unwrap()
        }
        Family::BC1 => {
            let rho = k[0] / 2.0 + k[1];
            let z = -(x / 2.0).sinh().powi(2);
            gauss_2f1(
                one * rho + lambda,
                one * rho - lambda,
                one * (k[0] + k[1] + 0.5),
                C64::new(z, 0.0),
            )
            .unwrap()
        }
        _ => unreachable!(),
    }
}

/// `(family, k1, k2, λ, x, value)`: symmetric Jacobi functions at high
/// frequency, computed once with 40-digit arithmetic.
pub const FROZEN_JACOBI: &[(&str, f64, f64, (f64, f64), f64, (f64, f64))] = &[
    ("A1", 0.5, 0.0, (0.0, 20.0), 0.0, (1.0, 0.0)),
    ("A1", 0.5, 0.0, (0.0, 20.0), 0.25, (-0.17722026303813535679, -5.5108235389893789167e-53)),
    ("A1", 0.5, 0.0, (0.0, 20.0), 0.5, (-0.24337534673918254773, -1.5698455139652075334e-52)),
    ("A1", 0.5, 0.0, (0.0, 20.0), 0.75, (-0.013744213847572841658, -3.5524165355313217431e-52)),
    ("A1", 0.5, 0.0, (0.0, 20.0), 1.0, (0.16038055746302538656, -2.0256074436902107285e-51)),
    ("A1", 0.5, 0.0, (0.0, 20.0), 1.25, (0.090198891049843087263, 6.4038078886837344679e-45)),
    ("A1", 0.5, 0.0, (0.0, 20.0), 1.5, (-0.079055318517203010596, 0.0)),
    ("A1", 0.5, 0.0, (0.0, 20.0), 1.75, (-0.11225018850847631219, 0.0)),
    ("A1", 0.5, 0.0, (0.0, 20.0), 2.0, (0.0064971597721365234304, 0.0)),
    ("A1", 0.5, 0.0, (0.0, 20.0), 2.25, (0.095293808323259083079, 0.0)),
    ("A1", 0.5, 0.0, (0.0, 20.0), 2.5, (0.04383785769684364712, 0.0)),
    ("A1", 1.5, 0.0, (0.0, 20.0), 0.0, (1.0, 0.0)),
    ("A1", 1.5, 0.0, (0.0, 20.0), 0.25, (-0.1300273789083098003, -3.8009898526091405368e-53)),
    ("A1", 1.5, 0.0, (0.0, 20.0), 0.5, (0.0083516500364334624188, -1.1625237741268621352e-52)),
    ("A1", 1.5, 0.0, (0.0, 20.0), 0.75, (0.025494951029718806685, -2.3510468082434058916e-52)),
    ("A1", 1.5, 0.0, (0.0, 20.0), 1.0, (0.0059527823949028062137, -2.110783058574053969e-51)),
    ("A1", 1.5, 0.0, (0.0, 20.0), 1.25, (-0.0082627323181819845806, -5.9943785371575113572e-46)),
    ("A1", 1.5, 0.0, (0.0, 20.0), 1.5, (-0.0060523838823443801899, 0.0)),
    ("A1", 1.5, 0.0, (0.0, 20.0), 1.75, (0.0017195096425314475035, 0.0)),
    ("A1", 1.5, 0.0, (0.0, 20.0), 2.0, (0.0039374370484507488933, 0.0)),
    ("A1", 1.5, 0.0, (0.0, 20.0), 2.25, (0.00071794722307170882046, 0.0)),
    ("A1", 1.5, 0.0, (0.0, 20.0), 2.5, (-0.0019041978561437022738, 0.0)),
    ("A1", 1.0, 0.0, (0.5, 15.0), 0.0, (1.0, 0.0)),
    ("A1", 1.0, 0.0, (0.5, 15.0), 0.25, (-0.15355027153122197411, 0.022162610498453541709)),
    ("A1", 1.0, 0.0, (0.5, 15.0), 0.5, (0.1265872037191861865, -0.0072159400039667352404)),
    ("A1", 1.0, 0.0, (0.5, 15.0), 0.75, (-0.087595038095040511326, -0.011117789944439377839)),
    ("A1", 1.0, 0.0, (0.5, 15.0), 1.0, (0.044177814116314903601, 0.025786494553495490313)),
    ("A1", 1.0, 0.0, (0.5, 15.0), 1.25, (-0.0045672272526225923037, -0.031304739879914968681)),
    ("A1", 1.0, 0.0, (0.5, 15.0), 1.5, (-0.024253966802872235534, 0.025826034722581781384)),
    ("A1", 1.0, 0.0, (0.5, 15.0), 1.75, (0.038188260211974933964, -0.011695749756303816063)),
    ("A1", 1.0, 0.0, (0.5, 15.0), 2.0, (-0.036953049755013642875, -0.005647871944475366648)),
    ("A1", 1.0, 0.0, (0.5, 15.0), 2.25, (0.02398776613144822229, 0.019885713002350269717)),
    ("A1", 1.0, 0.0, (0.5, 15.0), 2.5, (-0.0053187673689058045203, -0.026209517330046623915)),
    ("BC1", 1.0, 1.0, (0.0, 20.0), 0.0, (1.0, 0.0)),
    ("BC1", 1.0, 1.0, (0.0, 20.0), 0.25, (-0.056399812714655156511, -9.5932171467809558237e-53)),
    ("BC1", 1.0, 1.0, (0.0, 20.0), 0.5, (0.022307444213629984933, -3.4015188697088558634e-52)),
    ("BC1", 1.0, 1.0, (0.0, 20.0), 0.75, (0.009558350119035185293, -9.4947258324671030941e-52)),
    ("BC1", 1.0, 1.0, (0.0, 20.0), 1.0, (-0.0021950942766964769517, -2.3180634333153195996e-51)),
    ("BC1", 1.0, 1.0, (0.0, 20.0), 1.25, (-0.0035002007896261060792, -8.9007497974793061514e-51)),
    ("BC1", 1.0, 1.0, (0.0, 20.0), 1.5, (-0.00041339295988143093386, -8.2943043134846932782e-50)),
    ("BC1", 1.0, 1.0, (0.0, 20.0), 1.75, (0.0012041058493166528015, 1.3023550328334765096e-47)),
    ("BC1", 1.0, 1.0, (0.0, 20.0), 2.0, (0.00060791713040731667495, 0.0)),
    ("BC1", 1.0, 1.0, (0.0, 20.0), 2.25, (-0.00028935497673958587992, 0.0)),
    ("BC1", 1.0, 1.0, (0.0, 20.0), 2.5, (-0.0003761209805892736732, 0.0)),
];

use cwl_core::cherednik_transform::{PolyBump, SmoothFunction};

/// Asymmetric initial displacement supported in `[-0.8, 1]`.
pub fn displacement() -> PolyBump {
    PolyBump::new(0.1, 0.9, 16).with_poly(vec![C64::new(1.0, 0.0), C64::new(0.3, 0.0)])
}

/// Asymmetric initial velocity supported in `[-1, 0.7]`.
pub fn velocity() -> PolyBump {
    PolyBump::new(-0.15, 0.85, 16).with_poly(vec![
        C64::new(0.5, 0.0),
        C64::new(0.0, 0.0),
        C64::new(-0.4, 0.0),
    ])
}

/// `(K, P)` of the flat solution `½(f(x+t)+f(x-t)) + ½∫_{x-t}^{x+t} g`,
/// by composite Simpson on a fine uniform grid.
pub fn flat_energies(f: &dyn SmoothFunction, g: &dyn SmoothFunction, t: f64, radius: f64) -> (f64, f64) {
    let a = radius + t.abs() + 0.1;
    let n = (2.0 * a / 5e-4).ceil() as usize * 2;
    let h = 2.0 * a / n as f64;
    let (mut k, mut p) = (0.0, 0.0);
    for j in 0..=n {
        let x = -a + j as f64 * h;
        let w = if j == 0 || j == n { 1.0 } else if j % 2 == 1 { 4.0 } else { 2.0 };
        let (fp, fm) = (f.deriv(x + t, 1).re, f.deriv(x - t, 1).re);
        let (gp, gm) = (g.value(x + t).re, g.value(x - t).re);
        let ut = 0.5 * (fp - fm) + 0.5 * (gp + gm);
        let ux = 0.5 * (fp + fm) + 0.5 * (gp - gm);
        k += w * ut * ut;
        p += w * ux * ux;
    }
    (0.5 * k * h / 3.0, 0.5 * p * h / 3.0)
}
