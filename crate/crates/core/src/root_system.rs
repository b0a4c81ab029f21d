//! Root systems of the supported low-rank families, their Weyl groups,
//! multiplicity functions and the weight `μ`.
//!
//! Normalisations: `A1` has `|α| = √2`; `A1xN` is `N` orthogonal copies of
//! `A1`; `BC1` has roots `±1, ±2`; `A2` sits in the plane with all roots of
//! length `√2`; `B2` has short roots `±e_i` and long roots `±e_1 ± e_2`;
//! `BC2` adds the doubled short roots `±2e_i`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Family {
    A1,
    A1Product(usize),
    BC1,
    A2,
    B2,
    BC2,
}

impl Family {
    pub fn dim(&self) -> usize {
        match self {
            Family::A1 | Family::BC1 => 1,
            Family::A1Product(d) => *d,
            Family::A2 | Family::B2 | Family::BC2 => 2,
        }
    }

    /// Number of W-orbits of roots, i.e. the number of multiplicity values.
    pub fn orbit_count(&self) -> usize {
        match self {
            Family::A1 | Family::A2 => 1,
            Family::A1Product(d) => *d,
            Family::BC1 | Family::B2 => 2,
            Family::BC2 => 3,
        }
    }

    pub fn expected_weyl_order(&self) -> usize {
        match self {
            Family::A1 | Family::BC1 => 2,
            Family::A1Product(d) => 1 << d,
            Family::A2 => 6,
            Family::B2 | Family::BC2 => 8,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::A1 => write!(f, "A1"),
            Family::A1Product(d) => write!(f, "A1x{d}"),
            Family::BC1 => write!(f, "BC1"),
            Family::A2 => write!(f, "A2"),
            Family::B2 => write!(f, "B2"),
            Family::BC2 => write!(f, "BC2"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_uppercase().as_str() {
            "A1" => return Ok(Family::A1),
            "BC1" => return Ok(Family::BC1),
            "A2" => return Ok(Family::A2),
            "B2" => return Ok(Family::B2),
            "BC2" => return Ok(Family::BC2),
            _ => {}
        }
        let upper = t.to_ascii_uppercase();
        if let Some(rest) = upper.strip_prefix("A1X").or_else(|| upper.strip_prefix("A1^")) {
            if let Ok(d) = rest.parse::<usize>() {
                if d >= 1 {
                    return Ok(Family::A1Product(d));
                }
            }
        }
        Err(Error::UnsupportedFamily(t.to_string()))
    }
}

impl From<Family> for String {
    fn from(f: Family) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for Family {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Orthogonal `d × d` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylElement {
    pub matrix: Vec<f64>,
}

impl WeylElement {
    fn identity(d: usize) -> Self {
        let mut m = vec![0.0; d * d];
        for i in 0..d {
            m[i * d + i] = 1.0;
        }
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        (self.matrix.len() as f64).sqrt().round() as usize
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let d = x.len();
        (0..d)
            .map(|i| (0..d).map(|j| self.matrix[i * d + j] * x[j]).sum())
            .collect()
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let d = self.dim();
        let mut m = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                m[i * d + j] = (0..d).map(|l| self.matrix[i * d + l] * other.matrix[l * d + j]).sum();
            }
        }
        WeylElement { matrix: m }
    }

    fn close_to(&self, other: &WeylElement) -> bool {
        self.matrix
            .iter()
            .zip(&other.matrix)
            .all(|(a, b)| (a - b).abs() <= TOL)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn close(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= TOL)
}

/// An indivisible positive root together with the multiplicity of its
/// double (zero when `2α` is not a root).
#[derive(Debug, Clone, PartialEq)]
pub struct IndivisibleRoot {
    pub root: Vec<f64>,
    pub coroot: Vec<f64>,
    pub k: f64,
    pub k_double: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSystemData {
    pub family: Family,
    pub dim: usize,
    pub roots: Vec<Vec<f64>>,
    /// Orbit label of each root.
    pub orbit: Vec<usize>,
    /// Multiplicity of each orbit.
    pub multiplicities: Vec<f64>,
    /// Indices into `roots`.
    pub positive: Vec<usize>,
    pub simple: Vec<usize>,
    pub indivisible: Vec<usize>,
    pub weyl: Vec<WeylElement>,
    pub w0: usize,
    pub rho: Vec<f64>,
}

fn family_roots(family: Family) -> (Vec<Vec<f64>>, Vec<usize>, Vec<f64>) {
    let s2 = std::f64::consts::SQRT_2;
    let mut roots = Vec::new();
    let mut orbit = Vec::new();
    let mut push = |v: Vec<f64>, o: usize| {
        roots.push(v.iter().map(|x| -x).collect());
        orbit.push(o);
        roots.push(v);
        orbit.push(o);
    };
    let generic = match family {
        Family::A1 => {
            push(vec![s2], 0);
            vec![1.0]
        }
        Family::A1Product(d) => {
            for i in 0..d {
                let mut v = vec![0.0; d];
                v[i] = s2;
                push(v, i);
            }
            (0..d).map(|i| 1.0 + i as f64).collect()
        }
        Family::BC1 => {
            push(vec![1.0], 0);
            push(vec![2.0], 1);
            vec![1.0]
        }
        Family::A2 => {
            let h = 1.5f64.sqrt();
            push(vec![s2, 0.0], 0);
            push(vec![-s2 / 2.0, h], 0);
            push(vec![s2 / 2.0, h], 0);
            vec![1.0, 3.0]
        }
        Family::B2 | Family::BC2 => {
            push(vec![1.0, 0.0], 0);
            push(vec![0.0, 1.0], 0);
            push(vec![1.0, 1.0], 1);
            push(vec![1.0, -1.0], 1);
            if family == Family::BC2 {
                push(vec![2.0, 0.0], 2);
                push(vec![0.0, 2.0], 2);
            }
            vec![3.0, 1.0]
        }
    };
    (roots, orbit, generic)
}

fn reflection_matrix(alpha: &[f64]) -> WeylElement {
    let d = alpha.len();
    let n2 = dot(alpha, alpha);
    let mut m = WeylElement::identity(d).matrix;
    for i in 0..d {
        for j in 0..d {
            m[i * d + j] -= 2.0 * alpha[i] * alpha[j] / n2;
        }
    }
    WeylElement { matrix: m }
}

/// Builds the root-system data for `family` with one multiplicity per orbit.
pub fn build_root_system(family: Family, multiplicities: &[f64]) -> Result<RootSystemData> {
    if let Family::A1Product(0) = family {
        return Err(Error::UnsupportedFamily(family.to_string()));
    }
    if multiplicities.len() != family.orbit_count() {
        return Err(Error::OrbitCount {
            family: family.to_string(),
            expected: family.orbit_count(),
            got: multiplicities.len(),
        });
    }
    for (orbit, &value) in multiplicities.iter().enumerate() {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::NegativeMultiplicity { orbit, value });
        }
    }
    let dim = family.dim();
    let (roots, orbit, generic) = family_roots(family);
    let positive: Vec<usize> = (0..roots.len())
        .filter(|&i| dot(&roots[i], &generic) > 0.0)
        .collect();
    let is_root = |v: &[f64]| roots.iter().any(|r| close(r, v));
    let simple: Vec<usize> = positive
        .iter()
        .copied()
        .filter(|&i| {
            !positive.iter().any(|&j| {
                let diff: Vec<f64> = roots[i].iter().zip(&roots[j]).map(|(a, b)| a - b).collect();
                positive.iter().any(|&l| close(&roots[l], &diff))
            })
        })
        .collect();
    let indivisible: Vec<usize> = positive
        .iter()
        .copied()
        .filter(|&i| {
            let half: Vec<f64> = roots[i].iter().map(|x| x / 2.0).collect();
            !is_root(&half)
        })
        .collect();

    let gens: Vec<WeylElement> = simple.iter().map(|&i| reflection_matrix(&roots[i])).collect();
    let mut weyl = vec![WeylElement::identity(dim)];
    let mut frontier = 0;
    while frontier < weyl.len() {
        let w = weyl[frontier].clone();
        for g in &gens {
            let cand = g.compose(&w);
            if !weyl.iter().any(|e| e.close_to(&cand)) {
                weyl.push(cand);
            }
        }
        frontier += 1;
        if weyl.len() > 4096 {
            return Err(Error::UnsupportedFamily(family.to_string()));
        }
    }
    let w0 = weyl
        .iter()
        .position(|w| {
            positive.iter().all(|&i| {
                let img: Vec<f64> = w.apply(&roots[i]).iter().map(|x| -x).collect();
                positive.iter().any(|&j| close(&roots[j], &img))
            })
        })
        .ok_or_else(|| Error::UnsupportedFamily(family.to_string()))?;

    let mut rho = vec![0.0; dim];
    for &i in &positive {
        let k = multiplicities[orbit[i]];
        for (r, a) in rho.iter_mut().zip(&roots[i]) {
            *r += 0.5 * k * a;
        }
    }
    Ok(RootSystemData {
        family,
        dim,
        roots,
        orbit,
        multiplicities: multiplicities.to_vec(),
        positive,
        simple,
        indivisible,
        weyl,
        w0,
        rho,
    })
}

impl RootSystemData {
    pub fn k_of(&self, root_index: usize) -> f64 {
        self.multiplicities[self.orbit[root_index]]
    }

    /// `2α/|α|²`.
    pub fn coroot(alpha: &[f64]) -> Vec<f64> {
        let n2 = dot(alpha, alpha);
        alpha.iter().map(|a| 2.0 * a / n2).collect()
    }

    pub fn root_index(&self, alpha: &[f64]) -> Option<usize> {
        self.roots.iter().position(|r| close(r, alpha))
    }

    /// `r_α(x) = x - ⟨α̌, x⟩ α`.
    pub fn reflect(&self, x: &[f64], alpha: &[f64]) -> Result<Vec<f64>> {
        self.root_index(alpha).ok_or(Error::NotARoot)?;
        let c = dot(&Self::coroot(alpha), x);
        Ok(x.iter().zip(alpha).map(|(xi, ai)| xi - c * ai).collect())
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl.len()
    }

    pub fn w0(&self) -> &WeylElement {
        &self.weyl[self.w0]
    }

    /// `|k| = Σ_{α ∈ R⁺} k_α`.
    pub fn k_total(&self) -> f64 {
        self.positive.iter().map(|&i| self.k_of(i)).sum()
    }

    /// `D = |R₀⁺|`.
    pub fn indivisible_count(&self) -> usize {
        self.indivisible.len()
    }

    pub fn is_zero_multiplicity(&self) -> bool {
        self.multiplicities.iter().all(|&k| k == 0.0)
    }

    pub fn indivisible_roots(&self) -> Vec<IndivisibleRoot> {
        self.indivisible
            .iter()
            .map(|&i| {
                let root = self.roots[i].clone();
                let double: Vec<f64> = root.iter().map(|x| 2.0 * x).collect();
                let k_double = self.root_index(&double).map_or(0.0, |j| self.k_of(j));
                IndivisibleRoot {
                    coroot: Self::coroot(&root),
                    root,
                    k: self.k_of(i),
                    k_double,
                }
            })
            .collect()
    }

    /// `μ(x) = Π_{α ∈ R⁺} |2 sinh(⟨α,x⟩/2)|^{2k_α}`.
    pub fn weight(&self, x: &[f64]) -> f64 {
        let mut log = 0.0;
        for &i in &self.positive {
            let k = self.k_of(i);
            if k == 0.0 {
                continue;
            }
            let s = (2.0 * (0.5 * dot(&self.roots[i], x)).sinh()).abs();
            if s == 0.0 {
                return 0.0;
            }
            log += 2.0 * k * s.ln();
        }
        log.exp()
    }

    /// Rank-one data `(a_j, k_j)` with `α_j = a_j` for the positive roots.
    pub fn rank_one_terms(&self) -> Result<Vec<(f64, f64)>> {
        if self.dim != 1 {
            return Err(Error::NotRankOne(self.dim));
        }
        Ok(self
            .positive
            .iter()
            .map(|&i| (self.roots[i][0], self.k_of(i)))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_basics() {
        let rs = build_root_system(Family::A1, &[1.0]).unwrap();
        assert_eq!(rs.weyl_order(), 2);
        assert_eq!(rs.w0().apply(&[0.7]), vec![-0.7]);
        assert!((rs.rho[0] - std::f64::consts::SQRT_2 / 2.0).abs() < 1e-15);
        // ⟨α,x⟩ = 1 gives (2 sinh ½)².
        let x = [1.0 / std::f64::consts::SQRT_2];
        assert!((rs.weight(&x) - 1.086_161_269_630_487_6).abs() < 1e-12);
    }

    #[test]
    fn orders_and_counts() {
        let a2 = build_root_system(Family::A2, &[1.0]).unwrap();
        assert_eq!((a2.positive.len(), a2.indivisible.len(), a2.weyl_order()), (3, 3, 6));
        let b2 = build_root_system(Family::B2, &[1.0, 1.0]).unwrap();
        assert_eq!((b2.positive.len(), b2.indivisible.len(), b2.weyl_order()), (4, 4, 8));
        let bc2 = build_root_system(Family::BC2, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!((bc2.positive.len(), bc2.indivisible.len(), bc2.weyl_order()), (6, 4, 8));
        let bc1 = build_root_system(Family::BC1, &[1.0, 2.0]).unwrap();
        assert_eq!((bc1.indivisible.len(), bc1.weyl_order()), (1, 2));
        assert_eq!(bc1.indivisible_roots()[0].k_double, 2.0);
        let p3 = build_root_system(Family::A1Product(3), &[1.0, 0.5, 0.0]).unwrap();
        assert_eq!(p3.weyl_order(), 8);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            build_root_system(Family::A1, &[-1.0]),
            Err(Error::NegativeMultiplicity { orbit: 0, .. })
        ));
        assert!(matches!(
            build_root_system(Family::BC1, &[1.0]),
            Err(Error::OrbitCount { expected: 2, got: 1, .. })
        ));
        assert!("G2".parse::<Family>().is_err());
        let rs = build_root_system(Family::A1, &[1.0]).unwrap();
        assert_eq!(rs.reflect(&[1.0], &[1.0]), Err(Error::NotARoot));
    }

    #[test]
    fn family_names_round_trip() {
        for f in [Family::A1, Family::A1Product(3), Family::BC1, Family::A2, Family::B2, Family::BC2] {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
    }

    #[test]
    fn zero_multiplicity_degenerates() {
        let rs = build_root_system(Family::B2, &[0.0, 0.0]).unwrap();
        assert!(rs.rho.iter().all(|&r| r == 0.0));
        assert_eq!(rs.weight(&[0.3, -2.0]), 1.0);
    }
}
