//! Rank-one Dunkl-Cherednik operators and transforms.
//!
//! Points of the one-dimensional space are scalars along the unit vector of
//! the positive root, so `T = T_ξ` for that vector and `w₀ x = -x`.

pub mod functions;
pub mod operators;
pub mod sampled;
pub mod transform;

use std::io::BufRead;

use crate::error::{Error, Result};

pub use functions::{
    odd_quotient, support_radius, Gaussian, LinearCombination, PolyBump, Reflected, SharedFn,
    SmoothFunction,
};
pub use operators::{apply_l, apply_t, ApplyT, KernelFunction};
pub use sampled::SampledFunction;
pub use transform::{
    mirrored, radial_rule, reference_bump, Calibration, DiagonalizationDefect, PlancherelDefect,
    SpectralFunction, Spectra, Transformer,
};

pub(crate) fn read_triples<R: BufRead>(input: R, header: &str) -> Result<Vec<(f64, f64, f64)>> {
    let mut rows = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
        if n == 0 {
            if line.trim() != header {
                return Err(Error::Parse(format!("line 1: expected header `{header}`")));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<f64> = line
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
        if f.len() != 3 {
            return Err(Error::Parse(format!("line {}: expected 3 fields", n + 1)));
        }
        rows.push((f[0], f[1], f[2]));
    }
    Ok(rows)
}
