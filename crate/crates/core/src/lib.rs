//! Dunkl-Cherednik harmonic analysis in low rank: root systems, the
//! Plancherel density, rank-one Opdam kernels, the Cherednik transform and
//! spectral energy experiments for the associated wave equation.

pub mod cherednik_transform;
pub mod error;
pub mod fit;
pub mod opdam_kernel;
pub mod plancherel;
pub mod quadrature;
pub mod root_system;
pub mod special_fn;
pub mod tolerances;
pub mod wave_energy;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use root_system::{build_root_system, Family, RootSystemData};
pub use plancherel::{strip_width, SpectralDensity};
pub use wave_energy::{DataMode, EnergyTrace, GridSpec, SpectralState};
