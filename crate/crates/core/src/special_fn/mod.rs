//! Scalar special functions.

pub mod bessel;
pub mod gamma;
pub mod hypergeometric;
pub mod profile;

pub use bessel::{bessel_j, spherical_bessel_all};
pub use gamma::{gamma_ratio, log_gamma, stirling_ratio_bound, GammaRatio};
pub use hypergeometric::gauss_2f1;
pub use profile::RadialProfile;
