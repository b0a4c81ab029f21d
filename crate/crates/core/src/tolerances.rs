//! Pinned numerical thresholds shared by the experiments, the CLI checks and
//! the acceptance suite.

/// Relative drift of the total energy over a trace.
pub const CONSERVATION: f64 = 1e-8;
/// `|P-K|/E` beyond the strict-equipartition threshold.
pub const STRICT_EQUIPARTITION: f64 = 1e-6;
/// Some `|t| < R` must show `|P-K|/E` above this value.
pub const NON_DEGENERACY: f64 = 1e-5;
/// Threshold margin: strict equipartition is checked for `|t| >= (1 + ε) R`.
pub const STRICT_MARGIN: f64 = 0.05;
/// Fitted rate must reach this fraction of `2γ₀`.
pub const EXPONENTIAL_RATE_FRACTION: f64 = 0.81;
/// Minimum coefficient of determination of the exponential fit.
pub const EXPONENTIAL_R_SQUARED: f64 = 0.98;
/// Allowed excess of the log-log slope over the bound `-(d + D)`.
pub const POLYNOMIAL_SLOPE_SLACK: f64 = 0.5;
/// Fit windows drop points below this multiple of the quadrature floor.
pub const FLOOR_FACTOR: f64 = 100.0;
/// Relative Plancherel defect.
pub const PLANCHEREL: f64 = 1e-6;
/// Symmetrised kernel against the Jacobi-function oracle.
pub const KERNEL_ORACLE: f64 = 1e-8;
/// Residual of the kernel ODE at collocation points.
pub const KERNEL_RESIDUAL: f64 = 1e-9;
/// Skew-adjointness defect.
pub const SKEW_ADJOINT: f64 = 1e-8;
/// Diagonalisation defect.
pub const DIAGONALIZATION: f64 = 1e-6;
/// Gamma form against the integer-multiplicity polynomial form.
pub const DENSITY_POLYNOMIAL: f64 = 1e-10;
/// Energies of the `k = 0` pipeline against d'Alembert.
pub const DALEMBERT: f64 = 1e-6;
/// Reconstruction mass beyond `R + |t| + δ`, relative to the peak.
pub const FINITE_PROPAGATION: f64 = 1e-6;
/// Agreement of the two `P-K` evaluation paths, relative to `E`.
pub const DUAL_PATH: f64 = 1e-8;
/// Discarded spectral tail of an energy integral, relative to `E`.
pub const SPECTRAL_TAIL: f64 = 1e-9;
