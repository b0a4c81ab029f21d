//! Spectral solutions of `∂ₜ²u = L u`, their energies and the equipartition
//! and decay experiments.

pub mod classical;
pub mod energy;
pub mod experiments;
pub mod propagation;
pub mod state;

pub use classical::{dalembert_energies, dalembert_gradient, ClassicalEnergies};
pub use energy::{
    energies, energy_difference, evenness_defect, propagate, radial_densities, wave_factors,
    Energies, EnergyDifference, Propagated, RadialDensities,
};
pub use experiments::{
    conservation_experiment, exponential_decay_experiment, linear_times,
    polynomial_decay_experiment, state_strip_width, strict_equipartition_experiment, trace,
    ConservationReport, EnergySample, EnergyTrace, ExponentialReport, PolynomialReport,
    StrictReport,
};
pub use propagation::{
    finite_propagation_check, PropagationReport, PropagationSample, ReconstructionSpec,
    Reconstructor,
};
pub use state::{DataMode, GridSpec, RadialCoefficients, SpectralState, SpectralValues};
