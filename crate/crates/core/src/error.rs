use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported root-system family `{0}`")]
    UnsupportedFamily(String),

    #[error("multiplicity for orbit {orbit} is negative ({value})")]
    NegativeMultiplicity { orbit: usize, value: f64 },

    #[error("family {family} has {expected} root orbits, got {got} multiplicities")]
    OrbitCount {
        family: String,
        expected: usize,
        got: usize,
    },

    #[error("vector is not a root of the system")]
    NotARoot,

    #[error("pole of Gamma factor `{factor}` (progression index {index})")]
    Pole { factor: String, index: i64 },

    #[error("argument {re}+{im}i lies outside the Stirling sector")]
    OutsideStirlingSector { re: f64, im: f64 },

    #[error("hypergeometric parameter c={0} is a pole")]
    HypergeometricPole(f64),

    #[error("series did not converge: {0}")]
    NonConvergent(String),

    #[error("profile order m={order} gives decay {decay} < required {required}")]
    ProfileTooRough {
        order: u32,
        decay: f64,
        required: f64,
    },

    #[error("multiplicity {0} is not a positive integer")]
    NonIntegerMultiplicity(f64),

    #[error("kernel evaluation needs a rank-one system, got dimension {0}")]
    NotRankOne(usize),

    #[error("point x={x} lies beyond the kernel range X_max={x_max}")]
    BeyondXmax { x: f64, x_max: f64 },

    #[error("kernel error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    KernelTolerance { estimate: f64, tolerance: f64 },

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("spectral tail {tail:e} exceeds budget {budget:e}")]
    TailBudget { tail: f64, budget: f64 },

    #[error("calibration failure: {0}")]
    Calibration(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
