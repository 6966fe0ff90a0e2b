//! Numerical and statistical checks of the laws against each other, against
//! the governing differential equations and against simulation.

pub mod caputo;
mod checks;
pub mod report;
pub mod stats;
mod suite;

pub use checks::*;
pub use report::{CheckEntry, VerificationReport};
pub use suite::{run_suite, CheckKind, SuiteConfig, SuiteOverrides};

/// Caputo residual bound factor: `CAPUTO_TOL_FACTOR * h^(2 - alpha)`.
pub const CAPUTO_TOL_FACTOR: f64 = 50.0;
/// Bound factor for the first-order backward difference at `alpha = 1`.
pub const CLASSICAL_LIMIT_TOL_FACTOR: f64 = 10.0;
/// Caputo residuals are taken over `[CAPUTO_BURN_IN * W, W]`; the L1 scheme
/// loses its order next to the origin for `w^alpha`-type behaviour.
pub const CAPUTO_BURN_IN: f64 = 0.1;
/// Telegraph bound factor: relative residual `<= TELEGRAPH_TOL_FACTOR * h²`.
pub const TELEGRAPH_TOL_FACTOR: f64 = 100.0;
/// Telegraph points lie within this fraction of the support radius.
pub const TELEGRAPH_CONE_FRACTION: f64 = 0.75;
/// Lattice intervals per axis for telegraph evaluation points.
pub const TELEGRAPH_LATTICE: usize = 40;
pub const P_VALUE_FLOOR: f64 = 1e-3;
pub const SIGMA_BOUND: f64 = 3.0;
/// Characteristic-function deviation bound `CF_SIGMA / sqrt(samples)`.
pub const CF_SIGMA: f64 = 4.0;
pub const MIN_MC_SAMPLES: usize = 100_000;
pub const GOF_BINS: usize = 50;
pub const MIXTURE_TOL: f64 = 1e-10;
pub const MIXTURE_RADII: usize = 50;
pub const MASS_TOL: f64 = 1e-8;
pub const PROJECTION_TOL: f64 = 1e-6;
pub const PROJECTION_ABSCISSAE: usize = 20;
pub const SONINE_TOL: f64 = 1e-10;
pub const FLIGHT_CLOSED_TOL: f64 = 1e-12;
pub const FLIGHT_MIXTURE_TOL: f64 = 1e-10;
pub const FLIGHT_RADII: usize = 50;
pub const NORMALIZATION_TOL: f64 = 1e-10;
pub const POISSON_TOL: f64 = 1e-12;
pub const WEIGHTED_TOL: f64 = 1e-12;
pub const POISSON_MAX_N: usize = 30;
/// Above this `Lambda` the weighted-Poisson route works with log weights.
pub const WEIGHTED_DIRECT_MAX_LAMBDA: f64 = 1.0;
pub const NORMALIZATION_ALPHAS: [f64; 4] = [0.3, 0.5, 0.8, 1.0];
pub const NORMALIZATION_LAMBDAS: [f64; 4] = [0.5, 1.0, 5.0, 20.0];

/// Negative controls: rates scaled by this factor,
pub const NEGATIVE_SCALE: f64 = 1.25;
/// orders lowered by this amount,
pub const NEGATIVE_ALPHA_SHIFT: f64 = 0.1;
/// and change counts raised by this much.
pub const NEGATIVE_COUNT_SHIFT: usize = 1;
