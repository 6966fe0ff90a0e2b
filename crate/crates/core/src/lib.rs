//! Fractional Poisson counts with time-varying rates, particles moving at
//! constant speed that turn to a fresh uniform direction at each count, the
//! Mittag-Leffler and Wright densities of their positions, and a harness that
//! reconciles simulation with those densities.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod counting;
pub mod densities;
pub mod error;
pub mod motion;
pub mod quadrature;
pub mod specfun;
pub mod stream;
pub mod verify;

pub use counting::{CountDistribution, CountLaw, FlightCountSpec, FracPoissonSpec, RateFunction, StateDependentSpec};
pub use error::{Error, Result};
pub use motion::{FlightVariant, InstantLaw, MotionConfig, PlanarSample, Trajectory};
pub use specfun::{MLParams, SeriesControl, WrightSeriesSpec};
pub use stream::{FixedStream, RngStream, UniformStream};
pub use verify::{CheckEntry, CheckKind, SuiteConfig, VerificationReport};

/// Version of this crate, recorded in manifests and reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
