//! Fixtures shared by the benchmarks.

use fracmotion_core::{CountLaw, FracPoissonSpec, MotionConfig, RateFunction};

/// Constant-rate fractional motion at speed and horizon 1.
pub fn motion(alpha: f64, lambda: f64) -> MotionConfig {
    let spec = FracPoissonSpec::new(alpha, RateFunction::constant(lambda).expect("valid rate")).expect("valid order");
    MotionConfig::new(1.0, 1.0, CountLaw::Fractional(spec)).expect("valid motion")
}
