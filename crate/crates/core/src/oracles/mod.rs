//! Seeded random instances and the property suite that exercises every invariant.

mod random;
mod rng;
mod suite;

pub use random::{random_operator, random_phase_function, Distribution, RandomSpec};
pub use rng::SplitMix64;
pub use suite::{run_property_suite, PropertyOutcome, SuiteReport, PROPERTY_NAMES};
