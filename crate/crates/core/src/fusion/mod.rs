//! Semifusions, fusions and the isolating fusion algorithm.

mod brute;
mod coeff;
mod criterion;
mod engine;
mod refine;

#[allow(unused_imports)]
pub(crate) use brute::for_each_set_partition;
pub use brute::{brute_force_minimal, brute_force_minimal_with_cap, DEFAULT_BRUTE_FORCE_CAP};
pub use criterion::{fused_algebra, fused_coefficient, is_fusion, is_semifusion};
pub use engine::{
    initial_partition, minimal_isolating_fusion, minimal_isolating_semifusion, FailureReason,
    FusionOutcome, FusionStatus,
};
pub use refine::{refine_step, SeedSplit, StepOutcome};
