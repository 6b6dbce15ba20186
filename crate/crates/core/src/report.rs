//! JSON reports for fusion runs.
//!
//! The schema is documented in the guide's report chapter. Field order is
//! fixed by the struct layout and every collection is sorted, so serializing
//! the same run twice gives the same bytes.

use serde::Serialize;

use crate::algebra::{valency, BasedAlgebra};
use crate::error::Result;
use crate::fusion::{FailureReason, FusionOutcome, FusionStatus};
use crate::lattice::algebra_fingerprint;
use crate::partition::SeedFamily;

/// One nonzero fused structure constant `λ_{ijk}`, value written as a rational.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TensorEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: String,
}

/// The fused algebra part of a report; absent when the run failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FusedSummary {
    pub rank: usize,
    /// Valency of every fused basis element, when the fused algebra has an involution.
    pub valencies: Option<Vec<String>>,
    pub tensor: Vec<TensorEntry>,
    pub fingerprint: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FusionReport {
    pub status: FusionStatus,
    pub input_rank: usize,
    pub seeds: Vec<Vec<usize>>,
    /// Blocks of the final partition; for a failed run, the partition reached.
    pub blocks: Vec<Vec<usize>>,
    pub seed_preserved: bool,
    pub rounds: usize,
    pub failure: Option<FailureReason>,
    pub fused: Option<FusedSummary>,
}

/// Summary of a fused algebra: tensor entries, valencies and fingerprint digest.
pub fn summarize_fused(fused: &BasedAlgebra) -> Result<FusedSummary> {
    let valencies = match fused.star() {
        Some(_) => Some(
            (0..fused.rank())
                .map(|i| valency(fused, i).map(|v| v.to_string()))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let tensor = fused
        .tensor()
        .iter()
        .map(|((i, j, k), v)| TensorEntry {
            i,
            j,
            k,
            value: v.to_string(),
        })
        .collect();
    Ok(FusedSummary {
        rank: fused.rank(),
        valencies,
        tensor,
        fingerprint: algebra_fingerprint(fused)?.digest(),
    })
}

pub fn fusion_report(
    algebra: &BasedAlgebra,
    seeds: &SeedFamily,
    outcome: &FusionOutcome,
) -> Result<FusionReport> {
    let fused = match &outcome.fused {
        Some(f) => Some(summarize_fused(f)?),
        None => None,
    };
    Ok(FusionReport {
        status: outcome.status,
        input_rank: algebra.rank(),
        seeds: seeds.sets().to_vec(),
        blocks: outcome.partition.blocks().to_vec(),
        seed_preserved: outcome.seed_preserved,
        rounds: outcome.rounds,
        failure: outcome.failure.clone(),
        fused,
    })
}
