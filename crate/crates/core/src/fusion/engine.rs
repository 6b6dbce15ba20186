//! Minimal isolating semifusions and fusions.
//!
//! Starting from the partition {seed sets, leftover identity indices, leftover
//! non-identity indices}, signature refinement runs to a fixed point. That
//! fixed point is the coarsest semifusion refining the start, so when the
//! seeds survive it is the unique minimal isolating semifusion, and when they
//! do not, no isolating semifusion exists. For fusions the seeds are first
//! closed under `*`, and each fixed point that is not `*`-invariant is met with
//! its `*`-image and refined again.

use serde::Serialize;

use super::criterion::fused_algebra;
use super::refine::{refine_step, SeedSplit, StepOutcome};
use crate::algebra::BasedAlgebra;
use crate::error::{Error, Result};
use crate::partition::{meet, star_image, Partition, SeedFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FusionStatus {
    Fusion,
    Semifusion,
    Failed,
    Relaxed,
}

/// Why a strict run failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    /// Refinement separated two members of a seed set.
    SeedSplit(SeedSplit),
    /// A seed meets its `*`-image (or another seed's image) without being equal to it.
    StarOverlap { seed: Vec<usize>, image: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionOutcome {
    pub status: FusionStatus,
    /// The fixed point, or the partition reached when a strict run failed.
    pub partition: Partition,
    /// Present unless the run failed.
    pub fused: Option<BasedAlgebra>,
    /// True iff every seed set is a block of `partition`.
    pub seed_preserved: bool,
    pub failure: Option<FailureReason>,
    /// Number of refinement rounds that changed the partition.
    pub rounds: usize,
}

impl FusionOutcome {
    pub fn is_failed(&self) -> bool {
        self.status == FusionStatus::Failed
    }

    fn failed(partition: Partition, reason: FailureReason, rounds: usize) -> Self {
        FusionOutcome {
            status: FusionStatus::Failed,
            partition,
            fused: None,
            seed_preserved: false,
            failure: Some(reason),
            rounds,
        }
    }
}

fn check_seeds(algebra: &BasedAlgebra, seeds: &SeedFamily) -> Result<()> {
    seeds.check_rank(algebra.rank())?;
    for set in seeds.sets() {
        let identity = set
            .iter()
            .filter(|&&i| algebra.is_identity_index(i))
            .count();
        if identity != 0 && identity != set.len() {
            return Err(Error::MixedSeed(set.clone()));
        }
    }
    Ok(())
}

/// The starting partition: the seed sets, the unseeded identity indices as one
/// block, and the unseeded remaining indices as one block.
pub fn initial_partition(algebra: &BasedAlgebra, seeds: &SeedFamily) -> Result<Partition> {
    check_seeds(algebra, seeds)?;
    let r = algebra.rank();
    let mut labels = vec![usize::MAX; r];
    for (n, set) in seeds.sets().iter().enumerate() {
        for &i in set {
            labels[i] = n + 2;
        }
    }
    for (i, l) in labels.iter_mut().enumerate() {
        if *l == usize::MAX {
            *l = if algebra.is_identity_index(i) { 0 } else { 1 };
        }
    }
    Ok(Partition::from_labels(&labels))
}

fn seeds_intact(p: &Partition, seeds: &SeedFamily) -> bool {
    seeds.sets().iter().all(|s| p.has_block(s))
}

/// Iterates [`refine_step`] from `p` to its fixed point.
fn fixed_point(
    algebra: &BasedAlgebra,
    mut p: Partition,
    seeds: &SeedFamily,
    strict: bool,
    rounds: &mut usize,
) -> Result<std::result::Result<Partition, (Partition, SeedSplit)>> {
    loop {
        match refine_step(algebra, &p, seeds, strict)? {
            StepOutcome::SeedSplit(w) => return Ok(Err((p, w))),
            StepOutcome::Refined(q) => {
                if q == p {
                    return Ok(Ok(p));
                }
                *rounds += 1;
                p = q;
            }
        }
    }
}

fn finish(
    algebra: &BasedAlgebra,
    p: Partition,
    seeds: &SeedFamily,
    intact_status: FusionStatus,
    rounds: usize,
) -> Result<FusionOutcome> {
    let seed_preserved = seeds_intact(&p, seeds);
    let fused = fused_algebra(algebra, &p)?;
    Ok(FusionOutcome {
        status: if seed_preserved {
            intact_status
        } else {
            FusionStatus::Relaxed
        },
        partition: p,
        fused: Some(fused),
        seed_preserved,
        failure: None,
        rounds,
    })
}

/// Minimal semifusion in which every seed set is a block.
///
/// In strict mode a seed that cannot be kept whole gives a failed outcome; in
/// relaxed mode refinement continues and the result has status `Relaxed`.
pub fn minimal_isolating_semifusion(
    algebra: &BasedAlgebra,
    seeds: &SeedFamily,
    strict: bool,
) -> Result<FusionOutcome> {
    let start = initial_partition(algebra, seeds)?;
    let mut rounds = 0;
    match fixed_point(algebra, start, seeds, strict, &mut rounds)? {
        Err((p, w)) => Ok(FusionOutcome::failed(
            p,
            FailureReason::SeedSplit(w),
            rounds,
        )),
        Ok(p) => finish(algebra, p, seeds, FusionStatus::Semifusion, rounds),
    }
}

/// Closes the seed family under `*`. `Err` carries the first seed whose image
/// partially overlaps a seed.
fn star_closed_seeds(
    seeds: &SeedFamily,
    star: &[usize],
) -> Result<std::result::Result<SeedFamily, (Vec<usize>, Vec<usize>)>> {
    let mut sets: Vec<Vec<usize>> = seeds.sets().to_vec();
    for set in seeds.sets() {
        let mut image: Vec<usize> = set.iter().map(|&i| star[i]).collect();
        image.sort_unstable();
        if sets.contains(&image) {
            continue;
        }
        if sets
            .iter()
            .any(|s| s.iter().any(|i| image.binary_search(i).is_ok()))
        {
            return Ok(Err((set.clone(), image)));
        }
        sets.push(image);
    }
    Ok(Ok(SeedFamily::new(sets)?))
}

/// Minimal fusion in which every seed set is a block.
pub fn minimal_isolating_fusion(
    algebra: &BasedAlgebra,
    seeds: &SeedFamily,
    strict: bool,
) -> Result<FusionOutcome> {
    let star = algebra.star().ok_or(Error::StarAbsent)?;
    check_seeds(algebra, seeds)?;
    let mut rounds = 0;
    let (mut p, protected) = match star_closed_seeds(seeds, star)? {
        Ok(closed) => (initial_partition(algebra, &closed)?, closed),
        Err((seed, image)) => {
            let start = initial_partition(algebra, seeds)?;
            if strict {
                return Ok(FusionOutcome::failed(
                    start,
                    FailureReason::StarOverlap { seed, image },
                    0,
                ));
            }
            let closed = meet(&start, &star_image(&start, star)?)?;
            (closed, SeedFamily::empty())
        }
    };
    loop {
        p = match fixed_point(algebra, p, &protected, strict, &mut rounds)? {
            Err((q, w)) => {
                return Ok(FusionOutcome::failed(
                    q,
                    FailureReason::SeedSplit(w),
                    rounds,
                ))
            }
            Ok(q) => q,
        };
        let closed = meet(&p, &star_image(&p, star)?)?;
        if closed == p {
            break;
        }
        rounds += 1;
        p = closed;
    }
    finish(algebra, p, seeds, FusionStatus::Fusion, rounds)
}
