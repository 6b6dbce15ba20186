//! One round of signature refinement.
//!
//! The signature of an index `k` against a partition is the sparse vector of
//! fused coefficients `λ_{IJk}` over all ordered block pairs `(I, J)`. Any
//! semifusion refining the partition keeps `k` and `k'` apart whenever their
//! signatures differ, so splitting every block by signature in one simultaneous
//! pass never loses a coarser solution.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::coeff::Coeff;
use crate::algebra::BasedAlgebra;
use crate::error::{Error, Result};
use crate::partition::{Partition, SeedFamily};
use crate::Rational;

/// Below this rank the signature pass stays on the calling thread.
const PARALLEL_RANK: usize = 96;

type Signature<V> = Vec<(u32, u32, V)>;

/// Evidence that a protected seed set cannot survive refinement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeedSplit {
    /// The protected set that was split.
    pub seed: Vec<usize>,
    /// Two members of the seed with different signatures.
    pub members: (usize, usize),
    /// The block pair `(I, J)` whose fused coefficient separates them.
    pub block_pair: (Vec<usize>, Vec<usize>),
    /// `λ_{IJk}` at the two members, in order.
    #[serde(serialize_with = "ser_pair")]
    pub coefficients: (Rational, Rational),
}

fn ser_pair<S: serde::Serializer>(pair: &(Rational, Rational), s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&pair.0.to_string())?;
    t.serialize_element(&pair.1.to_string())?;
    t.end()
}

/// Result of a single refinement round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Refined(Partition),
    SeedSplit(SeedSplit),
}

fn signature_of<V: Coeff>(entries: &[(u32, u32, V)], labels: &[usize]) -> Signature<V> {
    let mut keyed: Vec<(u32, u32, V)> = entries
        .iter()
        .map(|(i, j, v)| {
            (
                labels[*i as usize] as u32,
                labels[*j as usize] as u32,
                v.clone(),
            )
        })
        .collect();
    keyed.sort_unstable_by_key(|&(a, b, _)| (a, b));
    let mut out: Signature<V> = Vec::with_capacity(keyed.len());
    for (a, b, v) in keyed {
        match out.last_mut() {
            Some(last) if last.0 == a && last.1 == b => last.2.accumulate(&v),
            _ => out.push((a, b, v)),
        }
    }
    out.retain(|e| !e.2.is_zero_value());
    out
}

fn signatures<V: Coeff>(tensor: &[Vec<(u32, u32, V)>], labels: &[usize]) -> Vec<Signature<V>> {
    if tensor.len() >= PARALLEL_RANK {
        tensor
            .par_iter()
            .map(|entries| signature_of(entries, labels))
            .collect()
    } else {
        tensor
            .iter()
            .map(|entries| signature_of(entries, labels))
            .collect()
    }
}

fn witness<V: Coeff>(
    p: &Partition,
    seed: &[usize],
    a: usize,
    b: usize,
    sa: &Signature<V>,
    sb: &Signature<V>,
) -> SeedSplit {
    let value_at = |sig: &Signature<V>, key: (u32, u32)| {
        sig.binary_search_by_key(&key, |&(x, y, _)| (x, y))
            .map(|pos| sig[pos].2.to_rational())
            .unwrap_or_else(|_| V::zero_value().to_rational())
    };
    let mut keys: Vec<(u32, u32)> = sa.iter().chain(sb).map(|&(x, y, _)| (x, y)).collect();
    keys.sort_unstable();
    keys.dedup();
    let key = keys
        .into_iter()
        .find(|&key| value_at(sa, key) != value_at(sb, key))
        .expect("signatures differ");
    SeedSplit {
        seed: seed.to_vec(),
        members: (a, b),
        block_pair: (
            p.blocks()[key.0 as usize].clone(),
            p.blocks()[key.1 as usize].clone(),
        ),
        coefficients: (value_at(sa, key), value_at(sb, key)),
    }
}

fn step<V: Coeff>(
    tensor: &[Vec<(u32, u32, V)>],
    p: &Partition,
    protected: &SeedFamily,
    strict: bool,
) -> StepOutcome {
    let sigs = signatures(tensor, p.labels());
    if strict {
        for seed in protected.sets() {
            let first = seed[0];
            if let Some(&other) = seed[1..].iter().find(|&&k| sigs[k] != sigs[first]) {
                return StepOutcome::SeedSplit(witness(
                    p,
                    seed,
                    first,
                    other,
                    &sigs[first],
                    &sigs[other],
                ));
            }
        }
    }
    let mut ids: HashMap<(usize, &Signature<V>), usize> = HashMap::new();
    let labels: Vec<usize> = sigs
        .iter()
        .enumerate()
        .map(|(k, sig)| {
            let next = ids.len();
            *ids.entry((p.block_of(k), sig)).or_insert(next)
        })
        .collect();
    StepOutcome::Refined(Partition::from_labels(&labels))
}

/// Splits every block of `p` by signature. In strict mode a protected set that
/// would be split yields [`StepOutcome::SeedSplit`] instead.
pub fn refine_step(
    algebra: &BasedAlgebra,
    p: &Partition,
    protected: &SeedFamily,
    strict: bool,
) -> Result<StepOutcome> {
    if algebra.rank() != p.rank() {
        return Err(Error::RankMismatch {
            left: algebra.rank(),
            right: p.rank(),
        });
    }
    protected.check_rank(p.rank())?;
    Ok(match algebra.int_by_target() {
        Some(t) => step(t, p, protected, strict),
        None => step(algebra.rational_by_target(), p, protected, strict),
    })
}
