//! Exhaustive search for the coarsest isolating semifusion or fusion.
//!
//! Used as an independent oracle for the refinement engine on small ranks: it
//! never refines anything, it only tries every partition that keeps the seed
//! sets as blocks and identity indices apart from the rest.

use super::criterion::{is_fusion, is_semifusion};
use crate::algebra::BasedAlgebra;
use crate::error::{Error, Result};
use crate::partition::{is_refinement, Partition, SeedFamily};

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 12;

/// Calls `visit` with every set partition of `items`, as one label per item.
pub(crate) fn for_each_set_partition(n: usize, mut visit: impl FnMut(&[usize])) {
    // restricted growth strings: a[0] = 0, a[i] <= max(a[..i]) + 1
    let mut a = vec![0usize; n];
    let mut maxes = vec![0usize; n];
    loop {
        visit(&a);
        let mut i = n;
        loop {
            if i <= 1 {
                return;
            }
            i -= 1;
            if a[i] <= maxes[i - 1] {
                a[i] += 1;
                maxes[i] = maxes[i - 1].max(a[i]);
                for t in i + 1..n {
                    a[t] = 0;
                    maxes[t] = maxes[i];
                }
                break;
            }
        }
    }
}

pub fn brute_force_minimal(
    algebra: &BasedAlgebra,
    seeds: &SeedFamily,
    want_fusion: bool,
) -> Result<Option<Partition>> {
    brute_force_minimal_with_cap(algebra, seeds, want_fusion, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn brute_force_minimal_with_cap(
    algebra: &BasedAlgebra,
    seeds: &SeedFamily,
    want_fusion: bool,
    cap: usize,
) -> Result<Option<Partition>> {
    let r = algebra.rank();
    if r > cap {
        return Err(Error::CapExceeded { rank: r, cap });
    }
    seeds.check_rank(r)?;
    if want_fusion && algebra.star().is_none() {
        return Err(Error::StarAbsent);
    }
    for set in seeds.sets() {
        let ids = set
            .iter()
            .filter(|&&i| algebra.is_identity_index(i))
            .count();
        if ids != 0 && ids != set.len() {
            return Err(Error::MixedSeed(set.clone()));
        }
    }
    let mut labels = vec![usize::MAX; r];
    for (n, set) in seeds.sets().iter().enumerate() {
        for &i in set {
            labels[i] = n;
        }
    }
    let free_identity: Vec<usize> = (0..r)
        .filter(|&i| labels[i] == usize::MAX && algebra.is_identity_index(i))
        .collect();
    let free_other: Vec<usize> = (0..r)
        .filter(|&i| labels[i] == usize::MAX && !algebra.is_identity_index(i))
        .collect();
    let base = seeds.len();
    let mut found: Vec<Partition> = Vec::new();
    let mut error = None;
    for_each_set_partition(free_identity.len(), |id_labels| {
        for (&i, &l) in free_identity.iter().zip(id_labels) {
            labels[i] = base + l;
        }
        let offset = base + free_identity.len();
        for_each_set_partition(free_other.len(), |other_labels| {
            if error.is_some() {
                return;
            }
            let mut full = labels.clone();
            for (&i, &l) in free_other.iter().zip(other_labels) {
                full[i] = offset + l;
            }
            let p = Partition::from_labels(&full);
            let ok = if want_fusion {
                is_fusion(algebra, &p)
            } else {
                is_semifusion(algebra, &p)
            };
            match ok {
                Ok(true) => found.push(p),
                Ok(false) => {}
                Err(e) => error = Some(e),
            }
        });
    });
    if let Some(e) = error {
        return Err(e);
    }
    let Some(coarsest) = found.iter().min_by_key(|p| p.len()).cloned() else {
        return Ok(None);
    };
    for p in &found {
        if !is_refinement(p, &coarsest)? {
            return Err(Error::NoUniqueCoarsest);
        }
    }
    Ok(Some(coarsest))
}
