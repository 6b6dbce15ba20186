//! The semifusion criterion: a partition spans a subalgebra exactly when, for
//! every ordered pair of blocks `(I, J)` and every block `K`, the fused
//! coefficient `Σ_{i∈I} Σ_{j∈J} λ_{ijk}` does not depend on the choice of `k ∈ K`.

use std::collections::HashMap;

use num_traits::Zero;

use super::coeff::Coeff;
use crate::algebra::{build_algebra, BasedAlgebra, StructureTensor};
use crate::error::{Error, Result};
use crate::partition::{star_image, Partition};
use crate::Rational;

const DENSE_LIMIT: usize = 1 << 20;

fn check_index(algebra: &BasedAlgebra, i: usize) -> Result<()> {
    if i >= algebra.rank() {
        return Err(Error::IndexOutOfRange {
            index: i,
            rank: algebra.rank(),
        });
    }
    Ok(())
}

/// `λ_{IJk} = Σ_{i∈I} Σ_{j∈J} λ_{ijk}`.
pub fn fused_coefficient(
    algebra: &BasedAlgebra,
    left: &[usize],
    right: &[usize],
    k: usize,
) -> Result<Rational> {
    if left.is_empty() || right.is_empty() {
        return Err(Error::EmptyBlock);
    }
    check_index(algebra, k)?;
    for &i in left.iter().chain(right) {
        check_index(algebra, i)?;
    }
    let mut total = Rational::zero();
    for &i in left {
        for &j in right {
            if let Some(v) = algebra.lambda(i, j, k) {
                total += v;
            }
        }
    }
    Ok(total)
}

fn check_rank(algebra: &BasedAlgebra, p: &Partition) -> Result<()> {
    if algebra.rank() != p.rank() {
        return Err(Error::RankMismatch {
            left: algebra.rank(),
            right: p.rank(),
        });
    }
    Ok(())
}

fn closed_dense<V: Coeff>(tensor: &[Vec<(u32, u32, V)>], p: &Partition) -> bool {
    let nb = p.len();
    let r = p.rank();
    let labels = p.labels();
    let mut sums = vec![V::zero_value(); nb * nb * r];
    for (k, list) in tensor.iter().enumerate() {
        for (i, j, v) in list {
            let slot = (labels[*i as usize] * nb + labels[*j as usize]) * r + k;
            sums[slot].accumulate(v);
        }
    }
    for pair in 0..nb * nb {
        let row = &sums[pair * r..(pair + 1) * r];
        for block in p.blocks() {
            let first = &row[block[0]];
            if block[1..].iter().any(|&k| &row[k] != first) {
                return false;
            }
        }
    }
    true
}

fn closed_sparse<V: Coeff>(tensor: &[Vec<(u32, u32, V)>], p: &Partition) -> bool {
    let labels = p.labels();
    let mut sums: HashMap<(usize, usize, usize), V> = HashMap::new();
    for (k, list) in tensor.iter().enumerate() {
        for (i, j, v) in list {
            sums.entry((labels[*i as usize], labels[*j as usize], k))
                .or_insert_with(V::zero_value)
                .accumulate(v);
        }
    }
    let mut groups: HashMap<(usize, usize, usize), (usize, V)> = HashMap::new();
    for ((bi, bj, k), v) in sums {
        if v.is_zero_value() {
            continue;
        }
        match groups.entry((bi, bj, labels[k])) {
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert((1, v));
            }
            std::collections::hash_map::Entry::Occupied(mut e) => {
                let (count, first) = e.get_mut();
                if *first != v {
                    return false;
                }
                *count += 1;
            }
        }
    }
    groups
        .iter()
        .all(|(&(_, _, bk), (count, _))| *count == p.blocks()[bk].len())
}

fn closed<V: Coeff>(tensor: &[Vec<(u32, u32, V)>], p: &Partition) -> bool {
    if p.len() * p.len() * p.rank() <= DENSE_LIMIT {
        closed_dense(tensor, p)
    } else {
        closed_sparse(tensor, p)
    }
}

/// True iff the characteristic functions of the blocks of `p` span a subalgebra.
pub fn is_semifusion(algebra: &BasedAlgebra, p: &Partition) -> Result<bool> {
    check_rank(algebra, p)?;
    Ok(match algebra.int_by_target() {
        Some(t) => closed(t, p),
        None => closed(algebra.rational_by_target(), p),
    })
}

/// True iff every identity index lies in a block contained in the identity support.
pub(crate) fn identity_is_union_of_blocks(algebra: &BasedAlgebra, p: &Partition) -> bool {
    algebra.identity_support().iter().all(|&e| {
        p.blocks()[p.block_of(e)]
            .iter()
            .all(|&i| algebra.is_identity_index(i))
    })
}

/// A semifusion that is closed under `*` and keeps identity indices apart from the rest.
pub fn is_fusion(algebra: &BasedAlgebra, p: &Partition) -> Result<bool> {
    check_rank(algebra, p)?;
    let star = algebra.star().ok_or(Error::StarAbsent)?;
    if star_image(p, star)? != *p {
        return Ok(false);
    }
    if !identity_is_union_of_blocks(algebra, p) {
        return Ok(false);
    }
    is_semifusion(algebra, p)
}

/// The algebra spanned by the block sums of a semifusion, in block order.
pub fn fused_algebra(algebra: &BasedAlgebra, p: &Partition) -> Result<BasedAlgebra> {
    if !is_semifusion(algebra, p)? {
        return Err(Error::NotSemifusion);
    }
    if !identity_is_union_of_blocks(algebra, p) {
        return Err(Error::IdentityNotUnion);
    }
    let labels = p.labels();
    let mut tensor = StructureTensor::with_rank(p.len());
    for (bk, block) in p.blocks().iter().enumerate() {
        for (i, j, v) in algebra.by_target(block[0]) {
            tensor.add(labels[*i as usize], labels[*j as usize], bk, v.clone());
        }
    }
    let identity: Vec<usize> = p
        .blocks()
        .iter()
        .enumerate()
        .filter(|(_, b)| algebra.is_identity_index(b[0]))
        .map(|(n, _)| n)
        .collect();
    let star = match algebra.star() {
        Some(s) if star_image(p, s)? == *p => Some(
            p.blocks()
                .iter()
                .map(|b| labels[s[b[0]]])
                .collect::<Vec<_>>(),
        ),
        _ => None,
    };
    build_algebra(&tensor, &identity, star, false)
}
