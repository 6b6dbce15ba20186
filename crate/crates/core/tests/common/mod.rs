//! Fixtures and random generators shared by the integration tests.
#![allow(dead_code)]

pub mod props;

use isofusion::algebra::BasedAlgebra;
use isofusion::orbitals::{orbital_configuration, PermGroup};
use isofusion::partition::SeedFamily;
use isofusion::scheme::{algebra_from_relations, parse_relation_matrix, RelationMatrix};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const AS28_TEXT: &str = include_str!("../data/as28no176.txt");

pub fn c2_matrix() -> RelationMatrix {
    RelationMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]).unwrap()
}

pub fn cyclic_matrix(n: usize) -> RelationMatrix {
    RelationMatrix::from_rows(
        (0..n)
            .map(|x| (0..n).map(|y| (y + n - x) % n).collect())
            .collect(),
    )
    .unwrap()
}

/// Orbitals of the trivial group: one color per matrix unit.
pub fn full_matrix(n: usize) -> RelationMatrix {
    orbital_configuration(&PermGroup::trivial(n).unwrap())
}

pub fn as28_matrix() -> RelationMatrix {
    parse_relation_matrix(AS28_TEXT).unwrap()
}

pub fn algebra(m: &RelationMatrix) -> BasedAlgebra {
    algebra_from_relations(m).unwrap()
}

/// A permutation made of disjoint cycles of length at most `max_cycle`.
pub fn random_short_cycles(rng: &mut ChaCha8Rng, n: usize, max_cycle: usize) -> Vec<usize> {
    let mut points: Vec<usize> = (0..n).collect();
    points.shuffle(rng);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut at = 0;
    while at < n {
        let len = rng.gen_range(1..=max_cycle).min(n - at);
        for t in 0..len {
            perm[points[at + t]] = points[at + (t + 1) % len];
        }
        at += len;
    }
    perm
}

/// Orbital configuration of a random group of degree `2..=max_order` whose rank
/// is at most `max_rank`; homogeneous when `transitive` is set.
pub fn random_scheme(
    rng: &mut ChaCha8Rng,
    max_order: usize,
    max_rank: usize,
    transitive: bool,
) -> RelationMatrix {
    loop {
        let n = rng.gen_range(2..=max_order);
        let gens = rng.gen_range(1..=2);
        let generators = (0..gens).map(|_| random_short_cycles(rng, n, 4)).collect();
        let group = PermGroup::new(n, generators).unwrap();
        if transitive && group.orbits().len() != 1 {
            continue;
        }
        let m = orbital_configuration(&group);
        if m.rank() <= max_rank {
            return m;
        }
    }
}

/// Renumbers colors by first appearance in row-major order.
pub fn compress_colors(rows: Vec<Vec<usize>>) -> RelationMatrix {
    let mut map = std::collections::HashMap::new();
    let rows = rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|c| {
                    let next = map.len();
                    *map.entry(c).or_insert(next)
                })
                .collect()
        })
        .collect();
    RelationMatrix::from_rows(rows).unwrap()
}

/// Relabels points at random and merges two random off-diagonal colors
/// together with their transposes.
pub fn mutate(rng: &mut ChaCha8Rng, m: &RelationMatrix) -> RelationMatrix {
    let n = m.order();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let diagonal = m.diagonal_colors();
    let off: Vec<usize> = (0..m.rank()).filter(|c| !diagonal.contains(c)).collect();
    let mut target: Vec<usize> = (0..m.rank()).collect();
    if off.len() >= 2 {
        let a = *off.choose(rng).unwrap();
        let b = *off.choose(rng).unwrap();
        let transpose = |c: usize| {
            (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .find(|&(x, y)| m.get(x, y) == c)
                .map(|(x, y)| m.get(y, x))
                .unwrap()
        };
        let (ta, tb) = (transpose(a), transpose(b));
        let mut first = vec![a, b];
        let second = vec![ta, tb];
        if first.iter().any(|c| second.contains(c)) {
            first.extend(second);
            let low = *first.iter().min().unwrap();
            first.iter().for_each(|&c| target[c] = low);
        } else {
            for class in [first, second] {
                let low = *class.iter().min().unwrap();
                class.iter().for_each(|&c| target[c] = low);
            }
        }
    }
    compress_colors(
        (0..n)
            .map(|x| (0..n).map(|y| target[m.get(perm[x], perm[y])]).collect())
            .collect(),
    )
}

/// `count` coherent matrices of order at most `max_order` and rank at most
/// `max_rank`, each a random scheme that was mutated and then accepted by the
/// coherence check.
pub fn mutated_corpus(
    rng: &mut ChaCha8Rng,
    count: usize,
    max_order: usize,
    max_rank: usize,
) -> Vec<RelationMatrix> {
    let mut out = Vec::new();
    while out.len() < count {
        let base = random_scheme(rng, max_order, max_rank + 2, false);
        let m = mutate(rng, &base);
        if m.rank() <= max_rank && algebra_from_relations(&m).is_ok() {
            out.push(m);
        }
    }
    out
}

/// Every family of at most `max_sets` pairwise disjoint sets of size at most
/// `max_size`, each set either all identity or all non-identity indices.
pub fn seed_families(algebra: &BasedAlgebra, max_sets: usize, max_size: usize) -> Vec<SeedFamily> {
    let r = algebra.rank();
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for mask in 1u32..(1 << r) {
        let set: Vec<usize> = (0..r).filter(|&i| mask >> i & 1 == 1).collect();
        let ids = set
            .iter()
            .filter(|&&i| algebra.is_identity_index(i))
            .count();
        if set.len() <= max_size && (ids == 0 || ids == set.len()) {
            sets.push(set);
        }
    }
    let mut out: Vec<SeedFamily> = sets
        .iter()
        .map(|s| SeedFamily::single(s.clone()).unwrap())
        .collect();
    if max_sets >= 2 {
        for (a, s) in sets.iter().enumerate() {
            for t in &sets[a + 1..] {
                if s.iter().all(|i| !t.contains(i)) {
                    out.push(SeedFamily::new(vec![s.clone(), t.clone()]).unwrap());
                }
            }
        }
    }
    out
}
