//! Seed enumeration, random seed search, fusion lattices and algebraic
//! automorphisms.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::algebra::{valency, BasedAlgebra, ElementVector};
use crate::eigen::minimal_polynomial;
use crate::error::{Error, Result};
use crate::fusion::{fused_algebra, is_fusion, minimal_isolating_fusion, FusionOutcome};
use crate::partition::{is_refinement, normalize, Partition, SeedFamily};

/// Default rank bound for [`algebraic_automorphism_group`].
pub const DEFAULT_AUTOMORPHISM_CAP: usize = 40;

/// Relabeling-invariant summary of a fused algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fingerprint {
    pub rank: usize,
    /// Sorted `(valency, minimal polynomial)` pairs over the fused basis;
    /// valency is `-` when the fused algebra has no involution.
    pub classes: Vec<(String, String)>,
    /// Sorted nonzero fused structure constants.
    pub constants: Vec<String>,
}

impl Fingerprint {
    /// First 16 hex digits of the SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        let text = serde_json::to_string(self).expect("fingerprint serializes");
        let hash = Sha256::digest(text.as_bytes());
        hash.iter().take(8).fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

/// Fingerprint of the algebra fused along a semifusion `p`.
pub fn fingerprint(algebra: &BasedAlgebra, p: &Partition) -> Result<Fingerprint> {
    algebra_fingerprint(&fused_algebra(algebra, p)?)
}

/// Fingerprint of an algebra in its own basis.
pub fn algebra_fingerprint(algebra: &BasedAlgebra) -> Result<Fingerprint> {
    let r = algebra.rank();
    let mut classes = (0..r)
        .into_par_iter()
        .map(|i| {
            let val = match algebra.star() {
                Some(_) => valency(algebra, i)?.to_string(),
                None => "-".to_string(),
            };
            let poly = minimal_polynomial(algebra, &ElementVector::basis(r, i))?;
            Ok((val, poly.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    classes.sort();
    let mut values: Vec<_> = algebra.tensor().iter().map(|(_, v)| v.clone()).collect();
    values.sort();
    Ok(Fingerprint {
        rank: r,
        classes,
        constants: values.iter().map(|v| v.to_string()).collect(),
    })
}

/// One distinct fusion found by enumeration, with every seed family producing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoundFusion {
    pub partition: Partition,
    pub seeds: Vec<SeedFamily>,
    /// Outcome of the first producing seed in enumeration order.
    pub outcome: FusionOutcome,
}

/// Options for [`enumerate_seed_fusions`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Largest seed set tried.
    pub max_seed_size: usize,
    /// Also try families of `2..=multi` disjoint sets.
    pub multi: Option<usize>,
    /// Draw multi-set families from all subsets up to `max_seed_size`
    /// instead of only from seeds that succeeded on their own.
    pub combine_all: bool,
}

impl EnumerationOptions {
    pub fn singles(max_seed_size: usize) -> Self {
        EnumerationOptions {
            max_seed_size,
            multi: None,
            combine_all: false,
        }
    }
}

/// Nonempty subsets of `items` of size at most `max`, by size then colex order.
pub fn subsets_colex(items: &[usize], max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 1..=max.min(items.len()) {
        // colex: the index vector c_1 < ... < c_k increments from the left
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(idx.iter().map(|&i| items[i]).collect());
            let mut j = 0;
            while j + 1 < k && idx[j] + 1 == idx[j + 1] {
                j += 1;
            }
            if j + 1 == k && idx[j] + 1 >= items.len() {
                break;
            }
            idx[j] += 1;
            for (t, slot) in idx.iter_mut().enumerate().take(j) {
                *slot = t;
            }
        }
    }
    out
}

fn non_identity(algebra: &BasedAlgebra) -> Vec<usize> {
    (0..algebra.rank())
        .filter(|&i| !algebra.is_identity_index(i))
        .collect()
}

/// Runs strict fusions in parallel and merges the successful ones by partition.
fn run_families(algebra: &BasedAlgebra, families: Vec<SeedFamily>) -> Result<Vec<FoundFusion>> {
    let outcomes = families
        .par_iter()
        .map(|f| minimal_isolating_fusion(algebra, f, true))
        .collect::<Result<Vec<_>>>()?;
    let mut merged: BTreeMap<Partition, FoundFusion> = BTreeMap::new();
    for (family, outcome) in families.into_iter().zip(outcomes) {
        if outcome.is_failed() {
            continue;
        }
        merged
            .entry(outcome.partition.clone())
            .or_insert_with(|| FoundFusion {
                partition: outcome.partition.clone(),
                seeds: Vec::new(),
                outcome,
            })
            .seeds
            .push(family);
    }
    Ok(merged.into_values().collect())
}

fn merge(into: &mut Vec<FoundFusion>, more: Vec<FoundFusion>) {
    let mut map: BTreeMap<Partition, FoundFusion> =
        into.drain(..).map(|f| (f.partition.clone(), f)).collect();
    for f in more {
        match map.get_mut(&f.partition) {
            Some(existing) => existing.seeds.extend(f.seeds),
            None => {
                map.insert(f.partition.clone(), f);
            }
        }
    }
    into.extend(map.into_values());
}

/// Families of `2..=max_sets` pairwise disjoint sets from `pool` (pool order kept).
fn disjoint_families(pool: &[Vec<usize>], max_sets: usize, rank: usize) -> Vec<SeedFamily> {
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut used = vec![false; rank];
    fn rec(
        start: usize,
        pool: &[Vec<usize>],
        max_sets: usize,
        chosen: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<SeedFamily>,
    ) {
        if chosen.len() >= 2 {
            let sets = chosen.iter().map(|&c| pool[c].clone()).collect();
            out.push(SeedFamily::new(sets).expect("disjoint by construction"));
        }
        if chosen.len() == max_sets {
            return;
        }
        for c in start..pool.len() {
            if pool[c].iter().any(|&i| used[i]) {
                continue;
            }
            pool[c].iter().for_each(|&i| used[i] = true);
            chosen.push(c);
            rec(c + 1, pool, max_sets, chosen, used, out);
            chosen.pop();
            pool[c].iter().for_each(|&i| used[i] = false);
        }
    }
    rec(0, pool, max_sets, &mut chosen, &mut used, &mut out);
    out
}

/// Minimal isolating fusions of every seed set of size at most
/// `max_seed_size`, then optionally of families of disjoint sets.
///
/// Failed runs are dropped; each distinct partition is reported once with
/// all seed families that produced it, ordered by partition.
pub fn enumerate_seed_fusions(
    algebra: &BasedAlgebra,
    options: EnumerationOptions,
) -> Result<Vec<FoundFusion>> {
    if algebra.star().is_none() {
        return Err(Error::StarAbsent);
    }
    let items = non_identity(algebra);
    let subsets = subsets_colex(&items, options.max_seed_size);
    let singles: Vec<SeedFamily> = subsets
        .iter()
        .map(|s| SeedFamily::single(s.clone()))
        .collect::<Result<_>>()?;
    let mut found = run_families(algebra, singles)?;
    if let Some(multi) = options.multi.filter(|&m| m >= 2) {
        let pool: Vec<Vec<usize>> = if options.combine_all {
            subsets
        } else {
            let mut succeeded: Vec<Vec<usize>> = found
                .iter()
                .flat_map(|f| f.seeds.iter().map(|s| s.sets()[0].clone()))
                .collect();
            succeeded.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
            succeeded
        };
        let families = disjoint_families(&pool, multi, algebra.rank());
        let more = run_families(algebra, families)?;
        merge(&mut found, more);
    }
    Ok(found)
}

/// Budget and reproducibility settings for [`random_seed_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub samples: usize,
    /// Inclusive bounds on the size of each seed set.
    pub size_range: (usize, usize),
    /// Number of disjoint sets per family.
    pub family_size: usize,
    pub rng_seed: u64,
}

/// Strict isolating fusions of randomly drawn seed families, plus any
/// `planted` families, deduplicated by partition.
pub fn random_seed_search(
    algebra: &BasedAlgebra,
    options: SearchOptions,
    planted: &[SeedFamily],
) -> Result<Vec<FoundFusion>> {
    if algebra.star().is_none() {
        return Err(Error::StarAbsent);
    }
    let items = non_identity(algebra);
    let (lo, hi) = options.size_range;
    if lo == 0 || lo > hi || options.family_size == 0 || lo * options.family_size > items.len() {
        return Err(Error::InvalidRange(format!(
            "sizes {lo}..={hi} with {} sets per family over {} indices",
            options.family_size,
            items.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.rng_seed);
    let mut families: Vec<SeedFamily> = planted.to_vec();
    for _ in 0..options.samples {
        let mut pool = items.clone();
        pool.shuffle(&mut rng);
        let mut sets = Vec::with_capacity(options.family_size);
        let mut taken = 0;
        for _ in 0..options.family_size {
            let left = pool.len() - taken;
            if left < lo {
                break;
            }
            let size = rng.gen_range(lo..=hi.min(left));
            sets.push(pool[taken..taken + size].to_vec());
            taken += size;
        }
        families.push(SeedFamily::new(sets)?);
    }
    run_families(algebra, families)
}

/// Fusions ordered by refinement, with covering edges from finer to coarser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeGraph {
    pub nodes: Vec<(Partition, Fingerprint)>,
    /// Index pairs `(finer, coarser)`.
    pub edges: Vec<(usize, usize)>,
}

/// The partition `{E, everything else}`.
pub fn trivial_partition(algebra: &BasedAlgebra) -> Partition {
    let r = algebra.rank();
    let labels: Vec<usize> = (0..r)
        .map(|i| usize::from(!algebra.is_identity_index(i)))
        .collect();
    Partition::from_labels(&labels)
}

/// Builds the lattice on `partitions` plus the discrete and trivial
/// partitions when they are fusions. Nodes are sorted by decreasing number of
/// blocks, then by partition.
pub fn build_fusion_lattice(
    algebra: &BasedAlgebra,
    partitions: &[Partition],
) -> Result<LatticeGraph> {
    let mut all: Vec<Partition> = Vec::new();
    for p in partitions {
        if !is_fusion(algebra, p)? {
            return Err(Error::NotFusion);
        }
        all.push(p.clone());
    }
    for extra in [
        Partition::discrete(algebra.rank()),
        trivial_partition(algebra),
    ] {
        if is_fusion(algebra, &extra)? {
            all.push(extra);
        }
    }
    all.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    all.dedup();
    let fingerprints = all
        .par_iter()
        .map(|p| fingerprint(algebra, p))
        .collect::<Result<Vec<_>>>()?;
    let n = all.len();
    let mut below = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            below[a][b] = a != b && is_refinement(&all[a], &all[b])?;
        }
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if below[a][b] && !(0..n).any(|c| below[a][c] && below[c][b]) {
                edges.push((a, b));
            }
        }
    }
    Ok(LatticeGraph {
        nodes: all.into_iter().zip(fingerprints).collect(),
        edges,
    })
}

/// DOT digraph of a lattice; nodes are labeled `rank=<r> fp=<digest>`.
pub fn emit_lattice_dot(lattice: &LatticeGraph) -> String {
    let mut out = String::from("digraph fusions {\n");
    for (n, (p, fp)) in lattice.nodes.iter().enumerate() {
        let _ = writeln!(
            out,
            "  n{n} [label=\"rank={} fp={}\", tooltip=\"{p}\"];",
            p.len(),
            fp.digest()
        );
    }
    for (a, b) in &lattice.edges {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

/// All permutations of the basis preserving the identity support, the
/// involution and every structure constant.
pub fn algebraic_automorphism_group(algebra: &BasedAlgebra) -> Result<Vec<Vec<usize>>> {
    algebraic_automorphism_group_with_cap(algebra, DEFAULT_AUTOMORPHISM_CAP)
}

pub fn algebraic_automorphism_group_with_cap(
    algebra: &BasedAlgebra,
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    let r = algebra.rank();
    if r > cap {
        return Err(Error::CapExceeded { rank: r, cap });
    }
    // invariant of each basis element: identity membership, valency, minimal polynomial
    let invariants = (0..r)
        .into_par_iter()
        .map(|i| {
            let val = match algebra.star() {
                Some(_) => Some(valency(algebra, i)?),
                None => None,
            };
            let poly = minimal_polynomial(algebra, &ElementVector::basis(r, i))?;
            Ok((algebra.is_identity_index(i), val, poly))
        })
        .collect::<Result<Vec<_>>>()?;
    // sorted product values for each ordered pair
    let pair_values: Vec<Vec<crate::Rational>> = (0..r * r)
        .map(|ij| {
            let mut v: Vec<_> = algebra
                .product(ij / r, ij % r)
                .iter()
                .map(|(_, c)| c.clone())
                .collect();
            v.sort();
            v
        })
        .collect();

    let mut search = AutSearch {
        algebra,
        invariants: &invariants,
        pair_values: &pair_values,
        sigma: vec![usize::MAX; r],
        used: vec![false; r],
        found: Vec::new(),
    };
    search.extend(0);
    let mut found = search.found;
    found.sort();
    Ok(found)
}

type Invariant = (bool, Option<crate::Rational>, crate::poly::Polynomial);

struct AutSearch<'a> {
    algebra: &'a BasedAlgebra,
    invariants: &'a [Invariant],
    pair_values: &'a [Vec<crate::Rational>],
    sigma: Vec<usize>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
}

impl AutSearch<'_> {
    fn lam(&self, i: usize, j: usize, k: usize) -> crate::Rational {
        self.algebra.lambda_value(i, j, k)
    }

    /// Checks all constraints involving `t` against indices `0..=t`.
    fn consistent(&self, t: usize) -> bool {
        let r = self.algebra.rank();
        let s = &self.sigma;
        if let Some(star) = self.algebra.star() {
            let st = star[t];
            if st <= t && star[s[t]] != s[st] {
                return false;
            }
        }
        for a in 0..=t {
            if self.pair_values[t * r + a] != self.pair_values[s[t] * r + s[a]]
                || self.pair_values[a * r + t] != self.pair_values[s[a] * r + s[t]]
            {
                return false;
            }
            for b in 0..=t {
                if self.lam(t, a, b) != self.lam(s[t], s[a], s[b])
                    || self.lam(a, t, b) != self.lam(s[a], s[t], s[b])
                    || self.lam(a, b, t) != self.lam(s[a], s[b], s[t])
                {
                    return false;
                }
            }
        }
        true
    }

    fn extend(&mut self, t: usize) {
        let r = self.algebra.rank();
        if t == r {
            self.found.push(self.sigma.clone());
            return;
        }
        for c in 0..r {
            if self.used[c] || self.invariants[c] != self.invariants[t] {
                continue;
            }
            self.sigma[t] = c;
            self.used[c] = true;
            if self.consistent(t) {
                self.extend(t + 1);
            }
            self.used[c] = false;
        }
        self.sigma[t] = usize::MAX;
    }
}

/// Orbit of a partition under a list of basis permutations.
pub fn partition_orbit(p: &Partition, group: &[Vec<usize>]) -> Vec<Partition> {
    let mut orbit: Vec<Partition> = group.iter().map(|g| p.map(g)).collect();
    orbit.sort();
    orbit.dedup();
    orbit
}

/// Parses cycle notation such as `(1,3,2)(4,9,12)` into an image list on `rank` points.
pub fn parse_cycles(text: &str, rank: usize) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..rank).collect();
    let bad = |m: &str| Error::InvalidPermutation(format!("{m} in `{text}`"));
    let mut seen = vec![false; rank];
    for cycle in text.split(')').map(str::trim).filter(|c| !c.is_empty()) {
        let body = cycle.strip_prefix('(').ok_or_else(|| bad("missing `(`"))?;
        let points = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| bad("non-integer point"))
            })
            .collect::<Result<Vec<_>>>()?;
        for (n, &a) in points.iter().enumerate() {
            if a >= rank || seen[a] {
                return Err(bad("point out of range or repeated"));
            }
            seen[a] = true;
            perm[a] = points[(n + 1) % points.len()];
        }
    }
    Ok(perm)
}

/// Blocks given as lists, normalized; convenience for tests and tools.
pub fn partition_from_blocks(blocks: &[&[usize]], rank: usize) -> Result<Partition> {
    normalize(blocks.iter().map(|b| b.to_vec()).collect(), rank)
}
