//! Property checks for every module, run with a fixed proptest seed.
//!
//! Each check returns `Err` with the failing input on a violation. The
//! `properties` test target runs them one test each; the acceptance target
//! runs them all and prints one summary line.

use std::collections::BTreeSet;

use isofusion::algebra::{
    build_algebra, detect_star, left_regular_matrix, BasedAlgebra, ElementVector,
};
use isofusion::eigen::{cyclotomic_verdict, minimal_polynomial, Cyclotomicity};
use isofusion::fusion::{
    brute_force_minimal, fused_algebra, initial_partition, is_fusion, is_semifusion,
    minimal_isolating_fusion, minimal_isolating_semifusion, refine_step, FusionStatus, StepOutcome,
};
use isofusion::lattice::{
    algebraic_automorphism_group, build_fusion_lattice, enumerate_seed_fusions, fingerprint,
    EnumerationOptions,
};
use isofusion::linalg::RatMatrix;
use isofusion::orbitals::{
    coset_permutation_action, orbital_configuration, relation_of_element, semidirect_group,
    FiniteGroup, PermGroup, WordOrder,
};
use isofusion::partition::{is_refinement, meet, normalize, star_image, Partition, SeedFamily};
use isofusion::poly::{cyclotomic_polynomial, divides, factor_over_rationals, Polynomial};
use isofusion::scheme::{
    algebra_from_relations, fuse_relations, parse_relation_matrix, RelationMatrix,
};
use isofusion::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    algebra, as28_matrix, c2_matrix, cyclic_matrix, full_matrix, mutate, random_scheme,
    random_short_cycles, seed_families,
};

/// Seed of every property run; change it only together with the published value in the README.
pub const PROPERTY_SEED: [u8; 32] = *b"isofusion property suite seed 01";

pub type Check = fn() -> Result<(), String>;

pub const ALL: &[(&str, Check)] = &[
    (
        "left_regular_matrix_is_multiplicative",
        left_regular_matrix_is_multiplicative,
    ),
    (
        "detected_star_reverses_products",
        detected_star_reverses_products,
    ),
    (
        "coherent_tensors_are_associative",
        coherent_tensors_are_associative,
    ),
    ("meet_laws", meet_laws),
    ("star_image_is_an_involution", star_image_is_an_involution),
    ("normalize_is_canonical", normalize_is_canonical),
    ("engine_outcomes_are_sound", engine_outcomes_are_sound),
    ("engine_matches_brute_force", engine_matches_brute_force),
    ("refinement_is_monotone", refinement_is_monotone),
    ("isolated_seed_stays_isolated", isolated_seed_stays_isolated),
    ("seed_order_does_not_matter", seed_order_does_not_matter),
    ("fused_relations_round_trip", fused_relations_round_trip),
    ("both_syntaxes_agree", both_syntaxes_agree),
    ("recoloring_matches_recount", recoloring_matches_recount),
    (
        "orbital_configurations_are_coherent",
        orbital_configurations_are_coherent,
    ),
    ("orbital_color_counts", orbital_color_counts),
    (
        "rank_equals_stabilizer_orbits",
        rank_equals_stabilizer_orbits,
    ),
    (
        "relations_constant_on_double_cosets",
        relations_constant_on_double_cosets,
    ),
    (
        "minimal_polynomial_annihilates",
        minimal_polynomial_annihilates,
    ),
    (
        "minimal_divides_characteristic",
        minimal_divides_characteristic,
    ),
    ("factors_multiply_back", factors_multiply_back),
    (
        "cyclotomic_polynomials_never_noncyclotomic",
        cyclotomic_polynomials_never_noncyclotomic,
    ),
    (
        "fingerprints_are_automorphism_invariant",
        fingerprints_are_automorphism_invariant,
    ),
    (
        "enumeration_is_complete_at_small_rank",
        enumeration_is_complete_at_small_rank,
    ),
    ("lattice_edges_decrease_rank", lattice_edges_decrease_rank),
    ("automorphisms_form_a_group", automorphisms_form_a_group),
];

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(
        config,
        TestRng::from_seed(RngAlgorithm::ChaCha, &PROPERTY_SEED),
    )
}

fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(cases)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

fn fail(message: String) -> TestCaseError {
    TestCaseError::fail(message)
}

/// A coherent scheme from a 64-bit seed: order at most 7, rank at most 8.
fn scheme_of(seed: u64, transitive: bool) -> RelationMatrix {
    random_scheme(&mut ChaCha8Rng::seed_from_u64(seed), 7, 8, transitive)
}

fn fixtures() -> Vec<RelationMatrix> {
    vec![c2_matrix(), cyclic_matrix(5), full_matrix(3)]
}

fn random_family(rng: &mut ChaCha8Rng, a: &BasedAlgebra) -> SeedFamily {
    let mut items: Vec<usize> = (0..a.rank()).filter(|&i| !a.is_identity_index(i)).collect();
    items.shuffle(rng);
    let sets = rng.gen_range(1..=2.min(items.len().max(1)));
    let mut out = Vec::new();
    let mut at = 0;
    for _ in 0..sets {
        if at >= items.len() {
            break;
        }
        let size = rng.gen_range(1..=3.min(items.len() - at));
        out.push(items[at..at + size].to_vec());
        at += size;
    }
    SeedFamily::new(out).unwrap()
}

fn random_partition(rng: &mut ChaCha8Rng, r: usize) -> Partition {
    let labels: Vec<usize> = (0..r).map(|_| rng.gen_range(0..r)).collect();
    Partition::from_labels(&labels)
}

fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> Vec<Vec<Rational>> {
    let n = a.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Rational::zero(), |acc, t| acc + a.get(i, t) * b.get(t, j)))
                .collect()
        })
        .collect()
}

fn rows_of(m: &RatMatrix) -> Vec<Vec<Rational>> {
    (0..m.dim()).map(|i| m.row(i).to_vec()).collect()
}

pub fn left_regular_matrix_is_multiplicative() -> Result<(), String> {
    check(24, any::<u64>(), |seed| {
        let a = algebra(&scheme_of(seed, false));
        let r = a.rank();
        for i in 0..r {
            for j in 0..r {
                let (u, v) = (ElementVector::basis(r, i), ElementVector::basis(r, j));
                let uv = a.multiply(&u, &v).unwrap();
                let lhs = rows_of(&left_regular_matrix(&a, &uv).unwrap());
                let rhs = mat_mul(
                    &left_regular_matrix(&a, &u).unwrap(),
                    &left_regular_matrix(&a, &v).unwrap(),
                );
                if lhs != rhs {
                    return Err(fail(format!("L(b{i} b{j}) != L(b{i}) L(b{j})")));
                }
            }
        }
        Ok(())
    })
}

pub fn detected_star_reverses_products() -> Result<(), String> {
    let mut all = fixtures();
    all.push(as28_matrix());
    for m in &all {
        let a = algebra(m);
        let star = detect_star(&a).map_err(|e| e.to_string())?;
        for ((i, j, k), v) in a.tensor().iter() {
            if a.lambda_value(star[j], star[i], star[k]) != *v {
                return Err(format!("λ({i},{j},{k}) not reversed by star"));
            }
        }
    }
    check(24, any::<u64>(), |seed| {
        let a = algebra(&scheme_of(seed, false));
        let star = detect_star(&a).unwrap();
        for ((i, j, k), v) in a.tensor().iter() {
            if a.lambda_value(star[j], star[i], star[k]) != *v {
                return Err(fail(format!("λ({i},{j},{k}) not reversed by star")));
            }
        }
        Ok(())
    })
}

pub fn coherent_tensors_are_associative() -> Result<(), String> {
    check(24, any::<u64>(), |seed| {
        let a = algebra(&scheme_of(seed, false));
        build_algebra(
            &a.tensor(),
            a.identity_support(),
            a.star().map(|s| s.to_vec()),
            true,
        )
        .map_err(|e| fail(e.to_string()))?;
        Ok(())
    })
}

pub fn meet_laws() -> Result<(), String> {
    check(64, (any::<u64>(), 1usize..10), |(seed, r)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q, s) = (
            random_partition(&mut rng, r),
            random_partition(&mut rng, r),
            random_partition(&mut rng, r),
        );
        let pq = meet(&p, &q).unwrap();
        prop_assert_eq!(&pq, &meet(&q, &p).unwrap());
        prop_assert_eq!(meet(&p, &p).unwrap(), p.clone());
        prop_assert_eq!(
            meet(&pq, &s).unwrap(),
            meet(&p, &meet(&q, &s).unwrap()).unwrap()
        );
        prop_assert!(is_refinement(&pq, &p).unwrap());
        prop_assert!(is_refinement(&pq, &q).unwrap());
        Ok(())
    })
}

pub fn star_image_is_an_involution() -> Result<(), String> {
    check(64, (any::<u64>(), 1usize..10), |(seed, r)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_partition(&mut rng, r);
        // a random involution: shuffle, then swap consecutive pairs
        let mut order: Vec<usize> = (0..r).collect();
        order.shuffle(&mut rng);
        let mut star: Vec<usize> = (0..r).collect();
        for pair in order.chunks(2) {
            if pair.len() == 2 && rng.gen_bool(0.5) {
                star[pair[0]] = pair[1];
                star[pair[1]] = pair[0];
            }
        }
        let twice = star_image(&star_image(&p, &star).unwrap(), &star).unwrap();
        prop_assert_eq!(twice, p);
        Ok(())
    })
}

pub fn normalize_is_canonical() -> Result<(), String> {
    check(64, (any::<u64>(), 1usize..10), |(seed, r)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_partition(&mut rng, r);
        let mut blocks: Vec<Vec<usize>> = p.blocks().to_vec();
        blocks.shuffle(&mut rng);
        for b in blocks.iter_mut() {
            b.shuffle(&mut rng);
        }
        let q = normalize(blocks, r).unwrap();
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(normalize(q.blocks().to_vec(), r).unwrap(), q);
        Ok(())
    })
}

pub fn engine_outcomes_are_sound() -> Result<(), String> {
    check(48, (any::<u64>(), any::<bool>()), |(seed, strict)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = algebra(&scheme_of(seed, false));
        let seeds = random_family(&mut rng, &a);
        let semi = minimal_isolating_semifusion(&a, &seeds, strict).unwrap();
        if !semi.is_failed() {
            prop_assert!(is_semifusion(&a, &semi.partition).unwrap());
        }
        let fusion = minimal_isolating_fusion(&a, &seeds, strict).unwrap();
        if !fusion.is_failed() {
            prop_assert!(is_semifusion(&a, &fusion.partition).unwrap());
        }
        if fusion.status == FusionStatus::Fusion {
            prop_assert!(is_fusion(&a, &fusion.partition).unwrap());
        }
        Ok(())
    })
}

pub fn engine_matches_brute_force() -> Result<(), String> {
    check(32, any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = algebra(&scheme_of(seed, false));
        for _ in 0..4 {
            let seeds = random_family(&mut rng, &a);
            for want_fusion in [false, true] {
                let engine = if want_fusion {
                    minimal_isolating_fusion(&a, &seeds, true).unwrap()
                } else {
                    minimal_isolating_semifusion(&a, &seeds, true).unwrap()
                };
                let oracle = brute_force_minimal(&a, &seeds, want_fusion).unwrap();
                let got = (!engine.is_failed()).then_some(engine.partition);
                if got != oracle {
                    return Err(fail(format!(
                        "seeds {:?}, fusion {want_fusion}: engine {got:?}, oracle {oracle:?}",
                        seeds.sets()
                    )));
                }
            }
        }
        Ok(())
    })
}

pub fn refinement_is_monotone() -> Result<(), String> {
    check(48, any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = algebra(&scheme_of(seed, false));
        let seeds = random_family(&mut rng, &a);
        let mut p = initial_partition(&a, &seeds).unwrap();
        let mut steps = 0;
        loop {
            let StepOutcome::Refined(q) = refine_step(&a, &p, &seeds, false).unwrap() else {
                return Err(fail("relaxed step reported a split".into()));
            };
            prop_assert!(is_refinement(&q, &p).unwrap());
            if q == p {
                break;
            }
            prop_assert!(q.len() > p.len());
            steps += 1;
            p = q;
        }
        prop_assert!(steps <= a.rank(), "{} steps at rank {}", steps, a.rank());
        Ok(())
    })
}

pub fn isolated_seed_stays_isolated() -> Result<(), String> {
    check(48, any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = algebra(&scheme_of(seed, false));
        let seeds = random_family(&mut rng, &a);
        let out = minimal_isolating_semifusion(&a, &seeds, true).unwrap();
        if out.is_failed() {
            return Ok(());
        }
        let fused = out.fused.as_ref().unwrap();
        let fused_seeds: Vec<Vec<usize>> = seeds
            .sets()
            .iter()
            .map(|s| vec![out.partition.block_of(s[0])])
            .collect();
        let again =
            minimal_isolating_semifusion(fused, &SeedFamily::new(fused_seeds).unwrap(), true)
                .unwrap();
        prop_assert!(!again.is_failed());
        prop_assert!(again.partition.is_discrete());
        Ok(())
    })
}

pub fn seed_order_does_not_matter() -> Result<(), String> {
    check(48, any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = algebra(&scheme_of(seed, false));
        let seeds = random_family(&mut rng, &a);
        let mut sets = seeds.sets().to_vec();
        sets.reverse();
        for s in sets.iter_mut() {
            s.shuffle(&mut rng);
        }
        let reordered = SeedFamily::new(sets).unwrap();
        let x = minimal_isolating_fusion(&a, &seeds, false).unwrap();
        let y = minimal_isolating_fusion(&a, &reordered, false).unwrap();
        prop_assert_eq!(x.partition, y.partition);
        prop_assert_eq!(x.status, y.status);
        Ok(())
    })
}

/// Compares `algebra_from_relations(fuse_relations(m, p))` with the fused algebra
/// after renaming fused colors to block indices.
fn round_trip(m: &RelationMatrix, p: &Partition) -> Result<(), String> {
    let a = algebra(m);
    let fused = fused_algebra(&a, p).map_err(|e| e.to_string())?;
    let fm = fuse_relations(m, p).map_err(|e| e.to_string())?;
    let b = algebra_from_relations(&fm).map_err(|e| e.to_string())?;
    if b.rank() != fused.rank() {
        return Err(format!("rank {} vs {}", b.rank(), fused.rank()));
    }
    // color of block t in the fused matrix
    let mut color = vec![usize::MAX; p.len()];
    for x in 0..m.order() {
        for y in 0..m.order() {
            color[p.block_of(m.get(x, y))] = fm.get(x, y);
        }
    }
    for i in 0..p.len() {
        for j in 0..p.len() {
            for k in 0..p.len() {
                if fused.lambda_value(i, j, k) != b.lambda_value(color[i], color[j], color[k]) {
                    return Err(format!("λ({i},{j},{k}) differs for partition {p}"));
                }
            }
        }
    }
    Ok(())
}

pub fn fused_relations_round_trip() -> Result<(), String> {
    for m in fixtures() {
        let a = algebra(&m);
        for seeds in seed_families(&a, 1, 2) {
            let out = minimal_isolating_fusion(&a, &seeds, true).map_err(|e| e.to_string())?;
            if out.status == FusionStatus::Fusion {
                round_trip(&m, &out.partition)?;
            }
        }
    }
    check(32, any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = scheme_of(seed, false);
        let a = algebra(&m);
        let out = minimal_isolating_fusion(&a, &random_family(&mut rng, &a), true).unwrap();
        if out.status == FusionStatus::Fusion {
            round_trip(&m, &out.partition).map_err(fail)?;
        }
        Ok(())
    })
}

pub fn both_syntaxes_agree() -> Result<(), String> {
    check(32, any::<u64>(), |seed| {
        let m = scheme_of(seed, false);
        let plain = parse_relation_matrix(&m.to_plain()).unwrap();
        let bracketed = parse_relation_matrix(&format!("M := {}", m.to_bracketed())).unwrap();
        prop_assert_eq!(&plain, &bracketed);
        prop_assert_eq!(&plain, &m);
        Ok(())
    })
}

/// Independent coherence test: transpose closure and constant 2-path counts, by brute force.
pub fn recount_is_coherent(m: &RelationMatrix) -> bool {
    let n = m.order();
    let r = m.rank();
    let diagonal: BTreeSet<usize> = (0..n).map(|x| m.get(x, x)).collect();
    if (0..n).any(|x| (0..n).any(|y| x != y && diagonal.contains(&m.get(x, y)))) {
        return false;
    }
    let mut transpose = vec![usize::MAX; r];
    for x in 0..n {
        for y in 0..n {
            let (c, t) = (m.get(x, y), m.get(y, x));
            if transpose[c] == usize::MAX {
                transpose[c] = t;
            } else if transpose[c] != t {
                return false;
            }
        }
    }
    let mut seen: Vec<Option<Vec<usize>>> = vec![None; r];
    for x in 0..n {
        for y in 0..n {
            let mut counts = vec![0usize; r * r];
            for z in 0..n {
                counts[m.get(x, z) * r + m.get(z, y)] += 1;
            }
            let k = m.get(x, y);
            match &seen[k] {
                None => seen[k] = Some(counts),
                Some(prev) if *prev != counts => return false,
                _ => {}
            }
        }
    }
    true
}

pub fn recoloring_matches_recount() -> Result<(), String> {
    check(64, any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = scheme_of(seed, false);
        let n = m.order();
        let off: Vec<(usize, usize)> = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|(x, y)| x != y)
            .collect();
        let diagonal = m.diagonal_colors();
        let colors: Vec<usize> = (0..m.rank()).filter(|c| !diagonal.contains(c)).collect();
        if off.is_empty() || colors.len() < 2 {
            return Ok(());
        }
        let (x, y) = *off.choose(&mut rng).unwrap();
        let c = *colors
            .iter()
            .filter(|&&c| c != m.get(x, y))
            .collect::<Vec<_>>()
            .choose(&mut rng)
            .unwrap();
        let mut rows = m.rows();
        rows[x][y] = *c;
        let Ok(mutated) = RelationMatrix::from_rows(rows) else {
            return Ok(());
        };
        let verdict = algebra_from_relations(&mutated).is_ok();
        prop_assert_eq!(verdict, recount_is_coherent(&mutated));
        Ok(())
    })?;
    // merged-color mutations exercise the accepting side as well
    check(64, any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = mutate(&mut rng, &scheme_of(seed, false));
        prop_assert_eq!(algebra_from_relations(&m).is_ok(), recount_is_coherent(&m));
        Ok(())
    })
}

fn random_group(seed: u64, max_degree: usize) -> PermGroup {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_degree);
    let gens = rng.gen_range(1..=2);
    let generators = (0..gens)
        .map(|_| random_short_cycles(&mut rng, n, 4))
        .collect();
    PermGroup::new(n, generators).unwrap()
}

pub fn orbital_configurations_are_coherent() -> Result<(), String> {
    check(48, any::<u64>(), |seed| {
        let g = random_group(seed, 9);
        let m = orbital_configuration(&g);
        prop_assert!(algebra_from_relations(&m).is_ok());
        prop_assert!(recount_is_coherent(&m));
        Ok(())
    })
}

pub fn orbital_color_counts() -> Result<(), String> {
    check(48, any::<u64>(), |seed| {
        let g = random_group(seed, 9);
        let n = g.degree();
        let m = orbital_configuration(&g);
        prop_assert_eq!(m.color_sizes().iter().sum::<usize>(), n * n);
        let diagonal = m.diagonal_colors();
        prop_assert_eq!(diagonal.len(), g.orbits().len());
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(diagonal.contains(&m.get(x, y)), x == y);
            }
        }
        Ok(())
    })
}

fn closure(g: &PermGroup) -> Vec<Vec<usize>> {
    let n = g.degree();
    let mut elements: BTreeSet<Vec<usize>> = BTreeSet::new();
    let identity: Vec<usize> = (0..n).collect();
    let mut frontier = vec![identity.clone()];
    elements.insert(identity);
    while let Some(h) = frontier.pop() {
        for s in g.generators() {
            let next: Vec<usize> = (0..n).map(|x| s[h[x]]).collect();
            if elements.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    elements.into_iter().collect()
}

pub fn rank_equals_stabilizer_orbits() -> Result<(), String> {
    check(48, any::<u64>(), |seed| {
        let g = random_group(seed, 7);
        if g.orbits().len() != 1 {
            return Ok(());
        }
        let stabilizer: Vec<Vec<usize>> = closure(&g).into_iter().filter(|h| h[0] == 0).collect();
        let n = g.degree();
        let mut label: Vec<usize> = (0..n).collect();
        // orbits of the stabilizer by repeated merging
        let mut changed = true;
        while changed {
            changed = false;
            for h in &stabilizer {
                for x in 0..n {
                    let (a, b) = (label[x], label[h[x]]);
                    if a != b {
                        let low = a.min(b);
                        label.iter_mut().for_each(|l| {
                            if *l == a || *l == b {
                                *l = low
                            }
                        });
                        changed = true;
                    }
                }
            }
        }
        let orbits: BTreeSet<usize> = label.into_iter().collect();
        prop_assert_eq!(orbital_configuration(&g).rank(), orbits.len());
        Ok(())
    })
}

fn subgroup_generated(g: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let mut set: BTreeSet<usize> = BTreeSet::from([g.identity()]);
    let mut frontier = vec![g.identity()];
    while let Some(h) = frontier.pop() {
        for &s in gens {
            let next = g.multiply(h, s);
            if set.insert(next) {
                frontier.push(next);
            }
        }
    }
    set.into_iter().collect()
}

fn double_coset_check(g: &FiniteGroup, subgroup: &[usize]) -> Result<(), String> {
    let action = coset_permutation_action(g, subgroup).map_err(|e| e.to_string())?;
    let m = orbital_configuration(&action.action);
    for x in 0..g.order() {
        let base = relation_of_element(&action, &m, x).map_err(|e| e.to_string())?;
        for &h in subgroup {
            for &k in subgroup {
                let y = g.multiply(g.multiply(h, x), k);
                if relation_of_element(&action, &m, y).map_err(|e| e.to_string())? != base {
                    return Err(format!(
                        "element {x} and {y} share a double coset but not a relation"
                    ));
                }
            }
        }
    }
    Ok(())
}

pub fn relations_constant_on_double_cosets() -> Result<(), String> {
    let g96 = semidirect_group(4, 6, [[2, 1], [1, 1]]).map_err(|e| e.to_string())?;
    let z3 = g96
        .evaluate_word("z^3", WordOrder::LeftToRight)
        .map_err(|e| e.to_string())?;
    double_coset_check(&g96, &subgroup_generated(&g96, &[z3]))?;
    let a4 = semidirect_group(2, 3, [[0, 1], [1, 1]]).map_err(|e| e.to_string())?;
    check(24, (any::<u64>(), any::<bool>()), |(seed, use_a4)| {
        let g = if use_a4 { &a4 } else { &g96 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<usize> = (0..rng.gen_range(1..=2))
            .map(|_| rng.gen_range(0..g.order()))
            .collect();
        double_coset_check(g, &subgroup_generated(g, &gens)).map_err(fail)
    })
}

fn minimal_polynomial_cases(seed: u64) -> (BasedAlgebra, ElementVector) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = algebra(&scheme_of(seed, false));
    let coeffs = (0..a.rank())
        .map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-2i64..=2))))
        .collect();
    (a, ElementVector(coeffs))
}

pub fn minimal_polynomial_annihilates() -> Result<(), String> {
    check(32, any::<u64>(), |seed| {
        let (a, v) = minimal_polynomial_cases(seed);
        let p = minimal_polynomial(&a, &v).unwrap();
        let l = left_regular_matrix(&a, &v).unwrap();
        let coeffs: Vec<Rational> = p
            .coeffs()
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        prop_assert!(l.eval_poly(&coeffs).is_zero(), "{} does not annihilate", p);
        Ok(())
    })
}

/// Determinant by fraction-free elimination on integer matrices.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// `det(x I − L)` by evaluation at `0..=n` and Lagrange interpolation.
fn characteristic_polynomial(l: &RatMatrix) -> Polynomial {
    let n = l.dim();
    let ints: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = l.get(i, j);
                    assert!(v.is_integer(), "integral regular matrix expected");
                    v.to_integer()
                })
                .collect()
        })
        .collect();
    let points: Vec<i64> = (0..=n as i64).collect();
    let values: Vec<BigInt> = points
        .iter()
        .map(|&t| {
            let m = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let d = if i == j {
                                BigInt::from(t)
                            } else {
                                BigInt::zero()
                            };
                            d - &ints[i][j]
                        })
                        .collect()
                })
                .collect();
            bareiss(m)
        })
        .collect();
    let mut total = vec![Rational::zero(); n + 1];
    for (a, &xa) in points.iter().enumerate() {
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for (b, &xb) in points.iter().enumerate() {
            if a == b {
                continue;
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * Rational::from_integer(BigInt::from(xb));
            }
            basis = next;
            denom *= Rational::from_integer(BigInt::from(xa - xb));
        }
        let scale = Rational::from_integer(values[a].clone()) / denom;
        for (d, c) in basis.iter().enumerate() {
            total[d] += c * &scale;
        }
    }
    Polynomial::new(total.iter().map(|c| c.to_integer()).collect())
}

pub fn minimal_divides_characteristic() -> Result<(), String> {
    check(32, any::<u64>(), |seed| {
        let (a, v) = minimal_polynomial_cases(seed);
        let p = minimal_polynomial(&a, &v).unwrap();
        let chi = characteristic_polynomial(&left_regular_matrix(&a, &v).unwrap());
        prop_assert_eq!(chi.degree(), Some(a.rank()));
        prop_assert!(divides(&p, &chi).unwrap(), "{} does not divide {}", p, chi);
        Ok(())
    })
}

pub fn factors_multiply_back() -> Result<(), String> {
    let small = prop::collection::vec(-4i64..=4, 2..=4);
    check(64, prop::collection::vec(small, 1..=3), |parts| {
        let f = parts
            .iter()
            .map(|c| Polynomial::from_i64(c))
            .fold(Polynomial::one(), |acc, p| acc.mul(&p));
        if f.degree().unwrap_or(0) == 0 {
            return Ok(());
        }
        let factors = factor_over_rationals(&f).unwrap();
        let product = factors.iter().fold(Polynomial::one(), |acc, (p, e)| {
            (0..*e).fold(acc, |acc, _| acc.mul(p))
        });
        let target = f.primitive();
        prop_assert!(
            product == target || product == target.neg(),
            "{} vs {}",
            product,
            f
        );
        Ok(())
    })
}

pub fn cyclotomic_polynomials_never_noncyclotomic() -> Result<(), String> {
    for n in 1..=100 {
        let v = cyclotomic_verdict(&cyclotomic_polynomial(n)).map_err(|e| e.to_string())?;
        if v.value == Cyclotomicity::Noncyclotomic {
            return Err(format!("Φ_{n} judged noncyclotomic"));
        }
    }
    Ok(())
}

fn fusions_of(a: &BasedAlgebra) -> Vec<Partition> {
    enumerate_seed_fusions(a, EnumerationOptions::singles(3))
        .unwrap()
        .into_iter()
        .map(|f| f.partition)
        .collect()
}

fn invariant_fingerprints(a: &BasedAlgebra) -> Result<(), String> {
    let group = algebraic_automorphism_group(a).map_err(|e| e.to_string())?;
    for p in fusions_of(a) {
        let base = fingerprint(a, &p).map_err(|e| e.to_string())?;
        for s in &group {
            if fingerprint(a, &p.map(s)).map_err(|e| e.to_string())? != base {
                return Err(format!("fingerprint of {p} changes under {s:?}"));
            }
        }
    }
    Ok(())
}

pub fn fingerprints_are_automorphism_invariant() -> Result<(), String> {
    invariant_fingerprints(&algebra(&cyclic_matrix(5)))?;
    invariant_fingerprints(&algebra(&as28_matrix()))?;
    check(16, any::<u64>(), |seed| {
        invariant_fingerprints(&algebra(&scheme_of(seed, true))).map_err(fail)
    })
}

fn all_fusions_exhaustive(a: &BasedAlgebra) -> BTreeSet<Partition> {
    let r = a.rank();
    let mut out = BTreeSet::new();
    let mut labels = vec![0usize; r];
    fn rec(
        a: &BasedAlgebra,
        i: usize,
        max: usize,
        labels: &mut Vec<usize>,
        out: &mut BTreeSet<Partition>,
    ) {
        if i == labels.len() {
            let p = Partition::from_labels(labels);
            if is_fusion(a, &p).unwrap() {
                out.insert(p);
            }
            return;
        }
        for l in 0..=max + 1 {
            labels[i] = l;
            rec(a, i + 1, max.max(l), labels, out);
        }
    }
    if r == 1 {
        out.insert(Partition::discrete(1));
        return out;
    }
    rec(a, 1, 0, &mut labels, &mut out);
    out
}

fn complete_at(a: &BasedAlgebra) -> Result<(), String> {
    let r = a.rank();
    if r < 2 {
        return Ok(());
    }
    let options = EnumerationOptions {
        max_seed_size: r - 1,
        multi: Some(r),
        combine_all: false,
    };
    let found: BTreeSet<Partition> = enumerate_seed_fusions(a, options)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|f| f.partition)
        .collect();
    let expected = all_fusions_exhaustive(a);
    if found != expected {
        return Err(format!(
            "enumeration found {} fusions, exhaustive search {}",
            found.len(),
            expected.len()
        ));
    }
    Ok(())
}

pub fn enumeration_is_complete_at_small_rank() -> Result<(), String> {
    complete_at(&algebra(&c2_matrix()))?;
    complete_at(&algebra(&cyclic_matrix(5)))?;
    check(16, any::<u64>(), |seed| {
        complete_at(&algebra(&scheme_of(seed, true))).map_err(fail)
    })
}

pub fn lattice_edges_decrease_rank() -> Result<(), String> {
    let mut all = vec![cyclic_matrix(5), as28_matrix()];
    all.extend((0..8).map(|s| scheme_of(s, true)));
    for m in &all {
        let a = algebra(m);
        let lattice = build_fusion_lattice(&a, &fusions_of(&a)).map_err(|e| e.to_string())?;
        for &(finer, coarser) in &lattice.edges {
            let (p, q) = (&lattice.nodes[finer].0, &lattice.nodes[coarser].0);
            if p.len() <= q.len() || !is_refinement(p, q).map_err(|e| e.to_string())? {
                return Err(format!("edge {p} -> {q} does not coarsen"));
            }
        }
    }
    Ok(())
}

fn group_axioms(group: &[Vec<usize>]) -> Result<(), String> {
    let set: BTreeSet<&Vec<usize>> = group.iter().collect();
    let r = group.first().map_or(0, |g| g.len());
    if !set.contains(&(0..r).collect::<Vec<_>>()) {
        return Err("identity missing".into());
    }
    for g in group {
        let mut inverse = vec![0; r];
        for (i, &x) in g.iter().enumerate() {
            inverse[x] = i;
        }
        if !set.contains(&inverse) {
            return Err(format!("inverse of {g:?} missing"));
        }
        for h in group {
            let gh: Vec<usize> = (0..r).map(|i| g[h[i]]).collect();
            if !set.contains(&gh) {
                return Err(format!("product of {g:?} and {h:?} missing"));
            }
        }
    }
    Ok(())
}

pub fn automorphisms_form_a_group() -> Result<(), String> {
    for m in [cyclic_matrix(5), cyclic_matrix(8), as28_matrix()] {
        group_axioms(&algebraic_automorphism_group(&algebra(&m)).map_err(|e| e.to_string())?)?;
    }
    check(16, any::<u64>(), |seed| {
        let a = algebra(&scheme_of(seed, true));
        group_axioms(&algebraic_automorphism_group(&a).unwrap()).map_err(fail)
    })
}
