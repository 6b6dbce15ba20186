//! One function per subcommand. Each returns the process exit status.

use std::str::FromStr;

use isofusion::algebra::{parse_tensor_text, with_detected_star};
use isofusion::eigen::{analyze_basis, analyze_element, ElementReport};
use isofusion::fusion::{
    fused_algebra, minimal_isolating_fusion, minimal_isolating_semifusion, FusionStatus,
};
use isofusion::lattice::{
    build_fusion_lattice, emit_lattice_dot, enumerate_seed_fusions, random_seed_search,
    EnumerationOptions, FoundFusion, SearchOptions,
};
use isofusion::orbitals::{
    coset_permutation_action, orbital_configuration, parse_group_file, regular_action,
    semidirect_group,
};
use isofusion::partition::{parse_partition, Partition, SeedFamily};
use isofusion::report::fusion_report;
use isofusion::scheme::{algebra_from_relations, fuse_relations, parse_relation_matrix};
use serde::Serialize;

use crate::args::{EigenArgs, FuseArgs, LatticeArgs, Mode, OrbitalsArgs, SearchArgs, ValidateArgs};
use crate::output::{argument, load, read_input, write_report, write_text, CliResult};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

/// Parses a seed family and checks it against `rank` before any computation.
fn parse_seeds(text: &str, rank: usize) -> CliResult<SeedFamily> {
    let seeds = SeedFamily::from_str(text).map_err(|e| argument("seed family", text, e))?;
    if seeds.is_empty() {
        return Err(argument("seed family", text, "no seed sets given"));
    }
    seeds
        .check_rank(rank)
        .map_err(|e| argument("seed family", text, e))?;
    Ok(seeds)
}

fn parse_indices(what: &'static str, text: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| argument(what, text, e))
        })
        .collect()
}

pub fn fuse(args: &FuseArgs, command_line: &[String]) -> CliResult<u8> {
    let loaded = load(&args.input)?;
    let a = &loaded.algebra;
    let seeds = parse_seeds(&args.seed, a.rank())?;
    if args.fused_matrix.is_some() && loaded.matrix.is_none() {
        return Err(argument("flag", "--fused-matrix", "needs a --scheme input"));
    }
    let strict = !args.relaxed;
    let outcome = match args.mode {
        Mode::Fusion => minimal_isolating_fusion(a, &seeds, strict)?,
        Mode::Semifusion => minimal_isolating_semifusion(a, &seeds, strict)?,
    };
    let report = fusion_report(a, &seeds, &outcome)?;
    write_report(
        args.output.as_deref(),
        command_line,
        &[loaded.record],
        &report,
    )?;
    if outcome.is_failed() {
        return Ok(EXIT_FAILED);
    }
    if let (Some(path), Some(m)) = (&args.fused_matrix, &loaded.matrix) {
        write_text(
            Some(path),
            &fuse_relations(m, &outcome.partition)?.to_bracketed(),
        )?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct FoundEntry {
    blocks: Vec<Vec<usize>>,
    rank: usize,
    fingerprint: String,
    status: FusionStatus,
    /// Every seed family that produced this partition, in partition syntax.
    seeds: Vec<String>,
}

fn found_entries(found: &[FoundFusion]) -> CliResult<Vec<FoundEntry>> {
    found
        .iter()
        .map(|f| {
            let fused = f
                .outcome
                .fused
                .as_ref()
                .expect("found fusions carry the fused algebra");
            Ok(FoundEntry {
                blocks: f.partition.blocks().to_vec(),
                rank: f.partition.len(),
                fingerprint: isofusion::lattice::algebra_fingerprint(fused)?.digest(),
                status: f.outcome.status,
                seeds: f.seeds.iter().map(|s| s.to_string()).collect(),
            })
        })
        .collect::<isofusion::Result<Vec<_>>>()
        .map_err(Into::into)
}

#[derive(Debug, Serialize)]
struct LatticeNode {
    blocks: Vec<Vec<usize>>,
    rank: usize,
    fingerprint: String,
}

#[derive(Debug, Serialize)]
struct LatticeResult {
    input_rank: usize,
    max_seed_size: usize,
    multi: Option<usize>,
    combine_all: bool,
    fusions: Vec<FoundEntry>,
    nodes: Vec<LatticeNode>,
    /// `(finer, coarser)` node indices.
    edges: Vec<(usize, usize)>,
}

pub fn lattice(args: &LatticeArgs, command_line: &[String]) -> CliResult<u8> {
    let loaded = load(&args.input)?;
    let a = &loaded.algebra;
    let options = EnumerationOptions {
        max_seed_size: args.max_seed_size,
        multi: args.multi,
        combine_all: args.combine_all,
    };
    let found = enumerate_seed_fusions(a, options)?;
    let partitions: Vec<Partition> = found.iter().map(|f| f.partition.clone()).collect();
    let graph = build_fusion_lattice(a, &partitions)?;
    let result = LatticeResult {
        input_rank: a.rank(),
        max_seed_size: args.max_seed_size,
        multi: args.multi,
        combine_all: args.combine_all,
        fusions: found_entries(&found)?,
        nodes: graph
            .nodes
            .iter()
            .map(|(p, fp)| LatticeNode {
                blocks: p.blocks().to_vec(),
                rank: p.len(),
                fingerprint: fp.digest(),
            })
            .collect(),
        edges: graph.edges.clone(),
    };
    write_report(
        args.output.as_deref(),
        command_line,
        &[loaded.record],
        &result,
    )?;
    if let Some(path) = &args.dot {
        write_text(Some(path), &emit_lattice_dot(&graph))?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct OrbitalsResult {
    group_order: Option<usize>,
    /// Subgroup elements as indices `(a*m + b)*k + c`; absent for the regular
    /// action and for group files.
    subgroup: Option<Vec<usize>>,
    degree: usize,
    rank: usize,
    diagonal_colors: Vec<usize>,
    /// Number of pairs of each color.
    color_sizes: Vec<usize>,
}

fn parse_semidirect(text: &str) -> CliResult<(usize, usize, [[usize; 2]; 2])> {
    let v = parse_indices("semidirect data", text)?;
    match v[..] {
        [m, k, a, b, c, d] => Ok((m, k, [[a, b], [c, d]])),
        _ => Err(argument(
            "semidirect data",
            text,
            "expected m,k,M00,M01,M10,M11",
        )),
    }
}

pub fn orbitals(args: &OrbitalsArgs, command_line: &[String]) -> CliResult<u8> {
    let mut inputs = Vec::new();
    let (group_order, subgroup, action) = match (&args.group, &args.semidirect) {
        (Some(path), _) => {
            let (text, record) = read_input(path)?;
            inputs.push(record);
            (None, None, parse_group_file(&text)?)
        }
        (None, Some(spec)) => {
            let (m, k, matrix) = parse_semidirect(spec)?;
            let g = semidirect_group(m, k, matrix)?;
            match &args.subgroup {
                None => (Some(g.order()), None, regular_action(&g)),
                Some(text) => {
                    let elements = text
                        .split(';')
                        .map(|e| match parse_indices("subgroup", e)?[..] {
                            [a, b, c] => Ok(g.semidirect_element(a, b, c)?),
                            _ => Err(argument("subgroup", text, "elements are written a,b,c")),
                        })
                        .collect::<CliResult<Vec<usize>>>()?;
                    let cosets = coset_permutation_action(&g, &elements)?;
                    (Some(g.order()), Some(cosets.subgroup), cosets.action)
                }
            }
        }
        (None, None) => unreachable!("clap requires a group source"),
    };
    let m = orbital_configuration(&action);
    let result = OrbitalsResult {
        group_order,
        subgroup,
        degree: m.order(),
        rank: m.rank(),
        diagonal_colors: m.diagonal_colors(),
        color_sizes: m.color_sizes(),
    };
    write_report(args.output.as_deref(), command_line, &inputs, &result)?;
    if let Some(path) = &args.matrix {
        write_text(Some(path), &m.to_bracketed())?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct EigenResult {
    /// Blocks fused along before the analysis, if any.
    partition: Option<Vec<Vec<usize>>>,
    rank: usize,
    elements: Vec<ElementReport>,
}

pub fn eigen(args: &EigenArgs, command_line: &[String]) -> CliResult<u8> {
    let loaded = load(&args.input)?;
    let (a, partition) = match &args.partition {
        Some(text) => {
            let p = parse_partition(text, loaded.algebra.rank())
                .map_err(|e| argument("partition", text, e))?;
            (
                fused_algebra(&loaded.algebra, &p)?,
                Some(p.blocks().to_vec()),
            )
        }
        None => (loaded.algebra.clone(), None),
    };
    let elements = if args.element.is_empty() {
        analyze_basis(&a)?
    } else {
        args.element
            .iter()
            .map(|text| Ok(analyze_element(&a, &parse_indices("element", text)?)?))
            .collect::<CliResult<Vec<_>>>()?
    };
    let result = EigenResult {
        partition,
        rank: a.rank(),
        elements,
    };
    write_report(
        args.output.as_deref(),
        command_line,
        &[loaded.record],
        &result,
    )?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct ValidateResult {
    kind: &'static str,
    valid: bool,
    order: Option<usize>,
    rank: Option<usize>,
    star: Option<Vec<usize>>,
    associativity_checked: bool,
    error: Option<String>,
}

/// Parse errors are input errors; a file that parses but fails coherence,
/// the identity law or associativity gives an invalid report and status 1.
pub fn validate(args: &ValidateArgs, command_line: &[String]) -> CliResult<u8> {
    let (kind, record, order, checked) = match (&args.input.scheme, &args.input.tensor) {
        (Some(path), _) => {
            let (text, record) = read_input(path)?;
            let m = parse_relation_matrix(&text)?;
            (
                "scheme",
                record,
                Some(m.order()),
                algebra_from_relations(&m).map_err(|e| e.to_string()),
            )
        }
        (None, Some(path)) => {
            let (text, record) = read_input(path)?;
            let parsed = match parse_tensor_text(&text, false) {
                Err(e @ isofusion::Error::Parse { .. }) => return Err(e.into()),
                other => other,
            };
            let checked = parsed.and_then(|a| {
                let a = match a.star() {
                    Some(_) => a,
                    None => with_detected_star(a.clone()).unwrap_or(a),
                };
                if args.associativity {
                    a.check_associativity()?;
                }
                Ok(a)
            });
            ("tensor", record, None, checked.map_err(|e| e.to_string()))
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    let result = match &checked {
        Ok(a) => ValidateResult {
            kind,
            valid: true,
            order,
            rank: Some(a.rank()),
            star: a.star().map(<[usize]>::to_vec),
            associativity_checked: args.associativity || kind == "scheme",
            error: None,
        },
        Err(e) => ValidateResult {
            kind,
            valid: false,
            order,
            rank: None,
            star: None,
            associativity_checked: args.associativity || kind == "scheme",
            error: Some(e.clone()),
        },
    };
    write_report(args.output.as_deref(), command_line, &[record], &result)?;
    Ok(if checked.is_ok() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

#[derive(Debug, Serialize)]
struct SearchResult {
    input_rank: usize,
    samples: usize,
    size_range: (usize, usize),
    sets: usize,
    rng_seed: u64,
    planted: Vec<String>,
    fusions: Vec<FoundEntry>,
}

pub fn search(args: &SearchArgs, command_line: &[String]) -> CliResult<u8> {
    let loaded = load(&args.input)?;
    let a = &loaded.algebra;
    let planted = args
        .plant
        .iter()
        .map(|text| parse_seeds(text, a.rank()))
        .collect::<CliResult<Vec<_>>>()?;
    let options = SearchOptions {
        samples: args.samples,
        size_range: (args.min_size, args.max_size),
        family_size: args.sets,
        rng_seed: args.rng_seed,
    };
    let found = random_seed_search(a, options, &planted)?;
    let result = SearchResult {
        input_rank: a.rank(),
        samples: args.samples,
        size_range: options.size_range,
        sets: args.sets,
        rng_seed: args.rng_seed,
        planted: planted.iter().map(|s| s.to_string()).collect(),
        fusions: found_entries(&found)?,
    };
    write_report(
        args.output.as_deref(),
        command_line,
        &[loaded.record],
        &result,
    )?;
    Ok(EXIT_OK)
}
