//! Partitions of the basis index set and seed families.
//!
//! A [`Partition`] is always canonical: each block is sorted and blocks are
//! ordered by their least element, so equality and hashing are structural.
//!
//! Text syntax: semicolon-separated blocks of comma-separated indices, e.g.
//! `0;1,2,3;4,5`. A partition string must cover every index; a seed family
//! string lists only the seed sets.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    #[serde(skip)]
    block_of: Vec<usize>,
}

/// Canonicalizes a full cover of `{0..rank-1}` into a [`Partition`].
pub fn normalize(blocks: Vec<Vec<usize>>, rank: usize) -> Result<Partition> {
    let mut seen = vec![false; rank];
    let mut out = Vec::with_capacity(blocks.len());
    for mut block in blocks {
        if block.is_empty() {
            return Err(Error::EmptyBlock);
        }
        block.sort_unstable();
        for w in block.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Overlap(w[0]));
            }
        }
        for &i in &block {
            if i >= rank {
                return Err(Error::IndexOutOfRange { index: i, rank });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Overlap(i));
            }
        }
        out.push(block);
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::IncompleteCover(missing));
    }
    Ok(Partition::from_canonical_blocks(out, rank))
}

impl Partition {
    /// Builds from blocks known to be a disjoint cover with sorted blocks.
    pub(crate) fn from_canonical_blocks(mut blocks: Vec<Vec<usize>>, rank: usize) -> Self {
        blocks.sort_unstable_by_key(|b| b[0]);
        let mut block_of = vec![0; rank];
        for (b, block) in blocks.iter().enumerate() {
            for &i in block {
                block_of[i] = b;
            }
        }
        Partition { blocks, block_of }
    }

    /// Builds from a block label per index; labels need not be contiguous.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (i, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(i);
        }
        Self::from_canonical_blocks(groups.into_values().collect(), labels.len())
    }

    /// Every index in its own block.
    pub fn discrete(rank: usize) -> Self {
        Self::from_canonical_blocks((0..rank).map(|i| vec![i]).collect(), rank)
    }

    pub fn rank(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Index of the block containing `i`.
    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.block_of
    }

    /// True when `set` is exactly one block.
    pub fn has_block(&self, set: &[usize]) -> bool {
        match set.first() {
            Some(&first) if first < self.rank() => {
                let mut sorted = set.to_vec();
                sorted.sort_unstable();
                self.blocks[self.block_of[first]] == sorted
            }
            _ => false,
        }
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.rank()
    }

    /// Applies an index permutation blockwise.
    pub fn map(&self, perm: &[usize]) -> Partition {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let mut nb: Vec<usize> = b.iter().map(|&i| perm[i]).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        Partition::from_canonical_blocks(blocks, self.rank())
    }
}

fn same_rank(p: &Partition, q: &Partition) -> Result<()> {
    if p.rank() != q.rank() {
        return Err(Error::RankMismatch {
            left: p.rank(),
            right: q.rank(),
        });
    }
    Ok(())
}

/// Coarsest common refinement: blocks are the nonempty pairwise intersections.
pub fn meet(p: &Partition, q: &Partition) -> Result<Partition> {
    same_rank(p, q)?;
    let mut groups: std::collections::HashMap<(usize, usize), Vec<usize>> = Default::default();
    for i in 0..p.rank() {
        groups
            .entry((p.block_of(i), q.block_of(i)))
            .or_default()
            .push(i);
    }
    Ok(Partition::from_canonical_blocks(
        groups.into_values().collect(),
        p.rank(),
    ))
}

/// Setwise image of every block under the involution `star`.
pub fn star_image(p: &Partition, star: &[usize]) -> Result<Partition> {
    if star.len() != p.rank() {
        return Err(Error::DimensionMismatch {
            expected: p.rank(),
            found: star.len(),
        });
    }
    Ok(p.map(star))
}

/// True iff every block of `p` lies inside a block of `q`.
pub fn is_refinement(p: &Partition, q: &Partition) -> Result<bool> {
    same_rank(p, q)?;
    Ok(p.blocks
        .iter()
        .all(|b| b.iter().all(|&i| q.block_of(i) == q.block_of(b[0]))))
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_blocks(f, &self.blocks)
    }
}

fn write_blocks(f: &mut fmt::Formatter<'_>, blocks: &[Vec<usize>]) -> fmt::Result {
    for (n, b) in blocks.iter().enumerate() {
        if n > 0 {
            f.write_str(";")?;
        }
        let items: Vec<String> = b.iter().map(|i| i.to_string()).collect();
        f.write_str(&items.join(","))?;
    }
    Ok(())
}

fn parse_blocks(text: &str) -> Result<Vec<Vec<usize>>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|block| {
            let block = block.trim();
            if block.is_empty() {
                return Err(Error::EmptyBlock);
            }
            block
                .split(',')
                .map(|t| {
                    t.trim().parse::<usize>().map_err(|_| Error::Parse {
                        line: 1,
                        message: format!("bad index `{}`", t.trim()),
                    })
                })
                .collect()
        })
        .collect()
}

/// Parses `0;1,2,3;4,5` as a full cover of `{0..rank-1}`.
pub fn parse_partition(text: &str, rank: usize) -> Result<Partition> {
    normalize(parse_blocks(text)?, rank)
}

/// Pairwise-disjoint, nonempty seed sets, each kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SeedFamily {
    sets: Vec<Vec<usize>>,
}

impl SeedFamily {
    pub fn new(sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(sets.len());
        for mut s in sets {
            if s.is_empty() {
                return Err(Error::EmptySeed);
            }
            s.sort_unstable();
            for &i in &s {
                if !seen.insert(i) {
                    return Err(Error::Overlap(i));
                }
            }
            out.push(s);
        }
        Ok(SeedFamily { sets: out })
    }

    pub fn single(set: Vec<usize>) -> Result<Self> {
        Self::new(vec![set])
    }

    pub fn empty() -> Self {
        SeedFamily { sets: Vec::new() }
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Checks every index against `rank`.
    pub fn check_rank(&self, rank: usize) -> Result<()> {
        for s in &self.sets {
            if let Some(&bad) = s.iter().find(|&&i| i >= rank) {
                return Err(Error::IndexOutOfRange { index: bad, rank });
            }
        }
        Ok(())
    }
}

impl fmt::Display for SeedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_blocks(f, &self.sets)
    }
}

impl FromStr for SeedFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SeedFamily::new(parse_blocks(s)?)
    }
}
