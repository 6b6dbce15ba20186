//! Relation matrices of coherent configurations and their adjacency algebras.
//!
//! A relation matrix colors every ordered pair of points with a relation
//! index. Two syntaxes are read:
//!
//! * plain: the order `n` on the first line, then `n` rows of `n` integers;
//! * bracketed: a matrix literal `[[0,1],[1,0]]`, optionally preceded by an
//!   assignment such as `as28no176 := `, which is skipped up to the first `[`.
//!
//! Colors keep the file's numbering (0 on the diagonal of a homogeneous
//! scheme), except that a matrix whose smallest color is 1 is shifted down to
//! start at 0.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::algebra::{build_algebra, BasedAlgebra, StructureTensor};
use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelationMatrix {
    order: usize,
    rank: usize,
    entries: Vec<u32>,
}

impl RelationMatrix {
    /// Builds from rows; every color in `0..rank` must occur.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Parse {
                line: 1,
                message: "empty matrix".into(),
            });
        }
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse {
                    line: r + 1,
                    message: format!("row {r} has {} entries, expected {n}", row.len()),
                });
            }
            entries.extend(row.iter().map(|&c| c as u32));
        }
        Self::from_entries(n, entries)
    }

    fn from_entries(order: usize, mut entries: Vec<u32>) -> Result<Self> {
        let min = entries.iter().copied().min().unwrap_or(0);
        if min == 1 {
            entries.iter_mut().for_each(|c| *c -= 1);
        }
        let rank = entries.iter().copied().max().unwrap_or(0) as usize + 1;
        let mut present = vec![false; rank];
        for &c in &entries {
            present[c as usize] = true;
        }
        if let Some(missing) = present.iter().position(|p| !p) {
            return Err(Error::MissingColor(missing));
        }
        Ok(RelationMatrix {
            order,
            rank,
            entries,
        })
    }

    /// Number of points.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of colors.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, x: usize, y: usize) -> usize {
        self.entries[x * self.order + y] as usize
    }

    pub fn row(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.entries[x * self.order..(x + 1) * self.order]
            .iter()
            .map(|&c| c as usize)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|x| self.row(x).collect()).collect()
    }

    /// Sorted list of colors occurring on the diagonal.
    pub fn diagonal_colors(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.order).map(|x| self.get(x, x)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Number of pairs of each color.
    pub fn color_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.rank];
        for &c in &self.entries {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// Plain syntax: order, then one row per line.
    pub fn to_plain(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for x in 0..self.order {
            let row: Vec<String> = self.row(x).map(|c| c.to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    /// Bracketed syntax, one row per line.
    pub fn to_bracketed(&self) -> String {
        let rows: Vec<String> = (0..self.order)
            .map(|x| {
                let row: Vec<String> = self.row(x).map(|c| c.to_string()).collect();
                format!("[{}]", row.join(","))
            })
            .collect();
        format!("[{}]\n", rows.join(",\n "))
    }
}

/// Reads either syntax.
pub fn parse_relation_matrix(text: &str) -> Result<RelationMatrix> {
    match text.find('[') {
        Some(start) => parse_bracketed(&text[start..], line_of(text, start)),
        None => parse_plain(text),
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset].matches('\n').count() + 1
}

fn parse_plain(text: &str) -> Result<RelationMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty input".into(),
    })?;
    let n: usize = header.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected the matrix order, found `{header}`"),
    })?;
    let mut rows = Vec::with_capacity(n);
    for (line, content) in lines {
        let row = content
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| Error::Parse {
                    line,
                    message: format!("non-integer token `{t}`"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(Error::Parse {
                line,
                message: format!("ragged row: {} entries, expected {n}", row.len()),
            });
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Parse {
            line,
            message: format!("expected {n} rows, found {}", rows.len()),
        });
    }
    RelationMatrix::from_rows(rows)
}

fn parse_bracketed(text: &str, first_line: usize) -> Result<RelationMatrix> {
    let mut line = first_line;
    let mut depth = 0usize;
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    let mut token = String::new();
    let mut closed = false;

    let flush = |token: &mut String, current: &mut Vec<usize>, line: usize| -> Result<()> {
        if token.is_empty() {
            return Ok(());
        }
        let v = token.parse::<usize>().map_err(|_| Error::Parse {
            line,
            message: format!("non-integer token `{token}`"),
        })?;
        current.push(v);
        token.clear();
        Ok(())
    };

    for ch in text.chars() {
        if closed {
            if ch.is_whitespace() || ch == ';' {
                if ch == '\n' {
                    line += 1;
                }
                continue;
            }
            return Err(Error::Parse {
                line,
                message: format!("unexpected `{ch}` after the matrix"),
            });
        }
        match ch {
            '[' => {
                depth += 1;
                if depth > 2 {
                    return Err(Error::Parse {
                        line,
                        message: "matrix literal nested too deeply".into(),
                    });
                }
            }
            ']' => {
                flush(&mut token, &mut current, line)?;
                match depth {
                    2 => rows.push(std::mem::take(&mut current)),
                    1 => closed = true,
                    _ => {
                        return Err(Error::Parse {
                            line,
                            message: "unbalanced brackets".into(),
                        })
                    }
                }
                depth -= 1;
            }
            ',' => flush(&mut token, &mut current, line)?,
            c if c.is_whitespace() => {
                flush(&mut token, &mut current, line)?;
                if c == '\n' {
                    line += 1;
                }
            }
            c => {
                if depth != 2 {
                    return Err(Error::Parse {
                        line,
                        message: format!("unexpected `{c}` outside a row"),
                    });
                }
                token.push(c);
            }
        }
    }
    if !closed {
        return Err(Error::Parse {
            line,
            message: "unbalanced brackets".into(),
        });
    }
    RelationMatrix::from_rows(rows)
}

/// Transpose pairing of colors: `c ↦ c'` with `M[y][x] = c'` whenever `M[x][y] = c`.
pub fn transpose_pairing(m: &RelationMatrix) -> Result<Vec<usize>> {
    let n = m.order();
    let mut pairing = vec![usize::MAX; m.rank()];
    for x in 0..n {
        for y in 0..n {
            let c = m.get(x, y);
            let t = m.get(y, x);
            if pairing[c] == usize::MAX {
                pairing[c] = t;
            } else if pairing[c] != t {
                return Err(Error::TransposeNotColor(c));
            }
        }
    }
    Ok(pairing)
}

/// Intersection numbers of a coherent configuration.
///
/// `λ_{ijk}` counts the `z` with `M[x][z] = i` and `M[z][y] = j` for the first
/// pair `(x, y)` of color `k`; every other pair of color `k` is checked to give
/// the same counts.
pub fn algebra_from_relations(m: &RelationMatrix) -> Result<BasedAlgebra> {
    let n = m.order();
    let r = m.rank();
    let diagonal = m.diagonal_colors();
    for x in 0..n {
        for y in 0..n {
            if x != y && diagonal.binary_search(&m.get(x, y)).is_ok() {
                return Err(Error::FiberCondition(m.get(x, y)));
            }
        }
    }
    let star = transpose_pairing(m)?;

    let mut reps = vec![(usize::MAX, usize::MAX); r];
    for x in 0..n {
        for y in 0..n {
            let c = m.get(x, y);
            if reps[c].0 == usize::MAX {
                reps[c] = (x, y);
            }
        }
    }

    // counts[k] is sorted by (i, j)
    let counts: Vec<Vec<(usize, usize, u64)>> = reps
        .par_iter()
        .map(|&(x, y)| {
            let mut keys: Vec<(usize, usize)> =
                (0..n).map(|z| (m.get(x, z), m.get(z, y))).collect();
            keys.sort_unstable();
            let mut out: Vec<(usize, usize, u64)> = Vec::new();
            for key in keys {
                match out.last_mut() {
                    Some(last) if (last.0, last.1) == key => last.2 += 1,
                    _ => out.push((key.0, key.1, 1)),
                }
            }
            out
        })
        .collect();

    verify_coherence(m, &reps, &counts)?;

    let mut tensor = StructureTensor::with_rank(r);
    for (k, list) in counts.iter().enumerate() {
        for &(i, j, c) in list {
            tensor.add_int(i, j, k, c as i64);
        }
    }
    build_algebra(&tensor, &diagonal, Some(star), false)
}

/// Largest `r²` for which 2-path counts use a dense table per worker.
const DENSE_TALLY_LIMIT: usize = 1 << 22;

/// Counts of color pairs `(M[x][z], M[z][y])` over `z` for one pair `(x, y)`.
enum Tally {
    Dense {
        r: usize,
        cells: Vec<u64>,
        touched: Vec<usize>,
    },
    Sparse(std::collections::HashMap<(usize, usize), u64>),
}

impl Tally {
    fn new(r: usize) -> Self {
        if r * r <= DENSE_TALLY_LIMIT {
            Tally::Dense {
                r,
                cells: vec![0; r * r],
                touched: Vec::new(),
            }
        } else {
            Tally::Sparse(Default::default())
        }
    }

    fn bump(&mut self, i: usize, j: usize) {
        match self {
            Tally::Dense { r, cells, touched } => {
                let cell = i * *r + j;
                if cells[cell] == 0 {
                    touched.push(cell);
                }
                cells[cell] += 1;
            }
            Tally::Sparse(map) => *map.entry((i, j)).or_default() += 1,
        }
    }

    fn get(&self, i: usize, j: usize) -> u64 {
        match self {
            Tally::Dense { r, cells, .. } => cells[i * *r + j],
            Tally::Sparse(map) => map.get(&(i, j)).copied().unwrap_or(0),
        }
    }

    fn clear(&mut self) {
        match self {
            Tally::Dense { cells, touched, .. } => {
                for &cell in touched.iter() {
                    cells[cell] = 0;
                }
                touched.clear();
            }
            Tally::Sparse(map) => map.clear(),
        }
    }
}

/// Checks every pair against the counts of its color's representative.
///
/// Both tallies range over all `n` choices of `z`, so when every count of the
/// representative matches, no other color pair can occur.
fn verify_coherence(
    m: &RelationMatrix,
    reps: &[(usize, usize)],
    counts: &[Vec<(usize, usize, u64)>],
) -> Result<()> {
    let n = m.order();
    let r = m.rank();
    let failure = (0..n).into_par_iter().find_map_first(|x| {
        let mut tally = Tally::new(r);
        for y in 0..n {
            let k = m.get(x, y);
            for z in 0..n {
                tally.bump(m.get(x, z), m.get(z, y));
            }
            let ok = counts[k].iter().all(|&(i, j, c)| tally.get(i, j) == c);
            tally.clear();
            if !ok {
                return Some(Error::Coherence {
                    color: k,
                    first: reps[k],
                    second: (x, y),
                });
            }
        }
        None
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Recolors each relation by the index of its block in `p`.
pub fn fuse_relations(m: &RelationMatrix, p: &Partition) -> Result<RelationMatrix> {
    if p.rank() != m.rank() {
        return Err(Error::RankMismatch {
            left: m.rank(),
            right: p.rank(),
        });
    }
    let labels = p.labels();
    let entries = m
        .entries
        .iter()
        .map(|&c| labels[c as usize] as u32)
        .collect();
    RelationMatrix::from_entries(m.order(), entries)
}
