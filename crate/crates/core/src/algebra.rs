//! Based algebras given by structure constants.
//!
//! A based algebra of rank `r` has a distinguished basis `b_0, …, b_{r-1}` and
//! multiplication `b_i b_j = Σ_k λ_{ijk} b_k`. The identity element is the sum of
//! the basis elements indexed by the *identity support*: `{0}` for table algebras
//! and association schemes, the set of fibers for a coherent configuration. An
//! optional involution `*` permutes the basis.
//!
//! The tensor text format is line based:
//!
//! ```text
//! basedalgebra 2
//! identity 0
//! star 0 1
//! L 0 0 0 1
//! L 0 1 1 1
//! L 1 0 1 1
//! L 1 1 0 1
//! ```
//!
//! `identity` defaults to `0`, `star` is optional, and every nonzero constant
//! is one `L i j k value` line with `value` an integer or a fraction `p/q`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::Rational;

/// Sparse structure tensor `(i, j, k) ↦ λ_{ijk}`; zero entries are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StructureTensor {
    rank: Option<usize>,
    entries: BTreeMap<(usize, usize, usize), Rational>,
}

impl StructureTensor {
    pub fn new() -> Self {
        Self::default()
    }

    /// A tensor whose rank is fixed rather than deduced from the largest index.
    pub fn with_rank(rank: usize) -> Self {
        StructureTensor {
            rank: Some(rank),
            entries: BTreeMap::new(),
        }
    }

    /// Adds `value` to `λ_{ijk}`.
    pub fn add(&mut self, i: usize, j: usize, k: usize, value: Rational) {
        if value.is_zero() {
            return;
        }
        let slot = self.entries.entry((i, j, k)).or_insert_with(Rational::zero);
        *slot += value;
        if slot.is_zero() {
            self.entries.remove(&(i, j, k));
        }
    }

    pub fn add_int(&mut self, i: usize, j: usize, k: usize, value: i64) {
        self.add(i, j, k, Rational::from_integer(value.into()));
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Option<&Rational> {
        self.entries.get(&(i, j, k))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Explicit rank if one was given, otherwise one more than the largest index.
    pub fn rank(&self) -> usize {
        self.rank.unwrap_or_else(|| {
            self.entries
                .keys()
                .map(|&(i, j, k)| i.max(j).max(k) + 1)
                .max()
                .unwrap_or(0)
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize, usize), &Rational)> {
        self.entries.iter().map(|(&key, v)| (key, v))
    }
}

/// Coordinates of an algebra element in the distinguished basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementVector(pub Vec<Rational>);

impl ElementVector {
    pub fn zero(rank: usize) -> Self {
        ElementVector(vec![Rational::zero(); rank])
    }

    /// The basis element `b_i`.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = Rational::one();
        v
    }

    /// The characteristic function `b_I = Σ_{i∈I} b_i`.
    pub fn indicator(rank: usize, set: &[usize]) -> Self {
        let mut v = Self::zero(rank);
        for &i in set {
            v.0[i] = Rational::one();
        }
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }
}

/// Integer copy of the tensor grouped by target index, used on hot paths.
pub(crate) type IntByTarget = Vec<Vec<(u32, u32, i128)>>;

/// A based algebra: structure constants, identity support, optional involution.
///
/// Immutable once built; every operation is a pure function of its inputs.
#[derive(Debug, Clone)]
pub struct BasedAlgebra {
    rank: usize,
    /// `products[i * rank + j]` lists `(k, λ_{ijk})` sorted by `k`.
    products: Vec<Vec<(usize, Rational)>>,
    /// `by_target[k]` lists `(i, j, λ_{ijk})` sorted by `(i, j)`.
    by_target: Vec<Vec<(u32, u32, Rational)>>,
    int_by_target: Option<IntByTarget>,
    identity: Vec<usize>,
    star: Option<Vec<usize>>,
}

impl PartialEq for BasedAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.products == other.products
            && self.identity == other.identity
            && self.star == other.star
    }
}

impl Eq for BasedAlgebra {}

/// Builds a based algebra, always checking the identity law and the involution,
/// and checking associativity exhaustively when `validate` is set.
pub fn build_algebra(
    tensor: &StructureTensor,
    identity_support: &[usize],
    star: Option<Vec<usize>>,
    validate: bool,
) -> Result<BasedAlgebra> {
    let mut rank = tensor.rank();
    if tensor.rank.is_none() {
        rank = rank
            .max(identity_support.iter().map(|&e| e + 1).max().unwrap_or(0))
            .max(star.as_ref().map_or(0, Vec::len));
    }
    let algebra = BasedAlgebra::from_parts(rank, tensor, identity_support, star)?;
    if validate {
        algebra.check_associativity()?;
    }
    Ok(algebra)
}

impl BasedAlgebra {
    fn from_parts(
        rank: usize,
        tensor: &StructureTensor,
        identity_support: &[usize],
        star: Option<Vec<usize>>,
    ) -> Result<Self> {
        let mut products = vec![Vec::new(); rank * rank];
        let mut by_target = vec![Vec::new(); rank];
        for ((i, j, k), v) in tensor.iter() {
            for idx in [i, j, k] {
                if idx >= rank {
                    return Err(Error::IndexOutOfRange { index: idx, rank });
                }
            }
            products[i * rank + j].push((k, v.clone()));
            by_target[k].push((i as u32, j as u32, v.clone()));
        }
        for list in &mut by_target {
            list.sort_by_key(|&(i, j, _)| (i, j));
        }
        let mut identity = identity_support.to_vec();
        identity.sort_unstable();
        identity.dedup();
        if identity.is_empty() {
            return Err(Error::EmptyIdentity);
        }
        if let Some(&e) = identity.iter().find(|&&e| e >= rank) {
            return Err(Error::IndexOutOfRange { index: e, rank });
        }
        let int_by_target = integer_view(&by_target);
        let algebra = BasedAlgebra {
            rank,
            products,
            by_target,
            int_by_target,
            identity,
            star: None,
        };
        algebra.check_identity_law()?;
        match star {
            Some(s) => algebra.with_star(s),
            None => Ok(algebra),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn identity_support(&self) -> &[usize] {
        &self.identity
    }

    pub fn is_identity_index(&self, i: usize) -> bool {
        self.identity.binary_search(&i).is_ok()
    }

    pub fn star(&self) -> Option<&[usize]> {
        self.star.as_deref()
    }

    /// Returns a copy carrying `star` as its involution after checking it.
    pub fn with_star(mut self, star: Vec<usize>) -> Result<Self> {
        check_star(&star, self.rank, &self.identity)?;
        self.star = Some(star);
        Ok(self)
    }

    pub fn without_star(mut self) -> Self {
        self.star = None;
        self
    }

    /// `λ_{ijk}`, or `None` when it is zero.
    pub fn lambda(&self, i: usize, j: usize, k: usize) -> Option<&Rational> {
        let list = &self.products[i * self.rank + j];
        list.binary_search_by_key(&k, |&(kk, _)| kk)
            .ok()
            .map(|pos| &list[pos].1)
    }

    /// `λ_{ijk}` as an owned value (zero when absent).
    pub fn lambda_value(&self, i: usize, j: usize, k: usize) -> Rational {
        self.lambda(i, j, k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Expansion of `b_i b_j` as `(k, λ_{ijk})` pairs sorted by `k`.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.products[i * self.rank + j]
    }

    /// All `(i, j, λ_{ijk})` with nonzero `λ_{ijk}` for a fixed target `k`.
    pub fn by_target(&self, k: usize) -> &[(u32, u32, Rational)] {
        &self.by_target[k]
    }

    pub(crate) fn int_by_target(&self) -> Option<&IntByTarget> {
        self.int_by_target.as_ref()
    }

    pub(crate) fn rational_by_target(&self) -> &[Vec<(u32, u32, Rational)>] {
        &self.by_target
    }

    /// Number of nonzero structure constants.
    pub fn nonzeros(&self) -> usize {
        self.by_target.iter().map(Vec::len).sum()
    }

    /// True when every structure constant is an integer.
    pub fn is_integral(&self) -> bool {
        self.by_target
            .iter()
            .flatten()
            .all(|(_, _, v)| v.is_integer())
    }

    pub fn tensor(&self) -> StructureTensor {
        let mut t = StructureTensor::with_rank(self.rank);
        for (k, list) in self.by_target.iter().enumerate() {
            for (i, j, v) in list {
                t.add(*i as usize, *j as usize, k, v.clone());
            }
        }
        t
    }

    /// Product of two elements.
    pub fn multiply(&self, u: &ElementVector, v: &ElementVector) -> Result<ElementVector> {
        self.check_len(u)?;
        self.check_len(v)?;
        let mut out = ElementVector::zero(self.rank);
        for (i, ui) in u.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, vj) in v.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let uv = ui * vj;
                for (k, lam) in self.product(i, j) {
                    out.0[*k] += &uv * lam;
                }
            }
        }
        Ok(out)
    }

    fn check_len(&self, v: &ElementVector) -> Result<()> {
        if v.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: v.len(),
            });
        }
        Ok(())
    }

    fn check_identity_law(&self) -> Result<()> {
        let r = self.rank;
        for j in 0..r {
            let mut left: BTreeMap<usize, Rational> = BTreeMap::new();
            let mut right: BTreeMap<usize, Rational> = BTreeMap::new();
            for &e in &self.identity {
                for (k, v) in self.product(e, j) {
                    *left.entry(*k).or_insert_with(Rational::zero) += v;
                }
                for (k, v) in self.product(j, e) {
                    *right.entry(*k).or_insert_with(Rational::zero) += v;
                }
            }
            for (side, sums) in [("left", left), ("right", right)] {
                for k in 0..r {
                    let value = sums.get(&k).cloned().unwrap_or_else(Rational::zero);
                    let expected = if k == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    };
                    if value != expected {
                        return Err(Error::IdentityLaw {
                            side,
                            row: j,
                            col: k,
                            value: value.to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Exhaustive associativity check, parallel over the first factor.
    pub fn check_associativity(&self) -> Result<()> {
        let r = self.rank;
        let failure = (0..r).into_par_iter().find_map_any(|i| {
            let mut lhs: HashMap<usize, Rational> = HashMap::new();
            let mut rhs: HashMap<usize, Rational> = HashMap::new();
            for j in 0..r {
                for k in 0..r {
                    lhs.clear();
                    rhs.clear();
                    // (b_i b_j) b_k
                    for (t, a) in self.product(i, j) {
                        for (m, b) in self.product(*t, k) {
                            *lhs.entry(*m).or_insert_with(Rational::zero) += a * b;
                        }
                    }
                    // b_i (b_j b_k)
                    for (t, a) in self.product(j, k) {
                        for (m, b) in self.product(i, *t) {
                            *rhs.entry(*m).or_insert_with(Rational::zero) += a * b;
                        }
                    }
                    lhs.retain(|_, v| !v.is_zero());
                    rhs.retain(|_, v| !v.is_zero());
                    if lhs != rhs {
                        let m = lhs
                            .iter()
                            .find(|(m, v)| rhs.get(m) != Some(v))
                            .map(|(m, _)| *m)
                            .or_else(|| rhs.keys().find(|m| !lhs.contains_key(m)).copied())
                            .unwrap_or(0);
                        return Some(Error::Associativity { i, j, k, m });
                    }
                }
            }
            None
        });
        match failure {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

fn integer_view(by_target: &[Vec<(u32, u32, Rational)>]) -> Option<IntByTarget> {
    by_target
        .iter()
        .map(|list| {
            list.iter()
                .map(|(i, j, v)| {
                    if !v.is_integer() {
                        return None;
                    }
                    let small = v.to_integer().to_i64()?;
                    // keep headroom for signature sums
                    if small.abs() > (1 << 40) {
                        return None;
                    }
                    Some((*i, *j, small as i128))
                })
                .collect::<Option<Vec<_>>>()
        })
        .collect()
}

fn check_star(star: &[usize], rank: usize, identity: &[usize]) -> Result<()> {
    if star.len() != rank {
        return Err(Error::DimensionMismatch {
            expected: rank,
            found: star.len(),
        });
    }
    for (i, &s) in star.iter().enumerate() {
        if s >= rank {
            return Err(Error::IndexOutOfRange { index: s, rank });
        }
        if star[s] != i {
            return Err(Error::StarNotInvolution(i));
        }
    }
    for &e in identity {
        if identity.binary_search(&star[e]).is_err() {
            return Err(Error::StarMovesIdentity(e));
        }
    }
    Ok(())
}

/// Matrix of left multiplication by `Σ v_i b_i`: `L[k][j] = Σ_i v_i λ_{ijk}`.
pub fn left_regular_matrix(algebra: &BasedAlgebra, v: &ElementVector) -> Result<RatMatrix> {
    algebra.check_len(v)?;
    let r = algebra.rank();
    let mut m = RatMatrix::zero(r);
    for (i, vi) in v.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for j in 0..r {
            for (k, lam) in algebra.product(i, j) {
                *m.get_mut(*k, j) += vi * lam;
            }
        }
    }
    Ok(m)
}

/// `Σ_{e∈E} λ_{i, i*, e}`; the valency `n_i` for an association scheme.
pub fn valency(algebra: &BasedAlgebra, i: usize) -> Result<Rational> {
    let star = algebra.star().ok_or(Error::StarAbsent)?;
    if i >= algebra.rank() {
        return Err(Error::IndexOutOfRange {
            index: i,
            rank: algebra.rank(),
        });
    }
    let mut total = Rational::zero();
    for &e in algebra.identity_support() {
        if let Some(v) = algebra.lambda(i, star[i], e) {
            total += v;
        }
    }
    Ok(total)
}

/// Recovers the involution of a scheme-type algebra: `i ↦ j` for the unique `j`
/// whose product with `b_i` meets the identity.
pub fn detect_star(algebra: &BasedAlgebra) -> Result<Vec<usize>> {
    let r = algebra.rank();
    let mut sums: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for &e in algebra.identity_support() {
        for (i, j, v) in algebra.by_target(e) {
            *sums
                .entry((*i as usize, *j as usize))
                .or_insert_with(Rational::zero) += v;
        }
    }
    let mut star: Vec<Option<usize>> = vec![None; r];
    for ((i, j), v) in sums {
        if v.is_zero() {
            continue;
        }
        if let Some(prev) = star[i] {
            return Err(Error::NotSchemeType {
                index: i,
                reason: format!("b{i} pairs with both b{prev} and b{j}"),
            });
        }
        star[i] = Some(j);
    }
    let star = star
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            s.ok_or_else(|| Error::NotSchemeType {
                index: i,
                reason: format!("no basis element pairs with b{i}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    check_star(&star, r, algebra.identity_support()).map_err(|e| match e {
        Error::StarNotInvolution(i) => Error::NotSchemeType {
            index: i,
            reason: "pairing is not involutive".into(),
        },
        Error::StarMovesIdentity(i) => Error::NotSchemeType {
            index: i,
            reason: "pairing moves an identity index".into(),
        },
        other => other,
    })?;
    Ok(star)
}

/// Sets the detected involution on the algebra.
pub fn with_detected_star(algebra: BasedAlgebra) -> Result<BasedAlgebra> {
    let star = detect_star(&algebra)?;
    algebra.with_star(star)
}

fn parse_rational(token: &str, line: usize) -> Result<Rational> {
    let err = || Error::Parse {
        line,
        message: format!("bad number `{token}`"),
    };
    match token.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| err())?;
            let q: BigInt = q.parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(token.parse().map_err(|_| err())?)),
    }
}

fn parse_index(token: &str, line: usize) -> Result<usize> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("bad index `{token}`"),
    })
}

/// Parses the tensor text format; the result is not checked for associativity.
pub fn parse_tensor_text(text: &str, validate: bool) -> Result<BasedAlgebra> {
    let mut rank = None;
    let mut identity = vec![0];
    let mut star = None;
    let mut tensor = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let head = tokens.next().unwrap_or("");
        let rest: Vec<&str> = tokens.collect();
        match head {
            "basedalgebra" => {
                if rank.is_some() || rest.len() != 1 {
                    return Err(Error::Parse {
                        line,
                        message: "expected a single `basedalgebra <rank>` header".into(),
                    });
                }
                let r = parse_index(rest[0], line)?;
                rank = Some(r);
                tensor = Some(StructureTensor::with_rank(r));
            }
            "identity" | "star" | "L" if rank.is_none() => {
                return Err(Error::Parse {
                    line,
                    message: "missing `basedalgebra <rank>` header".into(),
                })
            }
            "identity" => {
                identity = rest
                    .iter()
                    .map(|t| parse_index(t, line))
                    .collect::<Result<_>>()?
            }
            "star" => {
                star = Some(
                    rest.iter()
                        .map(|t| parse_index(t, line))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            "L" => {
                if rest.len() != 4 {
                    return Err(Error::Parse {
                        line,
                        message: "expected `L i j k value`".into(),
                    });
                }
                let r = rank.unwrap_or(0);
                let (i, j, k) = (
                    parse_index(rest[0], line)?,
                    parse_index(rest[1], line)?,
                    parse_index(rest[2], line)?,
                );
                if let Some(&bad) = [i, j, k].iter().find(|&&x| x >= r) {
                    return Err(Error::IndexOutOfRange {
                        index: bad,
                        rank: r,
                    });
                }
                let t = tensor.as_mut().expect("header seen");
                if t.get(i, j, k).is_some() {
                    return Err(Error::Parse {
                        line,
                        message: format!("duplicate entry for ({i}, {j}, {k})"),
                    });
                }
                t.add(i, j, k, parse_rational(rest[3], line)?);
            }
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown directive `{other}`"),
                })
            }
        }
    }
    let tensor = tensor.ok_or(Error::Parse {
        line: 0,
        message: "missing `basedalgebra <rank>` header".into(),
    })?;
    build_algebra(&tensor, &identity, star, validate)
}

/// Canonical tensor text: header, identity, optional star, entries in `(i, j, k)` order.
pub fn emit_tensor_text(algebra: &BasedAlgebra) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "basedalgebra {}", algebra.rank());
    let ids: Vec<String> = algebra
        .identity_support()
        .iter()
        .map(|e| e.to_string())
        .collect();
    let _ = writeln!(out, "identity {}", ids.join(" "));
    if let Some(star) = algebra.star() {
        let s: Vec<String> = star.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "star {}", s.join(" "));
    }
    for ((i, j, k), v) in algebra.tensor().iter() {
        let _ = writeln!(out, "L {i} {j} {k} {v}");
    }
    out
}
