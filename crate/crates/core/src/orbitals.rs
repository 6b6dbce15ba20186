//! Permutation groups, small abstract groups, and their orbital configurations.
//!
//! Group files list generators as 0-based image lists:
//!
//! ```text
//! degree 5
//! gen 1 2 3 4 0
//! ```
//!
//! Abstract groups are either semidirect products `Z_m² ⋊ Z_k`, where the
//! generator of `Z_k` acts on `Z_m²` by a 2×2 matrix, or explicit
//! multiplication tables. In the semidirect encoding `((a,b),c)` is stored at
//! index `(a·m + b)·k + c` and
//! `((a,b),c)·((a',b'),c') = ((a,b) + M^c (a',b'), c + c')`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::scheme::RelationMatrix;

/// A permutation group given by generators on `{0..degree-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Vec<usize>>,
}

fn check_permutation(degree: usize, images: &[usize]) -> Result<()> {
    if images.len() != degree {
        return Err(Error::InvalidPermutation(format!(
            "{} images for degree {degree}",
            images.len()
        )));
    }
    let mut seen = vec![false; degree];
    for &p in images {
        if p >= degree || seen[p] {
            return Err(Error::InvalidPermutation(format!(
                "image {p} out of range or repeated"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Vec<usize>>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidPermutation("degree 0".into()));
        }
        for g in &generators {
            check_permutation(degree, g)?;
        }
        Ok(PermGroup { degree, generators })
    }

    /// The trivial group on `degree` points.
    pub fn trivial(degree: usize) -> Result<Self> {
        Self::new(degree, Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    /// Orbit of `point` under the generated group.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut orbit = vec![point];
        let mut next = 0;
        while next < orbit.len() {
            let p = orbit[next];
            next += 1;
            for g in &self.generators {
                if !seen[g[p]] {
                    seen[g[p]] = true;
                    orbit.push(g[p]);
                }
            }
        }
        orbit.sort_unstable();
        orbit
    }

    /// Orbits on points, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut done = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if !done[p] {
                let orbit = self.orbit(p);
                orbit.iter().for_each(|&q| done[q] = true);
                out.push(orbit);
            }
        }
        out
    }

    /// Writes the group in the group-file format.
    pub fn to_text(&self) -> String {
        let mut out = format!("degree {}\n", self.degree);
        for g in &self.generators {
            let images: Vec<String> = g.iter().map(|p| p.to_string()).collect();
            out.push_str(&format!("gen {}\n", images.join(" ")));
        }
        out
    }
}

/// Reads a group file: `degree <n>` followed by `gen <images>` lines.
pub fn parse_group_file(text: &str) -> Result<PermGroup> {
    let mut degree = None;
    let mut generators = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let parse_num = |t: &str| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("non-integer token `{t}`"),
            })
        };
        match words.next() {
            Some("degree") => {
                let value = words.next().ok_or(Error::Parse {
                    line,
                    message: "missing degree".into(),
                })?;
                degree = Some(parse_num(value)?);
            }
            Some("gen") => {
                let d = degree.ok_or(Error::Parse {
                    line,
                    message: "generator before degree line".into(),
                })?;
                let images = words.map(parse_num).collect::<Result<Vec<_>>>()?;
                check_permutation(d, &images).map_err(|e| Error::Parse {
                    line,
                    message: e.to_string(),
                })?;
                generators.push(images);
            }
            Some(other) => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown keyword `{other}`"),
                })
            }
            None => unreachable!(),
        }
    }
    let degree = degree.ok_or(Error::Parse {
        line: 1,
        message: "missing degree line".into(),
    })?;
    PermGroup::new(degree, generators)
}

/// Parameters of `Z_m² ⋊ Z_k` with action matrix `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SemidirectData {
    pub m: usize,
    pub k: usize,
    pub matrix: [[usize; 2]; 2],
}

/// Order in which the letters of a word are multiplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordOrder {
    /// `z^2 x` means `z·z·x`.
    LeftToRight,
    /// `z^2 x` means `x·z·z`.
    RightToLeft,
}

/// A finite group stored by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inverses: Vec<usize>,
    generators: Vec<usize>,
    semidirect: Option<SemidirectData>,
}

fn mat_mul(a: [[usize; 2]; 2], b: [[usize; 2]; 2], m: usize) -> [[usize; 2]; 2] {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]) % m;
        }
    }
    c
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `Z_m² ⋊ Z_k` where the generator of `Z_k` acts by `matrix` (mod `m`).
///
/// Named elements: `x = ((1,0),0)`, `y = ((0,1),0)`, `z = ((0,0),1)`.
pub fn semidirect_group(m: usize, k: usize, matrix: [[usize; 2]; 2]) -> Result<FiniteGroup> {
    if m == 0 || k == 0 {
        return Err(Error::InvalidGroup("m and k must be positive".into()));
    }
    let matrix = [
        [matrix[0][0] % m, matrix[0][1] % m],
        [matrix[1][0] % m, matrix[1][1] % m],
    ];
    let det = (matrix[0][0] * matrix[1][1] + m * m - (matrix[0][1] * matrix[1][0]) % m) % m;
    if m > 1 && gcd(det, m) != 1 {
        return Err(Error::InvalidGroup(format!(
            "action matrix has determinant {det}, not a unit mod {m}"
        )));
    }
    let ident = [[1 % m, 0], [0, 1 % m]];
    let mut powers = vec![ident];
    for c in 1..=k {
        powers.push(mat_mul(powers[c - 1], matrix, m));
    }
    if powers[k] != ident {
        return Err(Error::InvalidGroup(format!(
            "action matrix to the power {k} is not the identity mod {m}"
        )));
    }
    let order = m * m * k;
    let index = |a: usize, b: usize, c: usize| (a * m + b) * k + c;
    let mut table = vec![0u32; order * order];
    for a in 0..m {
        for b in 0..m {
            for c in 0..k {
                let p = powers[c];
                let left = index(a, b, c);
                for a2 in 0..m {
                    for b2 in 0..m {
                        let ta = (a + p[0][0] * a2 + p[0][1] * b2) % m;
                        let tb = (b + p[1][0] * a2 + p[1][1] * b2) % m;
                        for c2 in 0..k {
                            table[left * order + index(a2, b2, c2)] =
                                index(ta, tb, (c + c2) % k) as u32;
                        }
                    }
                }
            }
        }
    }
    let generators = vec![index(1 % m, 0, 0), index(0, 1 % m, 0), index(0, 0, 1 % k)];
    let mut group = FiniteGroup::from_parts(order, table, Some(generators))?;
    group.semidirect = Some(SemidirectData { m, k, matrix });
    Ok(group)
}

impl FiniteGroup {
    /// Group from a multiplication table `table[a][b] = a·b`; validated for
    /// closure, identity, inverses and associativity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        let mut flat = Vec::with_capacity(n * n);
        for row in &table {
            if row.len() != n {
                return Err(Error::InvalidGroup(
                    "multiplication table is not square".into(),
                ));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::InvalidGroup(format!("product {v} out of range")));
                }
                flat.push(v as u32);
            }
        }
        let group = Self::from_parts(n, flat, None)?;
        for a in 0..n {
            for b in 0..n {
                let ab = group.multiply(a, b);
                for c in 0..n {
                    if group.multiply(ab, c) != group.multiply(a, group.multiply(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "({a}·{b})·{c} differs from {a}·({b}·{c})"
                        )));
                    }
                }
            }
        }
        Ok(group)
    }

    fn from_parts(order: usize, table: Vec<u32>, generators: Option<Vec<usize>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGroup("empty group".into()));
        }
        let at = |a: usize, b: usize| table[a * order + b] as usize;
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let inverses = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| at(a, b) == identity && at(b, a) == identity)
                    .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut group = FiniteGroup {
            order,
            table,
            identity,
            inverses,
            generators: Vec::new(),
            semidirect: None,
        };
        group.generators = match generators {
            Some(g) => g,
            None => group.greedy_generators(),
        };
        Ok(group)
    }

    /// Elements added in index order whenever they are not yet generated.
    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.closure(&[]);
        for a in 0..self.order {
            if !span[a] {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// Membership mask of the subgroup generated by `gens`.
    fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut queue = vec![self.identity];
        while let Some(a) = queue.pop() {
            for &g in gens {
                let b = self.multiply(a, g);
                if !inside[b] {
                    inside[b] = true;
                    queue.push(b);
                }
            }
        }
        inside
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn semidirect_data(&self) -> Option<SemidirectData> {
        self.semidirect
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn power(&self, a: usize, e: usize) -> usize {
        (0..e).fold(self.identity, |acc, _| self.multiply(acc, a))
    }

    pub fn check_element(&self, a: usize) -> Result<()> {
        if a < self.order {
            Ok(())
        } else {
            Err(Error::NotAnElement(format!(
                "{a} is not below the group order {}",
                self.order
            )))
        }
    }

    /// Index of `((a,b),c)` in a semidirect group.
    pub fn semidirect_element(&self, a: usize, b: usize, c: usize) -> Result<usize> {
        let d = self
            .semidirect
            .ok_or_else(|| Error::NotAnElement("group has no semidirect coordinates".into()))?;
        if a >= d.m || b >= d.m || c >= d.k {
            return Err(Error::NotAnElement(format!("(({a},{b}),{c})")));
        }
        Ok((a * d.m + b) * d.k + c)
    }

    /// Coordinates `((a,b),c)` of an element of a semidirect group.
    pub fn semidirect_coordinates(&self, g: usize) -> Option<(usize, usize, usize)> {
        let d = self.semidirect?;
        (g < self.order).then(|| (g / (d.m * d.k), (g / d.k) % d.m, g % d.k))
    }

    /// Evaluates a word in `x`, `y`, `z` such as `z^2 x^3 y`; `1` or `e` is the
    /// identity. Only semidirect groups have named letters.
    pub fn evaluate_word(&self, word: &str, order: WordOrder) -> Result<usize> {
        let letter = |c: char| -> Result<usize> {
            match c {
                'x' => self.semidirect_element(1 % self.m(), 0, 0),
                'y' => self.semidirect_element(0, 1 % self.m(), 0),
                'z' => self.semidirect_element(0, 0, 1 % self.k()),
                _ => Err(Error::NotAnElement(format!("unknown letter `{c}`"))),
            }
        };
        let mut factors: Vec<usize> = Vec::new();
        let mut chars = word.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                ' ' | '*' | '·' => continue,
                '1' | 'e' => continue,
                _ => {}
            }
            let g = letter(c)?;
            let mut exp = 1usize;
            if chars.peek() == Some(&'^') {
                chars.next();
                let mut digits = String::new();
                while let Some(d) = chars.peek().copied().filter(char::is_ascii_digit) {
                    digits.push(d);
                    chars.next();
                }
                exp = digits
                    .parse()
                    .map_err(|_| Error::NotAnElement(format!("bad exponent in `{word}`")))?;
            }
            factors.extend(std::iter::repeat(g).take(exp));
        }
        if order == WordOrder::RightToLeft {
            factors.reverse();
        }
        Ok(factors
            .into_iter()
            .fold(self.identity, |acc, g| self.multiply(acc, g)))
    }

    fn m(&self) -> usize {
        self.semidirect.map_or(1, |d| d.m)
    }

    fn k(&self) -> usize {
        self.semidirect.map_or(1, |d| d.k)
    }

    /// Checks that `elements` form a subgroup and returns them sorted.
    pub fn check_subgroup(&self, elements: &[usize]) -> Result<Vec<usize>> {
        let mut h: Vec<usize> = elements.to_vec();
        h.sort_unstable();
        h.dedup();
        for &a in &h {
            self.check_element(a)?;
        }
        if h.binary_search(&self.identity).is_err() {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        for &a in &h {
            for &b in &h {
                if h.binary_search(&self.multiply(a, b)).is_err() {
                    return Err(Error::NotSubgroup(format!(
                        "product of {a} and {b} escapes"
                    )));
                }
            }
        }
        if self.order % h.len() != 0 {
            return Err(Error::NotSubgroup(format!(
                "{} does not divide {}",
                h.len(),
                self.order
            )));
        }
        Ok(h)
    }
}

/// Action of a group on itself by left multiplication.
pub fn regular_action(group: &FiniteGroup) -> PermGroup {
    let generators = group
        .generators()
        .iter()
        .map(|&g| (0..group.order()).map(|h| group.multiply(g, h)).collect())
        .collect();
    PermGroup {
        degree: group.order(),
        generators,
    }
}

/// Left-multiplication action on the left cosets `gH`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetAction {
    pub action: PermGroup,
    /// Subgroup elements, sorted.
    pub subgroup: Vec<usize>,
    /// Point of the coset `gH` for every element `g`.
    pub coset_of: Vec<usize>,
}

/// Cosets are numbered by their least element, with the coset `H` as point 0.
pub fn coset_permutation_action(group: &FiniteGroup, subgroup: &[usize]) -> Result<CosetAction> {
    let h = group.check_subgroup(subgroup)?;
    let mut coset_of = vec![usize::MAX; group.order()];
    let mut count = 0;
    let order = std::iter::once(group.identity()).chain(0..group.order());
    for g in order {
        if coset_of[g] != usize::MAX {
            continue;
        }
        for &x in &h {
            coset_of[group.multiply(g, x)] = count;
        }
        count += 1;
    }
    let mut reps = vec![usize::MAX; count];
    for (g, &c) in coset_of.iter().enumerate() {
        if reps[c] == usize::MAX {
            reps[c] = g;
        }
    }
    let generators = group
        .generators()
        .iter()
        .map(|&g| {
            reps.iter()
                .map(|&r| coset_of[group.multiply(g, r)])
                .collect()
        })
        .collect();
    Ok(CosetAction {
        action: PermGroup::new(count, generators)?,
        subgroup: h,
        coset_of,
    })
}

/// Relation matrix whose colors are the orbits on ordered pairs.
///
/// Diagonal orbits come first, ordered by least point; the remaining orbits
/// follow in order of their least pair.
pub fn orbital_configuration(group: &PermGroup) -> RelationMatrix {
    let n = group.degree();
    let mut orbit = vec![u32::MAX; n * n];
    let mut count = 0u32;
    let mut diagonal_orbit = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n * n {
        if orbit[start] != u32::MAX {
            continue;
        }
        if start / n == start % n {
            diagonal_orbit.push(count);
        }
        orbit[start] = count;
        queue.push_back(start);
        while let Some(pair) = queue.pop_front() {
            let (x, y) = (pair / n, pair % n);
            for g in group.generators() {
                let image = g[x] * n + g[y];
                if orbit[image] == u32::MAX {
                    orbit[image] = count;
                    queue.push_back(image);
                }
            }
        }
        count += 1;
    }
    let mut relabel = vec![u32::MAX; count as usize];
    for (new, &old) in diagonal_orbit.iter().enumerate() {
        relabel[old as usize] = new as u32;
    }
    let mut next = diagonal_orbit.len() as u32;
    for slot in relabel.iter_mut() {
        if *slot == u32::MAX {
            *slot = next;
            next += 1;
        }
    }
    let rows = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| relabel[orbit[x * n + y] as usize] as usize)
                .collect()
        })
        .collect();
    RelationMatrix::from_rows(rows).expect("orbit coloring uses every color")
}

/// Color of the pair `(H, gH)`, which depends only on the double coset `HgH`.
pub fn relation_of_element(action: &CosetAction, m: &RelationMatrix, g: usize) -> Result<usize> {
    let coset = *action
        .coset_of
        .get(g)
        .ok_or_else(|| Error::NotAnElement(g.to_string()))?;
    if m.order() != action.action.degree() {
        return Err(Error::DimensionMismatch {
            expected: action.action.degree(),
            found: m.order(),
        });
    }
    Ok(m.get(0, coset))
}
