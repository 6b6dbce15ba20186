//! Exact minimal polynomials of algebra elements and cyclotomicity verdicts.
//!
//! Minimal polynomials are computed in the left regular representation,
//! which is faithful, so the minimal polynomial of `v` is the first linear
//! dependency among `1, v, v², …` written in the basis. Every result is
//! checked to annihilate the regular matrix column by column.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{left_regular_matrix, BasedAlgebra, ElementVector};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::poly::{
    cubic_discriminant, cyclotomic_polynomial, euler_phi, factor_over_rationals, is_perfect_square,
    is_squarefree, Polynomial,
};
use crate::Rational;

/// A row of the Krylov echelon form: `vector = Σ combo_t · L^t 1`.
struct EchelonRow {
    pivot: usize,
    vector: Vec<Rational>,
    combo: Vec<Rational>,
}

fn sparse_rows(m: &RatMatrix) -> Vec<Vec<(usize, Rational)>> {
    (0..m.dim())
        .map(|k| {
            m.row(k)
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j, c.clone()))
                .collect()
        })
        .collect()
}

fn apply(rows: &[Vec<(usize, Rational)>], v: &[Rational]) -> Vec<Rational> {
    rows.iter()
        .map(|row| {
            row.iter()
                .filter(|(j, _)| !v[*j].is_zero())
                .fold(Rational::zero(), |acc, (j, c)| acc + c * &v[*j])
        })
        .collect()
}

/// Minimal polynomial of `Σ v_i b_i`, primitive with positive leading coefficient.
pub fn minimal_polynomial(algebra: &BasedAlgebra, v: &ElementVector) -> Result<Polynomial> {
    let l = left_regular_matrix(algebra, v)?;
    let rows = sparse_rows(&l);
    let r = algebra.rank();
    let unit = ElementVector::indicator(r, algebra.identity_support());

    let mut echelon: Vec<EchelonRow> = Vec::new();
    let mut current = unit.0.clone();
    for t in 0..=r {
        let mut vector = current.clone();
        let mut combo = vec![Rational::zero(); t + 1];
        combo[t] = Rational::one();
        for row in &echelon {
            let f = vector[row.pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (a, b) in vector.iter_mut().zip(&row.vector) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
            for (a, b) in combo.iter_mut().zip(&row.combo) {
                *a -= &f * b;
            }
        }
        match vector.iter().position(|c| !c.is_zero()) {
            None => {
                let p = Polynomial::from_rationals(&combo);
                check_annihilates(&rows, &p)?;
                return Ok(p);
            }
            Some(pivot) => {
                let inv = Rational::one() / &vector[pivot];
                vector.iter_mut().for_each(|c| *c *= &inv);
                combo.iter_mut().for_each(|c| *c *= &inv);
                // keep earlier rows reduced at the new pivot
                for row in echelon.iter_mut() {
                    let f = row.vector[pivot].clone();
                    if f.is_zero() {
                        continue;
                    }
                    for (a, b) in row.vector.iter_mut().zip(&vector) {
                        if !b.is_zero() {
                            *a -= &f * b;
                        }
                    }
                    row.combo.resize(t + 1, Rational::zero());
                    for (a, b) in row.combo.iter_mut().zip(&combo) {
                        *a -= &f * b;
                    }
                }
                echelon.push(EchelonRow {
                    pivot,
                    vector,
                    combo,
                });
            }
        }
        current = apply(&rows, &current);
    }
    unreachable!("a dependency appears within rank + 1 iterates")
}

/// Checks `p(L) e_j = 0` for every basis vector `e_j`.
fn check_annihilates(rows: &[Vec<(usize, Rational)>], p: &Polynomial) -> Result<()> {
    let r = rows.len();
    let coeffs: Vec<Rational> = p
        .coeffs()
        .iter()
        .map(|c| Rational::from_integer(c.clone()))
        .collect();
    let bad = (0..r).into_par_iter().find_first(|&j| {
        let mut w = vec![Rational::zero(); r];
        for c in coeffs.iter().rev() {
            w = apply(rows, &w);
            w[j] += c;
        }
        w.iter().any(|c| !c.is_zero())
    });
    match bad {
        None => Ok(()),
        Some(j) => Err(Error::NotAnnihilated(j)),
    }
}

/// True iff the minimal polynomial of `v` has no repeated factor.
pub fn is_diagonalizable(algebra: &BasedAlgebra, v: &ElementVector) -> Result<bool> {
    Ok(is_squarefree(&minimal_polynomial(algebra, v)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Cyclotomicity {
    Cyclotomic,
    Noncyclotomic,
    Unknown,
}

/// Whether the roots of an irreducible polynomial lie in a cyclotomic field,
/// with the rule that decided it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CyclotomicVerdict {
    pub value: Cyclotomicity,
    pub reason: String,
}

impl CyclotomicVerdict {
    fn new(value: Cyclotomicity, reason: impl Into<String>) -> Self {
        CyclotomicVerdict {
            value,
            reason: reason.into(),
        }
    }
}

/// Applies, in order: equality with some `Φ_n`; degree at most 2; the cubic
/// discriminant test; otherwise unknown. Inputs that factor over Q are rejected.
pub fn cyclotomic_verdict(f: &Polynomial) -> Result<CyclotomicVerdict> {
    let degree = f.degree().ok_or(Error::ZeroPolynomial)?;
    if degree == 0 {
        return Err(Error::Reducible(f.to_string()));
    }
    let f = f.primitive();
    // Φ_n is irreducible, so a match settles the question before factoring,
    // which keeps degrees above the factoring cap (Φ_97 has degree 96) cheap.
    // φ(n) ≥ sqrt(n / 2), so Φ_n of degree d has n ≤ 2 d².
    if degree > 2 {
        for n in 1..=2 * degree * degree {
            if euler_phi(n) == degree && cyclotomic_polynomial(n) == f {
                return Ok(CyclotomicVerdict::new(
                    Cyclotomicity::Cyclotomic,
                    format!("cyclotomic polynomial Φ_{n}"),
                ));
            }
        }
    }
    let factors = factor_over_rationals(&f)?;
    if factors.len() != 1 || factors[0].1 != 1 {
        return Err(Error::Reducible(f.to_string()));
    }
    if degree <= 2 {
        return Ok(CyclotomicVerdict::new(
            Cyclotomicity::Cyclotomic,
            "degree at most 2: every quadratic field lies in a cyclotomic field",
        ));
    }
    if degree == 3 {
        let disc = cubic_discriminant(&f).expect("cubic");
        return Ok(if is_perfect_square(&disc) {
            CyclotomicVerdict::new(
                Cyclotomicity::Cyclotomic,
                format!("cubic with square discriminant {disc}: cyclic Galois group"),
            )
        } else {
            CyclotomicVerdict::new(
                Cyclotomicity::Noncyclotomic,
                format!("cubic with non-square discriminant {disc}: Galois group S3"),
            )
        });
    }
    Ok(CyclotomicVerdict::new(
        Cyclotomicity::Unknown,
        "abelian-Galois test not implemented above degree 3",
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorReport {
    #[serde(serialize_with = "as_text")]
    pub factor: Polynomial,
    pub multiplicity: usize,
    pub verdict: CyclotomicVerdict,
}

/// Minimal polynomial, its factorization and verdicts for one element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementReport {
    /// Basis indices summed to form the element.
    pub support: Vec<usize>,
    #[serde(serialize_with = "as_text")]
    pub minimal_polynomial: Polynomial,
    pub diagonalizable: bool,
    pub factors: Vec<FactorReport>,
}

fn as_text<S: serde::Serializer>(p: &Polynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// Report for the characteristic function `b_S` of `support`.
pub fn analyze_element(algebra: &BasedAlgebra, support: &[usize]) -> Result<ElementReport> {
    for &i in support {
        if i >= algebra.rank() {
            return Err(Error::IndexOutOfRange {
                index: i,
                rank: algebra.rank(),
            });
        }
    }
    let v = ElementVector::indicator(algebra.rank(), support);
    let p = minimal_polynomial(algebra, &v)?;
    let factors = factor_over_rationals(&p)?
        .into_iter()
        .map(|(factor, multiplicity)| {
            Ok(FactorReport {
                verdict: cyclotomic_verdict(&factor)?,
                factor,
                multiplicity,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ElementReport {
        support: support.to_vec(),
        diagonalizable: factors.iter().all(|f| f.multiplicity == 1),
        minimal_polynomial: p,
        factors,
    })
}

/// Reports for every basis element, computed in parallel.
pub fn analyze_basis(algebra: &BasedAlgebra) -> Result<Vec<ElementReport>> {
    (0..algebra.rank())
        .into_par_iter()
        .map(|i| analyze_element(algebra, &[i]))
        .collect()
}
