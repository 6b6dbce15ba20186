//! Dense square matrices over the rationals.

use std::fmt;
use std::ops::Mul;

use num_traits::{One, Zero};

use crate::Rational;

/// A dense `n × n` matrix of exact rationals, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    n: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zero(n: usize) -> Self {
        RatMatrix {
            n,
            data: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows; panics if the rows are not square.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix rows must be square");
            data.extend(row);
        }
        RatMatrix { n, data }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| Rational::from_integer(v.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.n + col]
    }

    pub fn get_mut(&mut self, row: usize, col: usize) -> &mut Rational {
        &mut self.data[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.data[row * self.n..(row + 1) * self.n]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale_add_identity(&mut self, c: &Rational) {
        for i in 0..self.n {
            self.data[i * self.n + i] += c;
        }
    }

    /// Evaluates a polynomial, given by ascending rational coefficients, at this matrix.
    pub fn eval_poly(&self, coeffs: &[Rational]) -> RatMatrix {
        let mut acc = RatMatrix::zero(self.n);
        for c in coeffs.iter().rev() {
            acc = &acc * self;
            acc.scale_add_identity(c);
        }
        acc
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;

    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = RatMatrix::zero(n);
        for i in 0..n {
            for t in 0..n {
                let a = &self.data[i * n + t];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.data[t * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix({})", self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
