//! Integer polynomials and their factorization over the rationals.
//!
//! Factorization runs Yun's squarefree decomposition, factors each squarefree
//! part modulo a small prime (distinct-degree then equal-degree splitting),
//! lifts the modular factors with linear Hensel steps past a Mignotte bound,
//! and recombines subsets of lifted factors by trial division.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::Rational;

/// Default bound on the degree accepted by [`factor_over_rationals`].
pub const DEFAULT_DEGREE_CAP: usize = 64;

/// Univariate polynomial with integer coefficients in ascending degree order.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has no
/// coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x`
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `x^n - 1`
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::from(-1);
        c[n] = BigInt::one();
        Self::new(c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Integer polynomial proportional to a rational one, made primitive.
    pub fn from_rationals(coeffs: &[Rational]) -> Self {
        let denom = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        Self::new(
            coeffs
                .iter()
                .map(|c| c.numer() * (&denom / c.denom()))
                .collect(),
        )
        .primitive()
    }

    fn to_rationals(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .cloned()
            .map(Rational::from_integer)
            .collect()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    /// Exact quotient over the integers, or `None` when `divisor` does not
    /// divide `self` in `Z[x]`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let d = divisor.degree()?;
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return rem.iter().all(Zero::is_zero).then(Self::zero);
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for shift in (0..rem.len() - d).rev() {
            let top = &rem[shift + d];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &q * c;
            }
            quot[shift] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| Self::new(quot))
    }
}

/// Division with remainder over the rationals.
fn rational_divrem(f: &[Rational], g: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let dg = g.len() - 1;
    let mut rem = f.to_vec();
    if rem.len() <= dg {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - dg];
    for shift in (0..rem.len() - dg).rev() {
        let q = &rem[shift + dg] / &g[dg];
        if q.is_zero() {
            continue;
        }
        for (i, c) in g.iter().enumerate() {
            rem[shift + i] -= &q * c;
        }
        quot[shift] = q;
    }
    rem.truncate(dg);
    while rem.last().is_some_and(Zero::is_zero) {
        rem.pop();
    }
    (quot, rem)
}

/// True iff `g` divides `f` over the rationals.
pub fn divides(g: &Polynomial, f: &Polynomial) -> Result<bool> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_zero() {
        return Ok(true);
    }
    let (_, rem) = rational_divrem(&f.to_rationals(), &g.to_rationals());
    Ok(rem.is_empty())
}

/// Quotient `f / g` over the rationals, made primitive; `g` must divide `f`.
fn quotient(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (q, rem) = rational_divrem(&f.to_rationals(), &g.to_rationals());
    debug_assert!(rem.is_empty());
    Polynomial::from_rationals(&q)
}

/// Primitive gcd with positive leading coefficient; `gcd(0, 0) = 0`.
pub fn gcd(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (mut a, mut b) = (f.primitive(), g.primitive());
    while !b.is_zero() {
        let (_, rem) = rational_divrem(&a.to_rationals(), &b.to_rationals());
        a = b;
        b = Polynomial::from_rationals(&rem);
    }
    a.primitive()
}

/// Primitive least common multiple.
pub fn lcm(f: &Polynomial, g: &Polynomial) -> Polynomial {
    if f.is_zero() || g.is_zero() {
        return Polynomial::zero();
    }
    quotient(&f.mul(g), &gcd(f, g)).primitive()
}

/// True iff `f` has no repeated factor.
pub fn is_squarefree(f: &Polynomial) -> bool {
    gcd(f, &f.derivative()).degree() == Some(0)
}

/// Yun's algorithm: primitive squarefree `a_i` with `f ~ Π a_i^i`.
pub fn squarefree_decomposition(f: &Polynomial) -> Vec<(Polynomial, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let f = monic_rational(&f.to_rationals());
    let df = derivative_rational(&f);
    let a0 = rational_gcd(&f, &df);
    let mut b = rational_divrem(&f, &a0).0;
    let c = rational_divrem(&df, &a0).0;
    let mut d = sub_rational(&c, &derivative_rational(&b));
    let mut i = 1;
    while b.len() > 1 {
        let a = rational_gcd(&b, &d);
        if a.len() > 1 {
            out.push((Polynomial::from_rationals(&a), i));
        }
        b = rational_divrem(&b, &a).0;
        let c = rational_divrem(&d, &a).0;
        d = sub_rational(&c, &derivative_rational(&b));
        i += 1;
    }
    out
}

fn monic_rational(f: &[Rational]) -> Vec<Rational> {
    match f.last() {
        Some(lead) => f.iter().map(|c| c / lead).collect(),
        None => Vec::new(),
    }
}

/// Monic gcd over the rationals.
fn rational_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let (_, r) = rational_divrem(&a, &b);
        a = b;
        b = r;
    }
    monic_rational(&a)
}

fn derivative_rational(f: &[Rational]) -> Vec<Rational> {
    f.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
        .collect()
}

fn sub_rational(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out: Vec<Rational> = (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(Rational::zero)
                - b.get(i).cloned().unwrap_or_else(Rational::zero)
        })
        .collect();
    while out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

/// `Φ_n`, the `n`-th cyclotomic polynomial, from `Π_{d | n} (x^d - 1)^{μ(n/d)}`.
pub fn cyclotomic_polynomial(n: usize) -> Polynomial {
    assert!(n > 0, "cyclotomic polynomials are indexed from 1");
    let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    let mut numerator = Polynomial::one();
    let mut denominator = Polynomial::one();
    for &d in &divisors {
        match mobius(n / d) {
            1 => numerator = numerator.mul(&Polynomial::x_pow_minus_one(d)),
            -1 => denominator = denominator.mul(&Polynomial::x_pow_minus_one(d)),
            _ => {}
        }
    }
    numerator
        .div_exact(&denominator)
        .expect("Möbius product is a polynomial")
}

fn mobius(mut n: usize) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Euler's totient.
pub fn euler_phi(n: usize) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Discriminant of a cubic `a x^3 + b x^2 + c x + d`.
pub fn cubic_discriminant(f: &Polynomial) -> Option<BigInt> {
    if f.degree() != Some(3) {
        return None;
    }
    let (d, c, b, a) = (f.coeff(0), f.coeff(1), f.coeff(2), f.coeff(3));
    let n = |v: i64| BigInt::from(v);
    Some(
        n(18) * &a * &b * &c * &d - n(4) * b.pow(3) * &d + b.pow(2) * c.pow(2)
            - n(4) * &a * c.pow(3)
            - n(27) * a.pow(2) * d.pow(2),
    )
}

/// True iff `v` is the square of an integer.
pub fn is_perfect_square(v: &BigInt) -> bool {
    if v.is_negative() {
        return false;
    }
    let r = v.sqrt();
    &(&r * &r) == v
}

// ---------------------------------------------------------------------------
// arithmetic modulo a small prime

type ModPoly = Vec<u64>;

fn mp_trim(mut a: ModPoly) -> ModPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mp_inv(a: u64, p: u64) -> u64 {
    mp_pow_scalar(a, p - 2, p)
}

fn mp_pow_scalar(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn mp_from(f: &Polynomial, p: u64) -> ModPoly {
    let pb = BigInt::from(p);
    mp_trim(
        f.coeffs
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("reduced below p"))
            .collect(),
    )
}

fn mp_sub(a: &[u64], b: &[u64], p: u64) -> ModPoly {
    let n = a.len().max(b.len());
    mp_trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn mp_mul(a: &[u64], b: &[u64], p: u64) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + x * y) % p;
        }
    }
    mp_trim(c)
}

fn mp_divrem(a: &[u64], b: &[u64], p: u64) -> (ModPoly, ModPoly) {
    let db = b.len() - 1;
    let inv = mp_inv(b[db], p);
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (Vec::new(), mp_trim(rem));
    }
    let mut quot = vec![0u64; rem.len() - db];
    for shift in (0..rem.len() - db).rev() {
        let q = rem[shift + db] * inv % p;
        if q == 0 {
            continue;
        }
        for (i, &c) in b.iter().enumerate() {
            rem[shift + i] = (rem[shift + i] + p - q * c % p) % p;
        }
        quot[shift] = q;
    }
    rem.truncate(db);
    (mp_trim(quot), mp_trim(rem))
}

fn mp_monic(a: &[u64], p: u64) -> ModPoly {
    let Some(&lead) = a.last() else {
        return Vec::new();
    };
    let inv = mp_inv(lead, p);
    a.iter().map(|&c| c * inv % p).collect()
}

fn mp_gcd(a: &[u64], b: &[u64], p: u64) -> ModPoly {
    let (mut a, mut b) = (mp_trim(a.to_vec()), mp_trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = mp_divrem(&a, &b, p);
        a = b;
        b = r;
    }
    mp_monic(&a, p)
}

fn mp_powmod(base: &[u64], exp: &BigUint, modulus: &[u64], p: u64) -> ModPoly {
    let mut result: ModPoly = vec![1];
    let base = mp_divrem(base, modulus, p).1;
    for bit in (0..exp.bits()).rev() {
        result = mp_divrem(&mp_mul(&result, &result, p), modulus, p).1;
        if exp.bit(bit) {
            result = mp_divrem(&mp_mul(&result, &base, p), modulus, p).1;
        }
    }
    result
}

/// Monic irreducible factors of a monic squarefree `f` modulo `p` (odd).
fn factor_mod_p(f: &[u64], p: u64, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let x: ModPoly = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    // distinct-degree split
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            out.extend(equal_degree(&rest, rest.len() - 1, p, rng));
            break;
        }
        h = mp_powmod(&h, &BigUint::from(p), &rest, p);
        let g = mp_gcd(&mp_sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            out.extend(equal_degree(&g, d, p, rng));
            rest = mp_divrem(&rest, &g, p).0;
            h = mp_divrem(&h, &rest, p).1;
        }
    }
    out.sort();
    out
}

/// Cantor–Zassenhaus splitting of a product of degree-`d` factors.
fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let n = f.len() - 1;
    if n == d {
        return vec![mp_monic(f, p)];
    }
    let exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: ModPoly = mp_trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = mp_sub(&mp_powmod(&a, &exp, f, p), &[1], p);
        let g = mp_gcd(&b, f, p);
        if g.len() > 1 && g.len() < f.len() {
            let other = mp_divrem(f, &g, p).0;
            let mut parts = equal_degree(&g, d, p, rng);
            parts.extend(equal_degree(&other, d, p, rng));
            return parts;
        }
    }
}

/// `s, t` with `s a + t b = 1 (mod p)` for coprime `a`, `b`.
fn mp_bezout(a: &[u64], b: &[u64], p: u64) -> (ModPoly, ModPoly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1): (ModPoly, ModPoly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (ModPoly, ModPoly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = mp_divrem(&r0, &r1, p);
        let s = mp_sub(&s0, &mp_mul(&q, &s1, p), p);
        let t = mp_sub(&t0, &mp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = mp_inv(r0[0], p);
    (
        s0.iter().map(|c| c * inv % p).collect(),
        t0.iter().map(|c| c * inv % p).collect(),
    )
}

// ---------------------------------------------------------------------------
// Hensel lifting and recombination

fn reduce_mod(coeffs: &[BigInt], modulus: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = coeffs.iter().map(|c| c.mod_floor(modulus)).collect();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn big_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

fn to_big(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts `f = g h (mod p)` with `g` monic to `f = G H (mod p^exponent)`.
/// The leading coefficient of `H` is set to that of `f`.
fn hensel_lift(
    f: &[BigInt],
    g: &[u64],
    h: &[u64],
    p: u64,
    exponent: u32,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let (s, t) = mp_bezout(g, h, p);
    let pb = BigInt::from(p);
    let mut g_big = to_big(g);
    let mut h_big = to_big(h);
    *h_big.last_mut().expect("nonzero cofactor") = f.last().expect("nonzero").clone();
    let mut pk = pb.clone();
    for _ in 1..exponent {
        let gh = big_mul(&g_big, &h_big);
        let n = f.len().max(gh.len());
        let diff: Vec<BigInt> = (0..n)
            .map(|i| f.get(i).cloned().unwrap_or_default() - gh.get(i).cloned().unwrap_or_default())
            .collect();
        let e: ModPoly = mp_trim(
            diff.iter()
                .map(|c| {
                    debug_assert!((c % &pk).is_zero());
                    (c / &pk).mod_floor(&pb).to_u64().expect("reduced")
                })
                .collect(),
        );
        if !e.is_empty() {
            let te = mp_mul(&t, &e, p);
            let (q, r) = mp_divrem(&te, g, p);
            let hd = mp_trim({
                let se = mp_mul(&s, &e, p);
                let qh = mp_mul(&q, &mp_from(&Polynomial::new(h_big.clone()), p), p);
                let n = se.len().max(qh.len());
                (0..n)
                    .map(|i| {
                        (se.get(i).copied().unwrap_or(0) + qh.get(i).copied().unwrap_or(0)) % p
                    })
                    .collect()
            });
            for (i, c) in r.iter().enumerate() {
                g_big[i] += &pk * BigInt::from(*c);
            }
            for (i, c) in hd.iter().enumerate() {
                if i >= h_big.len() {
                    h_big.push(BigInt::zero());
                }
                h_big[i] += &pk * BigInt::from(*c);
            }
        }
        pk *= &pb;
    }
    (reduce_mod(&g_big, &pk), reduce_mod(&h_big, &pk))
}

fn symmetric(coeffs: &[BigInt], modulus: &BigInt) -> Polynomial {
    let half: BigInt = modulus / 2;
    Polynomial::new(
        coeffs
            .iter()
            .map(|c| {
                let c = c.mod_floor(modulus);
                if c > half {
                    c - modulus
                } else {
                    c
                }
            })
            .collect(),
    )
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..4000).step_by(2).filter(|&n| {
        (3..)
            .step_by(2)
            .take_while(|d| d * d <= n)
            .all(|d| n % d != 0)
    })
}

/// Irreducible factors of a primitive squarefree polynomial of positive degree.
fn factor_squarefree(f: &Polynomial) -> Vec<Polynomial> {
    let n = f.degree().expect("nonzero");
    if n == 1 {
        return vec![f.primitive()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let lc = f.leading();
    // pick, among a few good primes, the one with fewest modular factors
    let mut best: Option<(u64, Vec<ModPoly>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = mp_from(f, p);
        if fp.len() != n + 1 {
            continue;
        }
        let dfp = mp_from(&f.derivative(), p);
        if mp_gcd(&fp, &dfp, p).len() != 1 {
            continue;
        }
        let factors = factor_mod_p(&mp_monic(&fp, p), p, &mut rng);
        if factors.len() == 1 {
            return vec![f.primitive()];
        }
        if best.as_ref().map_or(true, |(_, b)| factors.len() < b.len()) {
            best = Some((p, factors));
        }
        tried += 1;
        if tried == 5 {
            break;
        }
    }
    let (p, modular) = best.expect("some prime is good for a squarefree polynomial");

    // Mignotte-style bound on coefficients of factors of lc·f
    let max_coeff = f.coeffs.iter().map(|c| c.abs()).max().expect("nonzero");
    let bound: BigInt = BigInt::from(n as u64 + 1) * max_coeff * lc.abs() * (BigInt::one() << n);
    let mut exponent = 1u32;
    let mut modulus = BigInt::from(p);
    while modulus <= &bound * 2 {
        modulus *= p;
        exponent += 1;
    }

    // lift one factor at a time against the product of the rest
    let mut lifted: Vec<Vec<BigInt>> = Vec::new();
    let mut target: Vec<BigInt> = f.coeffs.clone();
    for i in 0..modular.len() - 1 {
        let rest = modular[i + 1..].iter().fold(
            vec![lc.mod_floor(&BigInt::from(p)).to_u64().unwrap()],
            |acc, u| mp_mul(&acc, u, p),
        );
        let (g, h) = hensel_lift(&target, &modular[i], &rest, p, exponent);
        lifted.push(g);
        target = h;
    }
    // last factor made monic mod p^a
    let inv_lc = mod_inverse(&lc, &modulus);
    lifted.push(reduce_mod(
        &target.iter().map(|c| c * &inv_lc).collect::<Vec<_>>(),
        &modulus,
    ));

    // recombination
    let mut remaining = f.primitive();
    let mut pool: Vec<Vec<BigInt>> = lifted;
    let mut out = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= pool.len() {
        let lc_now = remaining.leading();
        for subset in combinations(pool.len(), size) {
            let mut prod = vec![lc_now.clone()];
            for &i in &subset {
                prod = reduce_mod(&big_mul(&prod, &pool[i]), &modulus);
            }
            let candidate = symmetric(&prod, &modulus).primitive();
            if let Some(q) = remaining.div_exact(&candidate) {
                out.push(candidate);
                remaining = q.primitive();
                let mut k = 0;
                pool.retain(|_| {
                    k += 1;
                    !subset.contains(&(k - 1))
                });
                continue 'outer;
            }
        }
        size += 1;
    }
    if remaining.degree().unwrap_or(0) > 0 {
        out.push(remaining);
    }
    out
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Factorization into primitive irreducibles with multiplicities, sorted by
/// degree then coefficients.
pub fn factor_over_rationals(f: &Polynomial) -> Result<Vec<(Polynomial, usize)>> {
    factor_over_rationals_with_cap(f, DEFAULT_DEGREE_CAP)
}

pub fn factor_over_rationals_with_cap(
    f: &Polynomial,
    cap: usize,
) -> Result<Vec<(Polynomial, usize)>> {
    let degree = f.degree().ok_or(Error::ZeroPolynomial)?;
    if degree > cap {
        return Err(Error::DegreeCap { degree, cap });
    }
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        for factor in factor_squarefree(&part) {
            out.push((factor, mult));
        }
    }
    out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then(a.0.cmp(&b.0)));
    Ok(out)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.sign() == Sign::Minus;
            let mag = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    /// Reads sums of terms `c`, `c x`, `c*x^n`, `x^n`, with `+`/`-` between them.
    fn from_str(s: &str) -> Result<Self> {
        let err = |m: String| Error::Parse {
            line: 1,
            message: m,
        };
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(err("empty polynomial".into()));
        }
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut rest = text.as_str();
        while !rest.is_empty() {
            let mut sign = BigInt::one();
            if let Some(r) = rest.strip_prefix('-') {
                sign = -sign;
                rest = r;
            } else if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            }
            let end = rest[1..].find(['+', '-']).map_or(rest.len(), |i| i + 1);
            let term = &rest[..end];
            rest = &rest[end..];
            let (coef, power) = match term.find('x') {
                None => (term, 0usize),
                Some(pos) => {
                    let coef = term[..pos].trim_end_matches('*');
                    let after = &term[pos + 1..];
                    let power = if after.is_empty() {
                        1
                    } else {
                        after
                            .strip_prefix('^')
                            .and_then(|e| e.parse().ok())
                            .ok_or_else(|| err(format!("bad exponent in `{term}`")))?
                    };
                    (coef, power)
                }
            };
            let value = if coef.is_empty() {
                if power == 0 {
                    return Err(err("empty term".into()));
                }
                BigInt::one()
            } else {
                coef.parse::<BigInt>()
                    .map_err(|_| err(format!("bad coefficient `{coef}`")))?
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigInt::zero());
            }
            coeffs[power] += sign * value;
        }
        Ok(Polynomial::new(coeffs))
    }
}
