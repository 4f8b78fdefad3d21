//! Prime field arithmetic and dense univariate polynomials.
//!
//! Elements carry their modulus so vectors and matrices can be combined with
//! the ordinary operators. All values are kept as canonical residues in
//! `[0, p)`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported modulus (exclusive). Products of two residues fit in `u64`.
pub const MAX_MODULUS: u64 = 1 << 32;

/// The prime field GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    /// Smallest prime strictly greater than `n`.
    pub fn smallest_above(n: u64) -> Self {
        let mut p = n + 1;
        while !is_prime(p) {
            p += 1;
        }
        PrimeField { p }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary integer into the field.
    #[inline]
    pub fn elem(&self, value: u64) -> Fp {
        Fp {
            value: value % self.p,
            p: self.p,
        }
    }

    /// Reduces a signed integer into the field.
    pub fn elem_i64(&self, value: i64) -> Fp {
        let p = self.p as i64;
        self.elem(value.rem_euclid(p) as u64)
    }

    #[inline]
    pub fn zero(&self) -> Fp {
        Fp { value: 0, p: self.p }
    }

    #[inline]
    pub fn one(&self) -> Fp {
        self.elem(1)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fp {
        Fp {
            value: rng.gen_range(0..self.p),
            p: self.p,
        }
    }

    pub fn random_vec<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<Fp> {
        (0..len).map(|_| self.random(rng)).collect()
    }

    /// All field elements in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = Fp> + '_ {
        (0..self.p).map(move |v| Fp { value: v, p: self.p })
    }

    pub fn zeros(&self, len: usize) -> Vec<Fp> {
        vec![self.zero(); len]
    }

    pub fn ones(&self, len: usize) -> Vec<Fp> {
        vec![self.one(); len]
    }

    /// The vector `(1, 2, ..., n)`.
    pub fn counting(&self, n: usize) -> Vec<Fp> {
        (1..=n as u64).map(|v| self.elem(v)).collect()
    }

    pub fn vec_from(&self, values: &[u64]) -> Vec<Fp> {
        values.iter().map(|&v| self.elem(v)).collect()
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

/// An element of GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u64,
    p: u64,
}

impl Fp {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn field(self) -> PrimeField {
        PrimeField { p: self.p }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u64) -> Fp {
        let mut base = self;
        let mut acc = self.field().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base *= base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(self) -> Result<Fp> {
        if self.value == 0 {
            return Err(Error::NoInverse);
        }
        let (mut r0, mut r1) = (self.p as i64, self.value as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.field().elem_i64(s0))
    }
}

/// Inverse of `a` in its field; errors on zero.
pub fn ff_inv(a: Fp) -> Result<Fp> {
    a.inv()
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        let s = self.value + rhs.value;
        Fp {
            value: if s >= self.p { s - self.p } else { s },
            p: self.p,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        let value = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.p - rhs.value + self.value
        };
        Fp { value, p: self.p }
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        Fp {
            value: self.value * rhs.value % self.p,
            p: self.p,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        Fp {
            value: if self.value == 0 { 0 } else { self.p - self.value },
            p: self.p,
        }
    }
}

impl Div for Fp {
    type Output = Fp;
    /// Panics when dividing by zero; use [`Fp::inv`] for a fallible inverse.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inv().expect("division by zero in GF(p)")
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, rhs: Fp) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fp {
    fn sub_assign(&mut self, rhs: Fp) {
        *self = *self - rhs;
    }
}

impl MulAssign for Fp {
    fn mul_assign(&mut self, rhs: Fp) {
        *self = *self * rhs;
    }
}

/// Inner product of two equal-length vectors.
pub fn dot(a: &[Fp], b: &[Fp]) -> Result<Fp> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let first = a.first().or(b.first());
    let Some(first) = first else {
        return Err(Error::LengthMismatch {
            expected: 1,
            got: 0,
        });
    };
    Ok(a
        .iter()
        .zip(b)
        .fold(first.field().zero(), |acc, (&x, &y)| acc + x * y))
}

/// Coordinatewise (Schur) product.
pub fn hadamard(a: &[Fp], b: &[Fp]) -> Vec<Fp> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x * y).collect()
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Dense polynomial over GF(p); `coeffs[j]` multiplies `x^j`, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: PrimeField,
    coeffs: Vec<Fp>,
}

impl Poly {
    pub fn new(field: PrimeField, coeffs: Vec<Fp>) -> Self {
        let mut p = Poly { field, coeffs };
        p.trim();
        p
    }

    pub fn from_values(field: PrimeField, values: &[u64]) -> Self {
        Poly::new(field, field.vec_from(values))
    }

    pub fn zero(field: PrimeField) -> Self {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: Fp) -> Self {
        Poly::new(c.field(), vec![c])
    }

    /// `x - a`
    pub fn linear_root(a: Fp) -> Self {
        let f = a.field();
        Poly::new(f, vec![-a, f.one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[Fp] {
        &self.coeffs
    }

    /// Coefficient of `x^j` (zero past the degree).
    pub fn coeff(&self, j: usize) -> Fp {
        self.coeffs.get(j).copied().unwrap_or(self.field.zero())
    }

    /// Coefficients padded with zeros to exactly `len` entries (truncating if longer).
    pub fn padded(&self, len: usize) -> Vec<Fp> {
        (0..len).map(|j| self.coeff(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Fp) -> Fp {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, &c| acc * x + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            self.field,
            (0..len).map(|j| self.coeff(j) + other.coeff(j)).collect(),
        )
    }

    pub fn scale(&self, c: Fp) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = self.field.zeros(self.coeffs.len() + other.coeffs.len() - 1);
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(self.field, out)
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, divisor: &Poly) -> Option<(Poly, Poly)> {
        let dd = divisor.degree()?;
        let lead_inv = divisor.coeffs[dd].inv().ok()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Poly::zero(self.field), self.clone()));
        }
        let mut quot = self.field.zeros(rem.len() - dd);
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd] * lead_inv;
            quot[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
        rem.truncate(dd);
        Some((Poly::new(self.field, quot), Poly::new(self.field, rem)))
    }
}

/// Unique polynomial of degree `< points.len()` through the given points.
pub fn lagrange_interpolate(field: PrimeField, points: &[(Fp, Fp)]) -> Result<Poly> {
    if points.is_empty() {
        return Err(Error::NoPoints);
    }
    for (i, a) in points.iter().enumerate() {
        if points[..i].iter().any(|b| b.0 == a.0) {
            return Err(Error::DuplicatePoints);
        }
    }
    let mut acc = Poly::zero(field);
    for (i, &(xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = Poly::constant(field.one());
        let mut denom = field.one();
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i != j {
                basis = basis.mul(&Poly::linear_root(xj));
                denom *= xi - xj;
            }
        }
        acc = acc.add(&basis.scale(yi * denom.inv()?));
    }
    Ok(acc)
}
