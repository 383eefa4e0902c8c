//! Prime fields GF(p) and extension fields GF(p)[t]/(f).
//!
//! Residues are stored as least nonnegative `u64` values. The prime is kept
//! below 2³¹ so every product of two residues fits in a `u64`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::periods::prime_factors;
use crate::poly::{is_irreducible, Poly};

/// A residue modulo the prime, always in `[0, p)`.
pub type FieldElement = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported bound 2^31")]
    PrimeTooLarge(u64),
    #[error("extension modulus {0} is not monic")]
    NotMonic(String),
    #[error("extension modulus {0} is not irreducible")]
    NotIrreducible(String),
    #[error("extension modulus must have degree at least 1")]
    ConstantModulus,
    #[error("the zero element has no multiplicative order")]
    ZeroElement,
    #[error("field size p^{degree} for p = {p} exceeds 2^63")]
    FieldTooLarge { p: u64, degree: usize },
}

/// The characteristic `p` of GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub const BOUND: u64 = 1 << 31;

    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= Self::BOUND {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Self(p))
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: i64) -> FieldElement {
        x.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn reduce_i128(self, x: i128) -> FieldElement {
        x.rem_euclid(self.0 as i128) as u64
    }

    #[inline]
    pub fn add(self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: FieldElement) -> FieldElement {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: FieldElement, b: FieldElement) -> FieldElement {
        a * b % self.0
    }

    pub fn pow(self, mut base: FieldElement, mut exp: u64) -> FieldElement {
        let mut acc = 1 % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue, `None` for zero.
    pub fn inv(self, a: FieldElement) -> Option<FieldElement> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.0 - 2))
        }
    }

    /// Signed representative in `(-p/2, p/2]`, used for display.
    pub fn signed(self, a: FieldElement) -> i64 {
        if a > self.0 / 2 {
            a as i64 - self.0 as i64
        } else {
            a as i64
        }
    }
}

impl TryFrom<u64> for PrimeModulus {
    type Error = FieldError;

    fn try_from(p: u64) -> Result<Self, Self::Error> {
        Self::new(p)
    }
}

impl From<PrimeModulus> for u64 {
    fn from(p: PrimeModulus) -> u64 {
        p.0
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// GF(p)[t]/(f) for a monic irreducible `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    modulus: Poly,
}

/// Residue class modulo the field's defining polynomial, canonical degree < df.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElement {
    coords: Poly,
}

impl ExtElement {
    pub fn coords(&self) -> &Poly {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    /// The residue if this element lies in the prime subfield.
    pub fn as_prime(&self) -> Option<FieldElement> {
        match self.coords.degree() {
            None => Some(0),
            Some(0) => Some(self.coords.coeff(0)),
            Some(_) => None,
        }
    }
}

impl ExtField {
    /// Builds the field in which the class of `t` is a root of `modulus`.
    pub fn new(modulus: Poly) -> Result<Self, FieldError> {
        let degree = match modulus.degree() {
            None | Some(0) => return Err(FieldError::ConstantModulus),
            Some(d) => d,
        };
        if modulus.coeff(degree) != 1 {
            return Err(FieldError::NotMonic(modulus.to_string()));
        }
        if !is_irreducible(&modulus) {
            return Err(FieldError::NotIrreducible(modulus.to_string()));
        }
        Ok(Self { modulus })
    }

    pub fn prime(&self) -> PrimeModulus {
        self.modulus.modulus()
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    /// `p^df`, checked against 2⁶³.
    pub fn size(&self) -> Result<u64, FieldError> {
        let p = self.prime().value();
        let degree = self.degree();
        let mut size: u64 = 1;
        for _ in 0..degree {
            size = size
                .checked_mul(p)
                .filter(|s| *s < 1 << 63)
                .ok_or(FieldError::FieldTooLarge { p, degree })?;
        }
        Ok(size)
    }

    pub fn element(&self, poly: &Poly) -> ExtElement {
        ExtElement {
            coords: poly.rem(&self.modulus),
        }
    }

    pub fn from_prime(&self, a: FieldElement) -> ExtElement {
        self.element(&Poly::constant(self.prime(), a))
    }

    pub fn zero(&self) -> ExtElement {
        ExtElement {
            coords: Poly::zero(self.prime()),
        }
    }

    pub fn one(&self) -> ExtElement {
        self.from_prime(1)
    }

    /// The class of `t`, a root of the defining polynomial.
    pub fn root(&self) -> ExtElement {
        self.element(&Poly::x(self.prime()))
    }

    pub fn add(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        ExtElement {
            coords: a.coords.add(&b.coords),
        }
    }

    pub fn sub(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        ExtElement {
            coords: a.coords.sub(&b.coords),
        }
    }

    pub fn mul(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        self.element(&a.coords.mul(&b.coords))
    }

    pub fn scale(&self, a: &ExtElement, c: FieldElement) -> ExtElement {
        ExtElement {
            coords: a.coords.scale(c),
        }
    }

    pub fn pow(&self, a: &ExtElement, exp: u64) -> ExtElement {
        ExtElement {
            coords: a.coords.pow_mod(exp, &self.modulus),
        }
    }

    pub fn inv(&self, a: &ExtElement) -> Result<ExtElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let size = self.size()?;
        Ok(self.pow(a, size - 2))
    }

    /// Smallest `n > 0` with `aⁿ = 1`.
    ///
    /// Starts from `p^df − 1` and strips each prime factor while the power
    /// stays trivial.
    pub fn mult_order(&self, a: &ExtElement) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let group_order = self.size()? - 1;
        let one = self.one();
        let mut order = group_order;
        for (q, _) in prime_factors(group_order) {
            while order % q == 0 && self.pow(a, order / q) == one {
                order /= q;
            }
        }
        Ok(order)
    }

    pub fn frobenius(&self, a: &ExtElement) -> ExtElement {
        self.pow(a, self.prime().value())
    }

    /// Distinct conjugates `a, a^p, a^{p²}, …` in that order.
    pub fn frobenius_orbit(&self, a: &ExtElement) -> Vec<ExtElement> {
        let mut orbit = vec![a.clone()];
        let mut next = self.frobenius(a);
        while next != *a {
            orbit.push(next.clone());
            next = self.frobenius(&next);
        }
        orbit
    }
}
