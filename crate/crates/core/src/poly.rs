//! Univariate polynomials over GF(p).
//!
//! Coefficients are stored low-degree-first with no trailing zeros, so the
//! zero polynomial is the empty vector. Factorization follows the usual
//! squarefree → distinct-degree → equal-degree pipeline.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{ExtField, FieldElement, FieldError, PrimeModulus};
use crate::periods::prime_factors;

/// Seed used by [`factor_seeded`] callers that do not pick their own.
pub const DEFAULT_FACTOR_SEED: u64 = 0x05ee_d0ff_1e1d;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,
    #[error("the polynomial t has the zero root, which has no multiplicative order")]
    ZeroRoot,
    #[error("{0} is not irreducible")]
    NotIrreducible(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    p: PrimeModulus,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn zero(p: PrimeModulus) -> Self {
        Self { p, coeffs: Vec::new() }
    }

    pub fn constant(p: PrimeModulus, c: FieldElement) -> Self {
        Self::from_coeffs(p, vec![c % p.value()])
    }

    pub fn one(p: PrimeModulus) -> Self {
        Self::constant(p, 1)
    }

    /// The indeterminate `t`.
    pub fn x(p: PrimeModulus) -> Self {
        Self::monomial(p, 1, 1)
    }

    pub fn monomial(p: PrimeModulus, c: FieldElement, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c % p.value();
        Self::from_coeffs(p, coeffs)
    }

    /// From residues, low-degree-first. Values are reduced and trailing zeros trimmed.
    pub fn from_coeffs(p: PrimeModulus, mut coeffs: Vec<FieldElement>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p.value();
        }
        let mut poly = Self { p, coeffs };
        poly.trim();
        poly
    }

    pub fn from_ints(p: PrimeModulus, coeffs: &[i64]) -> Self {
        Self::from_coeffs(p, coeffs.iter().map(|&c| p.reduce(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// `None` stands for the degree −∞ of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.p.inv(self.leading()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| p.add(self.coeff(i), other.coeff(i))).collect();
        Self::from_coeffs(p, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| p.sub(self.coeff(i), other.coeff(i))).collect();
        Self::from_coeffs(p, coeffs)
    }

    pub fn neg(&self) -> Self {
        let p = self.p;
        Self::from_coeffs(p, self.coeffs.iter().map(|&c| p.neg(c)).collect())
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        let p = self.p;
        Self::from_coeffs(p, self.coeffs.iter().map(|&a| p.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = p.add(out[i + j], p.mul(a, b));
            }
        }
        Self::from_coeffs(p, out)
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { p: self.p, coeffs }
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = p.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = p.mul(rem[k + dd], lead_inv);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = p.sub(rem[k + j], p.mul(c, d));
            }
        }
        rem.truncate(dd);
        (Self::from_coeffs(p, quot), Self::from_coeffs(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Quotient of a division known to be exact.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact division of {self} by {divisor}");
        q
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self^exp mod m`.
    pub fn pow_mod(&self, mut exp: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p).rem(m);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| p.mul(c, i as u64 % p.value()))
            .collect();
        Self::from_coeffs(p, coeffs)
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let p = self.p;
        self.coeffs.iter().rev().fold(0, |acc, &c| p.add(p.mul(acc, x), c))
    }

    /// Splits off the largest power of `t`: returns `(s, q)` with `self = t^s·q`.
    pub fn strip_x_power(&self) -> (usize, Self) {
        let s = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if self.is_zero() {
            return (0, self.clone());
        }
        (
            s,
            Self {
                p: self.p,
                coeffs: self.coeffs[s..].to_vec(),
            },
        )
    }

    /// Number of times `f` divides `self` (zero for zero or constant `f`).
    pub fn multiplicity(&self, f: &Self) -> usize {
        if f.is_constant() || self.is_zero() {
            return 0;
        }
        let mut count = 0;
        let mut rest = self.clone();
        loop {
            let (q, r) = rest.div_rem(f);
            if !r.is_zero() {
                return count;
            }
            count += 1;
            rest = q;
        }
    }

    /// Coefficients as signed residues, low-degree-first.
    pub fn signed_coeffs(&self) -> Vec<i64> {
        self.coeffs.iter().map(|&c| self.p.signed(c)).collect()
    }

    /// For coefficients at multiples of `p` only: the polynomial `g` with `g^p = self`.
    fn pth_root(&self) -> Self {
        let p = self.p.value() as usize;
        let coeffs = self.coeffs.iter().step_by(p).copied().collect();
        Self::from_coeffs(self.p, coeffs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self}) mod {}", self.p)
    }
}

/// Monic gcd, with `gcd(0, 0) = 0`.
fn gcd(a: &Poly, b: &Poly) -> Poly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    a.monic()
}

/// Monic greatest common divisor by Euclid's algorithm.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Result<Poly, PolyError> {
    if a.is_zero() && b.is_zero() {
        return Err(PolyError::BothZero);
    }
    Ok(gcd(a, b))
}

/// `unit · Π fᵢ^{eᵢ}` with monic irreducible, pairwise distinct `fᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElement,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self, p: PrimeModulus) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(p, self.unit), |acc, (f, e)| acc.mul(&f.pow(*e as u64)))
    }
}

/// Factors with the fixed default seed.
pub fn factor(a: &Poly) -> Result<Factorization, PolyError> {
    factor_seeded(a, DEFAULT_FACTOR_SEED)
}

pub fn factor_seeded(a: &Poly, seed: u64) -> Result<Factorization, PolyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    factor_with_rng(a, &mut rng)
}

/// Full factorization into monic irreducibles, sorted by degree then coefficients.
pub fn factor_with_rng<R: Rng + ?Sized>(a: &Poly, rng: &mut R) -> Result<Factorization, PolyError> {
    if a.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let unit = a.leading();
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(&a.monic()) {
        for (block, degree) in distinct_degree(&part) {
            for f in equal_degree(&block, degree, rng) {
                factors.push((f, mult));
            }
        }
    }
    factors.sort_by(|(f, _), (g, _)| f.degree().cmp(&g.degree()).then_with(|| f.coeffs.cmp(&g.coeffs)));
    Ok(Factorization { unit, factors })
}

/// Pairwise coprime squarefree parts with multiplicities, for monic input.
fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    let p = f.modulus();
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let df = f.derivative();
    if df.is_zero() {
        for (g, m) in squarefree_decomposition(&f.pth_root()) {
            out.push((g, m * p.value() as usize));
        }
        return out;
    }
    let mut c = gcd(f, &df);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = gcd(&w, &c);
        let part = w.div_exact(&y);
        if !part.is_constant() {
            out.push((part, i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_constant() {
        for (g, m) in squarefree_decomposition(&c.pth_root()) {
            out.push((g, m * p.value() as usize));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of same-degree irreducibles.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let p = f.modulus();
    let x = Poly::x(p);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut i = 0;
    while let Some(deg) = rest.degree() {
        if deg < 2 * (i + 1) {
            if deg > 0 {
                out.push((rest.clone(), deg));
            }
            break;
        }
        i += 1;
        h = h.pow_mod(p.value(), &rest);
        let g = gcd(&h.sub(&x), &rest);
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, i));
        }
    }
    out
}

/// Cantor–Zassenhaus splitting of a product of distinct degree-`d` irreducibles.
fn equal_degree<R: Rng + ?Sized>(f: &Poly, d: usize, rng: &mut R) -> Vec<Poly> {
    let n = f.degree().unwrap_or(0);
    if n <= d {
        return vec![f.clone()];
    }
    let p = f.modulus();
    loop {
        let coeffs = (0..n).map(|_| rng.gen_range(0..p.value())).collect();
        let a = Poly::from_coeffs(p, coeffs);
        if a.is_constant() {
            continue;
        }
        let b = if p.value() == 2 {
            // trace map a + a^2 + ... + a^{2^{d-1}}
            let mut term = a.rem(f);
            let mut acc = term.clone();
            for _ in 1..d {
                term = term.mul(&term).rem(f);
                acc = acc.add(&term);
            }
            acc
        } else {
            // a^{(p^d - 1)/2} = (a · a^p ⋯ a^{p^{d-1}})^{(p-1)/2}
            let mut term = a.rem(f);
            let mut norm = term.clone();
            for _ in 1..d {
                term = term.pow_mod(p.value(), f);
                norm = norm.mul(&term).rem(f);
            }
            norm.pow_mod((p.value() - 1) / 2, f).sub(&Poly::one(p))
        };
        let g = gcd(&b, f);
        if let Some(gd) = g.degree() {
            if gd > 0 && gd < n {
                let mut parts = equal_degree(&g, d, rng);
                parts.extend(equal_degree(&f.div_exact(&g), d, rng));
                return parts;
            }
        }
    }
}

/// Rabin's test: `f` of degree n is irreducible iff `t^{p^n} ≡ t (mod f)` and
/// `gcd(t^{p^{n/q}} − t, f) = 1` for every prime `q | n`.
pub fn is_irreducible(f: &Poly) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let p = f.modulus();
    let x = Poly::x(p);
    let f = f.monic();
    let mut frob = vec![x.rem(&f)];
    for _ in 0..n {
        let next = frob.last().unwrap().pow_mod(p.value(), &f);
        frob.push(next);
    }
    if frob[n] != x.rem(&f) {
        return false;
    }
    prime_factors(n as u64)
        .into_iter()
        .all(|(q, _)| gcd(&frob[n / q as usize].sub(&x), &f).is_one())
}

/// Multiplicative order shared by all roots of the irreducible `f`.
pub fn root_order(f: &Poly) -> Result<u64, PolyError> {
    let f = f.monic();
    if f == Poly::x(f.modulus()) {
        return Err(PolyError::ZeroRoot);
    }
    if !is_irreducible(&f) {
        return Err(PolyError::NotIrreducible(f.to_string()));
    }
    let field = ExtField::new(f)?;
    Ok(field.mult_order(&field.root())?)
}

/// Binomial coefficient `C(n, k) mod p` for any integer `n`.
///
/// Nonnegative `n` goes through Lucas' theorem; negative `n` uses
/// `C(n, k) = (−1)^k C(k − n − 1, k)`.
pub fn hasse_binomial(n: i64, k: u64, p: PrimeModulus) -> FieldElement {
    if n < 0 {
        let m = (k as i128 - n as i128 - 1) as u64;
        let c = lucas(m, k, p);
        return if k % 2 == 1 { p.neg(c) } else { c };
    }
    lucas(n as u64, k, p)
}

fn lucas(mut n: u64, mut k: u64, p: PrimeModulus) -> FieldElement {
    let q = p.value();
    let mut acc = 1 % q;
    while k > 0 || n > 0 {
        let (nd, kd) = (n % q, k % q);
        if kd > nd {
            return 0;
        }
        acc = p.mul(acc, small_binomial(nd, kd, p));
        n /= q;
        k /= q;
    }
    acc
}

fn small_binomial(n: u64, k: u64, p: PrimeModulus) -> FieldElement {
    let (mut num, mut den) = (1, 1);
    for i in 0..k {
        num = p.mul(num, (n - i) % p.value());
        den = p.mul(den, (i + 1) % p.value());
    }
    p.mul(num, p.inv(den).expect("digits below p have invertible factorials"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn poly(p: u64, c: &[i64]) -> Poly {
        Poly::from_ints(gf(p), c)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(
            poly_gcd(&poly(3, &[-1, 0, 1]), &poly(3, &[1, 1])).unwrap(),
            poly(3, &[1, 1])
        );
        let a = poly(3, &[1, 1]).pow(2);
        let b = poly(3, &[1, 1]).mul(&poly(3, &[2, 1]));
        assert_eq!(poly_gcd(&a, &b).unwrap(), poly(3, &[1, 1]));
        assert!(poly_gcd(&poly(3, &[1, 0, 1]), &poly(3, &[1, 0, 0, 0, 1]))
            .unwrap()
            .is_one());
        assert_eq!(
            poly_gcd(&Poly::zero(gf(3)), &Poly::zero(gf(3))),
            Err(PolyError::BothZero)
        );
        assert_eq!(
            poly_gcd(&Poly::zero(gf(3)), &poly(3, &[2, 2])).unwrap(),
            poly(3, &[1, 1])
        );
    }

    #[test]
    fn factor_examples() {
        let f = factor(&poly(3, &[1, -1, 1])).unwrap();
        assert_eq!(f.factors, vec![(poly(3, &[1, 1]), 2)]);
        assert_eq!(f.unit, 1);

        let nine_one = poly(3, &[1, -1, 1]).mul(&poly(3, &[1, 0, 0, -1, 0, 0, 1]));
        let f = factor(&nine_one).unwrap();
        assert_eq!(f.factors, vec![(poly(3, &[1, 1]), 8)]);

        let f = factor(&poly(3, &[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(poly(3, &[2, 1, 1]), 1), (poly(3, &[2, 2, 1]), 1)]);

        assert_eq!(factor(&Poly::zero(gf(3))), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn quartic_split_matches_brute_force() {
        // all monic quadratics over GF(3) dividing t^4 + 1
        let target = poly(3, &[1, 0, 0, 0, 1]);
        let mut found = Vec::new();
        for c0 in 0..3 {
            for c1 in 0..3 {
                let q = poly(3, &[c0, c1, 1]);
                if q.divides(&target) {
                    found.push(q);
                }
            }
        }
        assert_eq!(found, vec![poly(3, &[2, 1, 1]), poly(3, &[2, 2, 1])]);
        assert_eq!(found[0].mul(&found[1]), target);
    }

    #[test]
    fn unit_is_leading_coefficient() {
        let f = factor(&poly(3, &[2, 0, 2])).unwrap();
        assert_eq!(f.unit, 2);
        assert_eq!(f.factors, vec![(poly(3, &[1, 0, 1]), 1)]);
        assert_eq!(f.expand(gf(3)), poly(3, &[2, 0, 2]));
        assert!(factor(&poly(5, &[3])).unwrap().factors.is_empty());
    }

    #[test]
    fn inseparable_parts() {
        // (t^3 + 2)^2 (t+1) over GF(3): t^3+2 = (t+2)^3
        let f = poly(3, &[2, 0, 0, 1]).pow(2).mul(&poly(3, &[1, 1]));
        let fac = factor(&f).unwrap();
        assert_eq!(fac.factors, vec![(poly(3, &[1, 1]), 1), (poly(3, &[2, 1]), 6)]);
        let g = poly(2, &[1, 1, 1]).pow(4).mul(&poly(2, &[0, 1]).pow(3));
        let fac = factor(&g).unwrap();
        assert_eq!(fac.factors, vec![(poly(2, &[0, 1]), 3), (poly(2, &[1, 1, 1]), 4)]);
    }

    #[test]
    fn root_orders() {
        assert_eq!(root_order(&poly(3, &[1, 1])).unwrap(), 2);
        assert_eq!(root_order(&poly(3, &[1, 0, 1])).unwrap(), 4);
        assert_eq!(root_order(&poly(3, &[2, 1, 1])).unwrap(), 8);
        assert_eq!(root_order(&poly(3, &[0, 1])), Err(PolyError::ZeroRoot));
        assert!(matches!(
            root_order(&poly(3, &[2, 0, 1])),
            Err(PolyError::NotIrreducible(_))
        ));
    }

    #[test]
    fn binomials() {
        let p = gf(3);
        assert_eq!(hasse_binomial(4, 1, p), 1);
        assert_eq!(hasse_binomial(3, 1, p), 0);
        assert_eq!(hasse_binomial(9, 1, p), 0);
        assert_eq!(hasse_binomial(9, 2, p), 0);
        assert_eq!(hasse_binomial(-1, 2, p), 1);
        assert_eq!(hasse_binomial(-1, 1, p), 2);
        assert_eq!(hasse_binomial(2, 5, p), 0);
        assert_eq!(hasse_binomial(7, 0, p), 1);
    }

    fn exact_binomial(n: i64, k: u64) -> i128 {
        let mut acc: i128 = 1;
        for i in 0..k as i128 {
            acc = acc * (n as i128 - i) / (i + 1);
        }
        acc
    }

    #[test]
    fn binomials_match_exact_values() {
        for &q in &[2u64, 3, 5, 7] {
            let p = gf(q);
            for n in -12..30 {
                for k in 0..10 {
                    assert_eq!(
                        hasse_binomial(n, k, p),
                        p.reduce_i128(exact_binomial(n, k)),
                        "C({n},{k}) mod {q}"
                    );
                }
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(poly(3, &[1, 2, 1]).to_string(), "t^2 + 2t + 1");
        assert_eq!(Poly::zero(gf(5)).to_string(), "0");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly() -> impl Strategy<Value = Poly> {
            (
                prop::sample::select(vec![2u64, 3, 5, 7]),
                prop::collection::vec(0u64..7, 0..9),
            )
                .prop_map(|(p, c)| Poly::from_coeffs(gf(p), c))
        }

        proptest! {
            #[test]
            fn factorization_multiplies_back(a in arb_poly(), seed in any::<u64>()) {
                prop_assume!(!a.is_zero());
                let fac = factor_seeded(&a, seed).unwrap();
                prop_assert_eq!(fac.expand(a.modulus()), a.clone());
                for (i, (f, _)) in fac.factors.iter().enumerate() {
                    prop_assert!(f.is_monic());
                    prop_assert!(is_irreducible(f));
                    for (g, _) in &fac.factors[i + 1..] {
                        prop_assert_ne!(f, g);
                    }
                }
            }

            #[test]
            fn gcd_is_greatest(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
                let p = a.modulus();
                let b = Poly::from_coeffs(p, b.coeffs().to_vec());
                let c = Poly::from_coeffs(p, c.coeffs().to_vec());
                prop_assume!(!c.is_zero());
                let (ac, bc) = (a.mul(&c), b.mul(&c));
                prop_assume!(!ac.is_zero() || !bc.is_zero());
                let g = poly_gcd(&ac, &bc).unwrap();
                prop_assert!(ac.rem(&g).is_zero());
                prop_assert!(bc.rem(&g).is_zero());
                prop_assert!(g.rem(&c.monic()).is_zero());
            }

            #[test]
            fn pascal(n in -40i64..40, k in 1u64..12, q in prop::sample::select(vec![2u64, 3, 5, 7])) {
                let p = gf(q);
                prop_assert_eq!(
                    p.add(hasse_binomial(n, k, p), hasse_binomial(n, k - 1, p)),
                    hasse_binomial(n + 1, k, p)
                );
            }

            #[test]
            fn root_order_divides_group_order(a in arb_poly()) {
                prop_assume!(!a.is_zero());
                let p = a.modulus().value();
                for (f, _) in factor(&a).unwrap().factors {
                    if f == Poly::x(a.modulus()) {
                        continue;
                    }
                    let d = f.degree().unwrap() as u32;
                    prop_assert_eq!((p.pow(d) - 1) % root_order(&f).unwrap(), 0);
                }
            }
        }
    }
}
