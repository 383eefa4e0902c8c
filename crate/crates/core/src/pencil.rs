//! Smith normal form over GF(p)[t] and the nonzero Jordan spectrum of the shift.
//!
//! The Smith diagonal `d₁ | d₂ | ⋯ | d_n` is ascending; invariant
//! polynomials are reported the other way round, `i₁ = d_n` first. Each
//! irreducible factor `f ≠ t` of multiplicity `k` in some `i_j` contributes
//! a Jordan cell of size `k` to the Galois orbit of roots of `f`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::field::{ExtField, PrimeModulus};
use crate::foxcalc::MatrixPoly;
use crate::periods::r_exponent;
use crate::poly::{factor_seeded, root_order, Poly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PencilError {
    #[error("matrix is {rows}x{cols}; Smith reduction here needs a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular over GF(p)[t]")]
    SingularMatrix,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Square matrix of polynomials, row-major. Working storage for reductions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn identity(p: PrimeModulus, n: usize) -> Self {
        let mut entries = vec![Poly::zero(p); n * n];
        for i in 0..n {
            entries[i * n + i] = Poly::one(p);
        }
        Self { n, entries }
    }

    pub fn from_matrix_poly(m: &MatrixPoly) -> Result<Self, PencilError> {
        if !m.is_square() {
            return Err(PencilError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        Ok(Self {
            n: m.rows(),
            entries: m.entries().to_vec(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r * self.n + c]
    }

    fn set(&mut self, r: usize, c: usize, v: Poly) {
        self.entries[r * self.n + c] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let p = self.entries[0].modulus();
        let mut out = vec![Poly::zero(p); n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n).fold(Poly::zero(p), |acc, k| acc.add(&self.get(i, k).mul(other.get(k, j))));
            }
        }
        Self { n, entries: out }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.n {
                self.entries.swap(a * self.n + c, b * self.n + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.n {
                self.entries.swap(r * self.n + a, r * self.n + b);
            }
        }
    }

    /// row[dst] -= q · row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &Poly) {
        for c in 0..self.n {
            let v = self.get(dst, c).sub(&q.mul(self.get(src, c)));
            self.set(dst, c, v);
        }
    }

    /// col[dst] -= q · col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &Poly) {
        for r in 0..self.n {
            let v = self.get(r, dst).sub(&q.mul(self.get(r, src)));
            self.set(r, dst, v);
        }
    }

    fn scale_row(&mut self, r: usize, c: u64) {
        for j in 0..self.n {
            let v = self.get(r, j).scale(c);
            self.set(r, j, v);
        }
    }
}

/// Determinant by fraction-free (Bareiss) elimination; every division is exact.
pub fn determinant(m: &MatrixPoly) -> Result<Poly, PencilError> {
    let a = PolyMatrix::from_matrix_poly(m)?;
    let n = a.n;
    let p = m.prime();
    if n == 0 {
        return Ok(Poly::one(p));
    }
    let mut rows: Vec<Vec<Poly>> = (0..n).map(|r| (0..n).map(|c| a.get(r, c).clone()).collect()).collect();
    let mut negate = false;
    let mut prev = Poly::one(p);
    for k in 0..n {
        if rows[k][k].is_zero() {
            match (k + 1..n).find(|&r| !rows[r][k].is_zero()) {
                Some(r) => {
                    rows.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(Poly::zero(p)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = rows[k][k].mul(&rows[i][j]).sub(&rows[i][k].mul(&rows[k][j]));
                rows[i][j] = num.div_exact(&prev);
            }
        }
        prev = rows[k][k].clone();
    }
    let det = rows[n - 1][n - 1].clone();
    Ok(if negate { det.neg() } else { det })
}

/// Smith diagonal with the unimodular transforms: `u · input · v = diag(diagonal)`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Ascending: `d₁ | d₂ | ⋯ | d_n`, all monic.
    pub diagonal: Vec<Poly>,
    pub u: PolyMatrix,
    pub v: PolyMatrix,
}

/// Elementary row and column reduction over the Euclidean domain GF(p)[t].
///
/// Pivots are minimal-degree nonzero entries, ties broken in row-major order.
pub fn smith_form(m: &MatrixPoly) -> Result<SmithForm, PencilError> {
    let mut a = PolyMatrix::from_matrix_poly(m)?;
    let n = a.n;
    let p = m.prime();
    let mut u = PolyMatrix::identity(p, n);
    let mut v = PolyMatrix::identity(p, n);

    for t in 0..n {
        loop {
            let pivot = (t..n)
                .flat_map(|r| (t..n).map(move |c| (r, c)))
                .filter_map(|(r, c)| a.get(r, c).degree().map(|d| (d, r, c)))
                .min();
            let Some((_, pr, pc)) = pivot else {
                return Err(PencilError::SingularMatrix);
            };
            a.swap_rows(t, pr);
            u.swap_rows(t, pr);
            a.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let mut clean = true;
            for i in t + 1..n {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let (q, r) = a.get(i, t).div_rem(a.get(t, t));
                a.row_axpy(i, t, &q);
                u.row_axpy(i, t, &q);
                clean &= r.is_zero();
            }
            for j in t + 1..n {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let (q, r) = a.get(t, j).div_rem(a.get(t, t));
                a.col_axpy(j, t, &q);
                v.col_axpy(j, t, &q);
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            // pivot must divide the rest; otherwise fold the offending row in
            let offending = (t + 1..n).find(|&i| (t + 1..n).any(|j| !a.get(i, j).rem(a.get(t, t)).is_zero()));
            match offending {
                Some(i) => {
                    let minus_one = Poly::constant(p, p.neg(1));
                    a.row_axpy(t, i, &minus_one);
                    u.row_axpy(t, i, &minus_one);
                }
                None => break,
            }
        }
        let inv = p.inv(a.get(t, t).leading()).expect("pivot is nonzero");
        a.scale_row(t, inv);
        u.scale_row(t, inv);
    }

    let diagonal: Vec<Poly> = (0..n).map(|i| a.get(i, i).clone()).collect();
    debug_assert!(diagonal.windows(2).all(|w| w[0].divides(&w[1])));
    Ok(SmithForm { diagonal, u, v })
}

/// Invariant polynomials `i₁, i₂, …` with `i_{k+1} | i_k`, all monic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantPolynomials {
    pub i_list: Vec<Poly>,
}

impl InvariantPolynomials {
    pub fn product(&self, p: PrimeModulus) -> Poly {
        self.i_list.iter().fold(Poly::one(p), |acc, f| acc.mul(f))
    }
}

/// Invariant polynomials of a nonsingular square polynomial matrix.
pub fn smith_normal_form(m: &MatrixPoly) -> Result<InvariantPolynomials, PencilError> {
    let mut i_list = smith_form(m)?.diagonal;
    i_list.reverse();
    Ok(InvariantPolynomials { i_list })
}

/// Jordan data of one Galois orbit of nonzero roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaloisOrbitData {
    #[serde(serialize_with = "serialize_poly")]
    pub factor: Poly,
    pub order_d: u64,
    /// One entry per invariant polynomial containing the factor, descending.
    pub cell_sizes: Vec<usize>,
    pub k_max: usize,
    pub r: u32,
}

fn serialize_poly<S: serde::Serializer>(f: &Poly, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(f.coeffs())
}

impl GaloisOrbitData {
    pub fn new(factor: Poly, order_d: u64, mut cell_sizes: Vec<usize>) -> Self {
        cell_sizes.sort_unstable_by(|a, b| b.cmp(a));
        let k_max = cell_sizes.first().copied().unwrap_or(0);
        let r = r_exponent(k_max.max(1) as u64, factor.modulus());
        Self {
            factor,
            order_d,
            cell_sizes,
            k_max,
            r,
        }
    }

    pub fn degree(&self) -> usize {
        self.factor.degree().unwrap_or(0)
    }

    /// Dimension contributed to the state space: cells times conjugates.
    pub fn dimension(&self) -> usize {
        self.cell_sizes.iter().sum::<usize>() * self.degree()
    }
}

/// Nonzero-eigenvalue Jordan structure of the shift, one entry per Galois orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanSpectrum {
    pub prime: PrimeModulus,
    pub orbits: Vec<GaloisOrbitData>,
    pub total_dim: usize,
    /// Power of `t` removed from each invariant polynomial before extraction.
    pub stripped_t_exponents: Vec<usize>,
}

impl JordanSpectrum {
    pub fn from_orbits(prime: PrimeModulus, orbits: Vec<GaloisOrbitData>) -> Self {
        let total_dim = orbits.iter().map(GaloisOrbitData::dimension).sum();
        Self {
            prime,
            orbits,
            total_dim,
            stripped_t_exponents: Vec::new(),
        }
    }

    /// Every orbit carries exactly one cell, as for a companion matrix.
    pub fn is_companion_shape(&self) -> bool {
        self.orbits.iter().all(|o| o.cell_sizes.len() == 1)
    }
}

/// Cells are attached to `f`, so they are shared by its roots; this checks
/// that the roots really form one Frobenius orbit of common order `d`.
fn assert_conjugates_agree(f: &Poly, d: u64) {
    let field = ExtField::new(f.clone()).expect("irreducible factor defines a field");
    let orbit = field.frobenius_orbit(&field.root());
    assert_eq!(
        orbit.len(),
        f.degree().unwrap_or(0),
        "conjugates of {f} are not distinct"
    );
    for mu in &orbit {
        assert_eq!(field.mult_order(mu).ok(), Some(d), "conjugates of {f} differ in order");
    }
}

/// Factors each invariant polynomial and collects cells per irreducible factor.
pub fn jordan_spectrum(inv: &InvariantPolynomials, p: PrimeModulus, seed: u64) -> Result<JordanSpectrum, PencilError> {
    let x = Poly::x(p);
    let mut cells: BTreeMap<(usize, Vec<u64>), (Poly, Vec<usize>)> = BTreeMap::new();
    let mut stripped = Vec::with_capacity(inv.i_list.len());
    for i in &inv.i_list {
        let (s, rest) = i.strip_x_power();
        stripped.push(s);
        for (f, k) in factor_seeded(&rest, seed)?.factors {
            debug_assert_ne!(f, x);
            let key = (f.degree().unwrap_or(0), f.coeffs().to_vec());
            cells.entry(key).or_insert_with(|| (f, Vec::new())).1.push(k);
        }
    }
    let orbits = cells
        .into_values()
        .map(|(f, sizes)| {
            let d = root_order(&f)?;
            assert_conjugates_agree(&f, d);
            Ok(GaloisOrbitData::new(f, d, sizes))
        })
        .collect::<Result<Vec<_>, PolyError>>()?;
    let mut spec = JordanSpectrum::from_orbits(p, orbits);
    spec.stripped_t_exponents = stripped;
    Ok(spec)
}
