//! Dense matrices over GF(p) with row reduction.

use std::fmt;

use crate::field::{FieldElement, PrimeModulus};

#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: PrimeModulus,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl FpMatrix {
    pub fn zeros(p: PrimeModulus, rows: usize, cols: usize) -> Self {
        Self {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: PrimeModulus, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Row-major residues; panics if the length is not `rows * cols`.
    pub fn from_rows(p: PrimeModulus, rows: usize, cols: usize, data: Vec<FieldElement>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        let data = data.into_iter().map(|x| x % p.value()).collect();
        Self { p, rows, cols, data }
    }

    pub fn prime(&self) -> PrimeModulus {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v % self.p.value();
    }

    /// Adds `v` into entry `(r, c)`.
    #[inline]
    pub fn accumulate(&mut self, r: usize, c: usize, v: FieldElement) {
        let i = r * self.cols + c;
        self.data[i] = self.p.add(self.data[i], v % self.p.value());
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let p = self.p;
        let mut out = Self::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = p.add(out.data[idx], p.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| p.sub(a, b)).collect();
        Self { data, ..*self }
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut base = self.clone();
        let mut acc = Self::identity(self.p, self.rows);
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

    /// Rank by Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let p = self.p;
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(rank, pivot);
            let inv = p.inv(m.get(rank, col)).expect("pivot is nonzero");
            for c in col..m.cols {
                let v = p.mul(m.get(rank, c), inv);
                m.set(rank, c, v);
            }
            for r in 0..m.rows {
                if r == rank {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = p.sub(m.get(r, c), p.mul(factor, m.get(rank, c)));
                    m.set(r, c, v);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {}x{} mod {}", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_nullity() {
        let p = PrimeModulus::new(3).unwrap();
        let m = FpMatrix::from_rows(p, 3, 3, vec![1, 2, 0, 2, 1, 0, 0, 0, 1]);
        // row 2 = 2 * row 1 mod 3
        assert_eq!(m.rank(), 2);
        assert_eq!(m.nullity(), 1);
        assert!(FpMatrix::identity(p, 4).is_invertible());
        assert_eq!(FpMatrix::zeros(p, 2, 5).nullity(), 5);
    }

    #[test]
    fn powers() {
        let p = PrimeModulus::new(3).unwrap();
        let t = FpMatrix::from_rows(p, 2, 2, vec![0, 1, 2, 1]);
        assert_eq!(t.pow(6), FpMatrix::identity(p, 2));
        assert_ne!(t.pow(3), FpMatrix::identity(p, 2));
        assert_eq!(t.pow(0), FpMatrix::identity(p, 2));
    }
}
