//! Brute-force oracle for the shift on solutions of `Σ_j A^j Y_{i+j} = 0`.
//!
//! A point of period N is a cyclic solution `(Y₀, …, Y_{N−1})` with indices
//! taken mod N, so the number of points fixed by the N-th power is
//! `p^{dim}` of a block-circulant nullspace. Möbius inversion over the
//! divisor lattice turns those counts into exact-period counts.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::field::{ExtField, FieldElement, FieldError, PrimeModulus};
use crate::foxcalc::MatrixPoly;
use crate::matrix::FpMatrix;
use crate::pencil::{determinant, PencilError};
use crate::periods::{divisors, lcm, mobius, r_exponent};
use crate::poly::{hasse_binomial, root_order, Poly, PolyError};

/// Largest block-circulant system (`n·N` unknowns) the oracle will assemble.
pub const MAX_CYCLIC_UNKNOWNS: usize = 4096;

/// Cap on the state count for pointwise enumeration.
pub const MAX_ENUMERATED_STATES: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynsysError {
    #[error("recurrence matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("det(A⁰ + A¹t + ⋯) vanishes identically; the recurrence does not define a finite system")]
    SingularRecurrence,
    #[error("inconsistent census at period {period}: {reason}")]
    InconsistentCensus { period: u64, reason: String },
    #[error("oracle would need {unknowns} unknowns for period {period}, above the limit {MAX_CYCLIC_UNKNOWNS}")]
    OracleTooLarge { period: u64, unknowns: usize },
    #[error("state space has {0} points, above the enumeration cap")]
    TooManyStates(u128),
    #[error("companion matrix needs a nonzero constant term")]
    ZeroConstantTerm,
    #[error("shift matrix is not invertible")]
    SingularT,
    #[error("derivative order {s} is out of range for multiplicity {multiplicity}")]
    OrderOutOfRange { s: usize, multiplicity: usize },
    #[error("witness value at index {0} does not lie in the prime field")]
    NotInPrimeField(usize),
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `A⁰Y_j + A¹Y_{j+1} + ⋯ + A^M Y_{j+M} = 0` over GF(p).
#[derive(Debug, Clone)]
pub struct RecurrenceSystem {
    p: PrimeModulus,
    n: usize,
    coeff_matrices: Vec<FpMatrix>,
}

impl RecurrenceSystem {
    pub fn from_matrix_poly(m: &MatrixPoly) -> Result<Self, DynsysError> {
        if !m.is_square() {
            return Err(DynsysError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if determinant(m)?.is_zero() {
            return Err(DynsysError::SingularRecurrence);
        }
        Ok(Self {
            p: m.prime(),
            n: m.rows(),
            coeff_matrices: m.coefficient_matrices(),
        })
    }

    pub fn prime(&self) -> PrimeModulus {
        self.p
    }

    /// Number of unknowns per time step.
    pub fn width(&self) -> usize {
        self.n
    }

    pub fn coeff_matrices(&self) -> &[FpMatrix] {
        &self.coeff_matrices
    }

    /// Dimension of the space of period-N cyclic solutions.
    pub fn cyclic_nullspace_dim(&self, period: u64) -> usize {
        let big_n = period as usize;
        let n = self.n;
        let mut system = FpMatrix::zeros(self.p, n * big_n, n * big_n);
        for i in 0..big_n {
            for (j, a) in self.coeff_matrices.iter().enumerate() {
                let block = (i + j) % big_n;
                for r in 0..n {
                    for c in 0..n {
                        let v = a.get(r, c);
                        if v != 0 {
                            system.accumulate(i * n + r, block * n + c, v);
                        }
                    }
                }
            }
        }
        system.nullity()
    }
}

/// Periodic structure of the finite system: points and orbits per exact period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitCensus {
    pub prime: PrimeModulus,
    /// Dimension of the subspace of points whose period divides N.
    pub dims: BTreeMap<u64, usize>,
    /// Points of exact period N, for every divisor N of the horizon.
    pub exact_counts: BTreeMap<u64, u128>,
    /// Orbits of exact period N, nonzero entries only.
    pub orbit_counts: BTreeMap<u64, u128>,
    pub period_set: BTreeSet<u64>,
}

impl OrbitCensus {
    /// Dimension at the horizon, i.e. of the whole space when the horizon is
    /// a multiple of every period.
    pub fn top_dim(&self) -> usize {
        self.dims.values().copied().max().unwrap_or(0)
    }

    pub fn total_points(&self) -> u128 {
        self.exact_counts.values().sum()
    }
}

fn checked_pow(p: PrimeModulus, e: usize) -> Result<u128, DynsysError> {
    (p.value() as u128)
        .checked_pow(e as u32)
        .ok_or_else(|| DynsysError::InconsistentCensus {
            period: 0,
            reason: format!("{}^{e} overflows", p.value()),
        })
}

/// Möbius inversion of `p^{dims[d]}` over the divisors of the horizon.
fn census_from_dims(p: PrimeModulus, dims: BTreeMap<u64, usize>) -> Result<OrbitCensus, DynsysError> {
    let mut exact_counts = BTreeMap::new();
    let mut orbit_counts = BTreeMap::new();
    let mut period_set = BTreeSet::new();
    for &n in dims.keys() {
        let mut count: i128 = 0;
        for d in divisors(n) {
            let fixed = checked_pow(p, dims[&d])? as i128;
            count += mobius(n / d) as i128 * fixed;
        }
        if count < 0 || count % n as i128 != 0 {
            return Err(DynsysError::InconsistentCensus {
                period: n,
                reason: format!("{count} points of exact period {n}"),
            });
        }
        let count = count as u128;
        exact_counts.insert(n, count);
        if count > 0 {
            orbit_counts.insert(n, count / n as u128);
            period_set.insert(n);
        }
    }
    let census = OrbitCensus {
        prime: p,
        dims,
        exact_counts,
        orbit_counts,
        period_set,
    };
    let expected = checked_pow(p, census.top_dim())?;
    if census.total_points() != expected {
        return Err(DynsysError::InconsistentCensus {
            period: census.dims.keys().last().copied().unwrap_or(1),
            reason: format!("{} points counted, expected {expected}", census.total_points()),
        });
    }
    for (&d, &dim_d) in &census.dims {
        for (&n, &dim_n) in &census.dims {
            if n % d == 0 && dim_d > dim_n {
                return Err(DynsysError::InconsistentCensus {
                    period: n,
                    reason: format!("dimension drops from {dim_d} at {d} to {dim_n}"),
                });
            }
        }
    }
    Ok(census)
}

/// Census from block-circulant nullspaces at every divisor of `horizon`.
pub fn orbit_census(sys: &RecurrenceSystem, horizon: u64) -> Result<OrbitCensus, DynsysError> {
    let unknowns = sys.width().saturating_mul(horizon as usize);
    if unknowns > MAX_CYCLIC_UNKNOWNS {
        return Err(DynsysError::OracleTooLarge {
            period: horizon,
            unknowns,
        });
    }
    let dims = divisors(horizon)
        .into_iter()
        .map(|d| (d, sys.cyclic_nullspace_dim(d)))
        .collect();
    census_from_dims(sys.prime(), dims)
}

/// Companion matrix of `c₀ + c₁t + ⋯ + c_m t^m`: ones on the superdiagonal,
/// last row `−c₀/c_m, …, −c_{m−1}/c_m`.
pub fn companion_matrix(c: &Poly) -> Result<FpMatrix, DynsysError> {
    let p = c.modulus();
    if c.coeff(0) == 0 {
        return Err(DynsysError::ZeroConstantTerm);
    }
    let m = c.degree().unwrap_or(0);
    let lead_inv = p.inv(c.leading()).expect("nonzero polynomial");
    let mut t = FpMatrix::zeros(p, m, m);
    for i in 0..m.saturating_sub(1) {
        t.set(i, i + 1, 1);
    }
    for j in 0..m {
        t.set(m - 1, j, p.neg(p.mul(c.coeff(j), lead_inv)));
    }
    Ok(t)
}

/// Census from nullities of `T^N − E`, an independent route to the same counts.
pub fn iterate_census(t: &FpMatrix, horizon: u64) -> Result<OrbitCensus, DynsysError> {
    if !t.is_invertible() {
        return Err(DynsysError::SingularT);
    }
    let id = FpMatrix::identity(t.prime(), t.rows());
    let dims = divisors(horizon)
        .into_iter()
        .map(|d| (d, t.pow(d).sub(&id).nullity()))
        .collect();
    census_from_dims(t.prime(), dims)
}

/// Pointwise census: walks every state of `(GF(p)^m, T)` and measures its orbit.
pub fn enumerate_census(t: &FpMatrix) -> Result<OrbitCensus, DynsysError> {
    if !t.is_invertible() {
        return Err(DynsysError::SingularT);
    }
    let p = t.prime();
    let m = t.rows();
    let states = checked_pow(p, m)?;
    if states > MAX_ENUMERATED_STATES {
        return Err(DynsysError::TooManyStates(states));
    }
    let q = p.value();
    let encode = |v: &[FieldElement]| v.iter().rev().fold(0u64, |acc, &x| acc * q + x) as usize;
    let apply = |v: &[FieldElement]| -> Vec<FieldElement> {
        (0..m)
            .map(|r| (0..m).fold(0, |acc, c| p.add(acc, p.mul(t.get(r, c), v[c]))))
            .collect()
    };
    let mut period_of = vec![0u64; states as usize];
    for s in 0..states as usize {
        if period_of[s] != 0 {
            continue;
        }
        let mut v: Vec<FieldElement> = (0..m).map(|i| (s as u64 / q.pow(i as u32)) % q).collect();
        let mut orbit = vec![s];
        loop {
            v = apply(&v);
            let code = encode(&v);
            if code == s {
                break;
            }
            orbit.push(code);
        }
        let len = orbit.len() as u64;
        for code in orbit {
            period_of[code] = len;
        }
    }
    let mut exact: BTreeMap<u64, u128> = BTreeMap::new();
    for &n in &period_of {
        *exact.entry(n).or_default() += 1;
    }
    let horizon = exact.keys().copied().fold(1, lcm);
    let mut dims = BTreeMap::new();
    let mut exact_counts = BTreeMap::new();
    for d in divisors(horizon) {
        let fixed: u128 = exact.iter().filter(|(&n, _)| d % n == 0).map(|(_, &c)| c).sum();
        let mut dim = 0;
        while checked_pow(p, dim)? < fixed {
            dim += 1;
        }
        dims.insert(d, dim);
        exact_counts.insert(d, exact.get(&d).copied().unwrap_or(0));
    }
    Ok(OrbitCensus {
        prime: p,
        dims,
        orbit_counts: exact.iter().map(|(&n, &c)| (n, c / n as u128)).collect(),
        period_set: exact.keys().copied().collect(),
        exact_counts,
    })
}

/// One period of an integer sequence built from a Jordan-basis vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessSequence {
    pub values: Vec<FieldElement>,
    pub declared_period: u64,
}

impl WitnessSequence {
    pub fn minimal_period(&self) -> u64 {
        minimal_period(&self.values)
    }

    pub fn satisfies(&self, recurrence: &Poly) -> bool {
        satisfies_recurrence(&self.values, recurrence)
    }
}

/// Smallest divisor `d` of the length with `values[j] = values[j + d mod len]`.
pub fn minimal_period(values: &[FieldElement]) -> u64 {
    let len = values.len() as u64;
    if len == 0 {
        return 0;
    }
    divisors(len)
        .into_iter()
        .find(|&d| (0..values.len()).all(|j| values[j] == values[(j + d as usize) % values.len()]))
        .unwrap_or(len)
}

/// `c₀y_j + c₁y_{j+1} + ⋯ + c_m y_{j+m} = 0` for all j, indices mod the length.
pub fn satisfies_recurrence(values: &[FieldElement], c: &Poly) -> bool {
    let p = c.modulus();
    let len = values.len();
    if len == 0 {
        return true;
    }
    (0..len).all(|j| {
        c.coeffs()
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &ci)| p.add(acc, p.mul(ci, values[(j + i) % len])))
            == 0
    })
}

/// `y_j = Σ_μ C(j, s) μ^{j−s}` summed over the conjugate roots μ of `factor`.
///
/// The value is Frobenius-invariant so it lies in GF(p). Requires `s` below
/// the multiplicity of `factor` in `alexander`.
pub fn witness_sequence(alexander: &Poly, factor: &Poly, s: usize) -> Result<WitnessSequence, DynsysError> {
    let p = factor.modulus();
    let factor = factor.monic();
    let multiplicity = alexander.multiplicity(&factor);
    if s >= multiplicity {
        return Err(DynsysError::OrderOutOfRange { s, multiplicity });
    }
    let d = root_order(&factor)?;
    let declared_period = lcm(d, p.value().pow(r_exponent(s as u64 + 1, p)));
    let field = ExtField::new(factor)?;
    let conjugates = field.frobenius_orbit(&field.root());
    let values = (0..declared_period)
        .map(|j| {
            let binom = hasse_binomial(j as i64, s as u64, p);
            let exp = (j as i64 - s as i64).rem_euclid(d as i64) as u64;
            let sum = conjugates
                .iter()
                .fold(field.zero(), |acc, mu| field.add(&acc, &field.pow(mu, exp)));
            field
                .scale(&sum, binom)
                .as_prime()
                .ok_or(DynsysError::NotInPrimeField(j as usize))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WitnessSequence {
        values,
        declared_period,
    })
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

    fn scalar_system(p: u64, c: &[i64]) -> RecurrenceSystem {
        RecurrenceSystem::from_matrix_poly(&MatrixPoly::scalar(poly(p, c))).unwrap()
    }

    #[test]
    fn trefoil_cyclic_dims() {
        let sys = scalar_system(3, &[1, -1, 1]);
        assert_eq!(sys.cyclic_nullspace_dim(1), 0);
        assert_eq!(sys.cyclic_nullspace_dim(2), 1);
        assert_eq!(sys.cyclic_nullspace_dim(3), 0);
        assert_eq!(sys.cyclic_nullspace_dim(6), 2);
    }

    #[test]
    fn censuses() {
        let c = orbit_census(&scalar_system(3, &[1, -1, 1]), 6).unwrap();
        assert_eq!(c.exact_counts, BTreeMap::from([(1, 1), (2, 2), (3, 0), (6, 6)]));
        assert_eq!(c.orbit_counts, BTreeMap::from([(1, 1), (2, 1), (6, 1)]));
        assert_eq!(c.period_set, BTreeSet::from([1, 2, 6]));

        let c = orbit_census(&scalar_system(3, &[-1, 3, -1]), 4).unwrap();
        assert_eq!(c.period_set, BTreeSet::from([1, 4]));
        assert_eq!(c.orbit_counts, BTreeMap::from([(1, 1), (4, 2)]));

        let c = orbit_census(&scalar_system(3, &[1, -3, 3, -3, 1]), 8).unwrap();
        assert_eq!(c.period_set, BTreeSet::from([1, 8]));
        assert_eq!(c.exact_counts[&1], 1);
        assert_eq!(c.exact_counts[&8], 80);
    }

    #[test]
    fn singular_recurrence_rejected() {
        let m = MatrixPoly::from_entries(gf(3), 2, 2, vec![poly(3, &[1, 1]); 4]);
        assert!(matches!(
            RecurrenceSystem::from_matrix_poly(&m),
            Err(DynsysError::SingularRecurrence)
        ));
    }

    #[test]
    fn oracle_size_guard() {
        let sys = scalar_system(3, &[1, -1, 1]);
        assert!(matches!(
            orbit_census(&sys, 5000),
            Err(DynsysError::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn companion_examples() {
        let t = companion_matrix(&poly(3, &[1, 2, 1])).unwrap();
        assert_eq!(t, FpMatrix::from_rows(gf(3), 2, 2, vec![0, 1, 2, 1]));
        let t = companion_matrix(&poly(3, &[2, 1])).unwrap();
        assert_eq!(t, FpMatrix::from_rows(gf(3), 1, 1, vec![1]));
        let t = companion_matrix(&poly(3, &[1, 0, 0, 0, 1])).unwrap();
        assert_eq!((0..4).map(|j| t.get(3, j)).collect::<Vec<_>>(), vec![2, 0, 0, 0]);
        assert_eq!(companion_matrix(&poly(3, &[0, 1])), Err(DynsysError::ZeroConstantTerm));
        // non-monic: 2 + 2t^2 behaves like 1 + t^2
        let t = companion_matrix(&poly(3, &[2, 0, 2])).unwrap();
        assert_eq!(t, FpMatrix::from_rows(gf(3), 2, 2, vec![0, 1, 2, 0]));
    }

    #[test]
    fn iterate_examples() {
        let id = FpMatrix::identity(gf(3), 2);
        let t = companion_matrix(&poly(3, &[1, -1, 1])).unwrap();
        assert_eq!(t.pow(2).sub(&id).nullity(), 1);
        assert_eq!(t.pow(2), t.sub(&id));

        let one = FpMatrix::identity(gf(5), 1);
        let c = iterate_census(&one, 1).unwrap();
        assert_eq!(c.dims, BTreeMap::from([(1, 1)]));
        assert_eq!(c.exact_counts[&1], 5);

        let t = companion_matrix(&poly(3, &[-1, 3, -1])).unwrap();
        assert_eq!(t.pow(4).sub(&id).nullity(), 2);
        assert_eq!(t.pow(2), FpMatrix::zeros(gf(3), 2, 2).sub(&id));

        assert_eq!(
            iterate_census(&FpMatrix::zeros(gf(3), 1, 1), 1),
            Err(DynsysError::SingularT)
        );
    }

    #[test]
    fn three_oracles_agree() {
        for (p, c) in [
            (3u64, &[1i64, -1, 1][..]),
            (3, &[-1, 3, -1]),
            (5, &[1, -3, 3, -3, 1]),
            (2, &[1, -1, 1]),
        ] {
            let f = poly(p, c);
            let t = companion_matrix(&f).unwrap();
            let walked = enumerate_census(&t).unwrap();
            let horizon = walked.period_set.iter().copied().fold(1, lcm);
            let iterated = iterate_census(&t, horizon).unwrap();
            let cyclic = orbit_census(&scalar_system(p, c), horizon).unwrap();
            assert_eq!(walked, iterated);
            assert_eq!(cyclic, iterated);
        }
    }

    #[test]
    fn trefoil_witnesses() {
        let alex = poly(3, &[1, -1, 1]);
        let f = poly(3, &[1, 1]);
        let w0 = witness_sequence(&alex, &f, 0).unwrap();
        assert_eq!(w0.values, vec![1, 2]);
        assert_eq!(w0.declared_period, 2);
        let w1 = witness_sequence(&alex, &f, 1).unwrap();
        assert_eq!(w1.values, vec![0, 1, 1, 0, 2, 2]);
        assert_eq!(w1.minimal_period(), 6);
        assert!(w1.satisfies(&alex));
        assert_eq!(
            witness_sequence(&alex, &f, 2),
            Err(DynsysError::OrderOutOfRange { s: 2, multiplicity: 2 })
        );
    }

    #[test]
    fn figure8_trace_witness() {
        let alex = poly(3, &[-1, 3, -1]);
        let w = witness_sequence(&alex, &poly(3, &[1, 0, 1]), 0).unwrap();
        assert_eq!(w.values, vec![2, 0, 1, 0]);
        assert_eq!(w.minimal_period(), 4);
        assert!(w.satisfies(&alex));
    }

    #[test]
    fn period_scan() {
        assert_eq!(minimal_period(&[1, 2, 1, 2]), 2);
        assert_eq!(minimal_period(&[0, 0, 0]), 1);
        assert_eq!(minimal_period(&[0, 1, 1, 0, 2, 2]), 6);
    }
}
