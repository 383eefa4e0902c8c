//! Closed-form orbit periods of the shift from its Jordan data.
//!
//! A Jordan cell of size k on a root of order d has order `lcm(d, p^r)`
//! where `p^{r-1} < k ≤ p^r`; the order of the whole shift is the lcm over
//! all cells. The period set combines per-orbit sets
//! `Q_j = {1} ∪ {lcm(d_j, p^i) : 0 ≤ i ≤ r_j}` by taking lcms.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::field::PrimeModulus;
use crate::pencil::JordanSpectrum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeriodsError {
    #[error("orbit on {factor} has {cells} Jordan cells; an exact period set needs one cell per orbit")]
    NotCompanionShape { factor: String, cells: usize },
    #[error("period arithmetic overflowed u64")]
    Overflow,
}

/// Sorted orbit periods with the order of the shift.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodSet {
    pub periods: BTreeSet<u64>,
    /// True when the set is the exact set of periods, false when it is an upper bound.
    pub exact: bool,
    pub order_of_j: u64,
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

fn checked_lcm(a: u64, b: u64) -> Result<u64, PeriodsError> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(PeriodsError::Overflow)
}

/// Prime factorization by trial division, primes ascending.
pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (q, e) in prime_factors(n) {
        let current = divs.clone();
        let mut power = 1;
        for _ in 0..e {
            power *= q;
            divs.extend(current.iter().map(|d| d * power));
        }
    }
    divs.sort_unstable();
    divs
}

pub fn mobius(n: u64) -> i64 {
    let factors = prime_factors(n);
    if factors.iter().any(|&(_, e)| e > 1) {
        0
    } else if factors.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Minimal `r ≥ 0` with `k ≤ p^r`.
pub fn r_exponent(k: u64, p: PrimeModulus) -> u32 {
    let mut r = 0;
    let mut power: u64 = 1;
    while power < k {
        power = power.saturating_mul(p.value());
        r += 1;
    }
    r
}

/// Order of a Jordan cell of size `k` on a root of order `d`.
pub fn cell_order(d: u64, k: u64, p: PrimeModulus) -> u64 {
    lcm(d, p.value().pow(r_exponent(k, p)))
}

/// lcm of the cell orders over the whole spectrum; 1 for an empty spectrum.
pub fn order_of_shift(spec: &JordanSpectrum) -> u64 {
    spec.orbits
        .iter()
        .flat_map(|o| {
            o.cell_sizes
                .iter()
                .map(move |&k| cell_order(o.order_d, k as u64, spec.prime))
        })
        .fold(1, lcm)
}

/// `{1} ∪ {lcm(d, p^i) : 0 ≤ i ≤ r}`.
pub fn q_set(d: u64, r: u32, p: PrimeModulus) -> BTreeSet<u64> {
    let mut q = BTreeSet::from([1]);
    let mut power = 1u64;
    for i in 0..=r {
        if i > 0 {
            power *= p.value();
        }
        q.insert(lcm(d, power));
    }
    q
}

/// All lcm-combinations of one element from each orbit's Q-set.
///
/// With `two_bridge` set, every orbit must carry a single cell and the result
/// is flagged exact.
pub fn candidate_period_set(spec: &JordanSpectrum, two_bridge: bool) -> Result<PeriodSet, PeriodsError> {
    if two_bridge {
        if let Some(o) = spec.orbits.iter().find(|o| o.cell_sizes.len() != 1) {
            return Err(PeriodsError::NotCompanionShape {
                factor: o.factor.to_string(),
                cells: o.cell_sizes.len(),
            });
        }
    }
    let mut periods = BTreeSet::from([1u64]);
    for orbit in &spec.orbits {
        let q = q_set(orbit.order_d, orbit.r, spec.prime);
        let mut next = BTreeSet::new();
        for &a in &periods {
            for &b in &q {
                next.insert(checked_lcm(a, b)?);
            }
        }
        periods = next;
    }
    let order_of_j = order_of_shift(spec);
    debug_assert_eq!(periods.iter().copied().fold(1, lcm), order_of_j);
    Ok(PeriodSet {
        periods,
        exact: two_bridge,
        order_of_j,
    })
}
