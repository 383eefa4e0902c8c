//! Acceptance suite. Each test prints one PASS/FAIL line for its criterion.
//!
//! Run with `cargo test --release --test acceptance -- --nocapture --test-threads=1`.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use knot_periods::cli::{analyze, catalog, AnalysisReport, AnalyzeOptions, KnotInput, Verdict, CATALOG};
use knot_periods::dynsys::{minimal_period, satisfies_recurrence, witness_sequence};
use knot_periods::foxcalc::{fox_derivative, GroupRingElement, MatrixPoly, Word};
use knot_periods::pencil::{determinant, smith_form, smith_normal_form, PolyMatrix};
use knot_periods::periods::lcm;
use knot_periods::poly::{factor_seeded, is_irreducible};
use knot_periods::{Poly, PrimeModulus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gf(p: u64) -> PrimeModulus {
    PrimeModulus::new(p).unwrap()
}

fn set(xs: &[u64]) -> BTreeSet<u64> {
    xs.iter().copied().collect()
}

/// Prints the verdict line, then fails the test when there are violations.
fn report(id: u32, title: &str, elapsed: Duration, limit: Duration, mut violations: Vec<String>) {
    if elapsed > limit {
        violations.push(format!("took {elapsed:.2?}, limit {limit:.2?}"));
    }
    if violations.is_empty() {
        println!("PASS criterion {id}: {title} ({elapsed:.2?})");
    } else {
        println!(
            "FAIL criterion {id}: {title} ({elapsed:.2?}): {}",
            violations.join("; ")
        );
        panic!("criterion {id} failed: {violations:?}");
    }
}

fn run(name: &str, p: u64) -> (AnalysisReport, Duration) {
    let entry = catalog::lookup(name).unwrap();
    let start = Instant::now();
    let r = analyze(&KnotInput::Catalog(entry), gf(p), AnalyzeOptions::default()).unwrap();
    (r, start.elapsed())
}

fn check<T: PartialEq + std::fmt::Debug>(v: &mut Vec<String>, what: &str, got: T, want: T) {
    if got != want {
        v.push(format!("{what}: got {got:?}, expected {want:?}"));
    }
}

fn orbit_counts(r: &AnalysisReport) -> BTreeMap<String, u64> {
    r.orbit_counts.clone().unwrap_or_default()
}

fn counts(pairs: &[(u64, u64)]) -> BTreeMap<String, u64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

#[test]
fn criterion_1_trefoil_mod_3() {
    let (r, t) = run("trefoil", 3);
    let mut v = Vec::new();
    check(&mut v, "predicted", set(&r.predicted_periods), set(&[1, 2, 6]));
    check(
        &mut v,
        "oracle",
        r.oracle_periods.as_deref().map(set),
        Some(set(&[1, 2, 6])),
    );
    check(
        &mut v,
        "orbit counts",
        orbit_counts(&r),
        counts(&[(1, 1), (2, 1), (6, 1)]),
    );
    check(&mut v, "order of J", r.order_of_j, 6);
    check(&mut v, "verdict", r.verdict, Verdict::Match);
    report(1, "trefoil p=3 periods {1,2,6}, order 6", t, Duration::from_secs(1), v);
}

#[test]
fn criterion_2_figure8_mod_3() {
    let (r, t) = run("figure8", 3);
    let mut v = Vec::new();
    check(&mut v, "predicted", set(&r.predicted_periods), set(&[1, 4]));
    check(
        &mut v,
        "oracle",
        r.oracle_periods.as_deref().map(set),
        Some(set(&[1, 4])),
    );
    check(&mut v, "orbit counts", orbit_counts(&r), counts(&[(1, 1), (4, 2)]));
    let points = r.point_counts.clone().unwrap_or_default();
    check(&mut v, "period-4 points", points.get("4").copied(), Some(8));
    check(&mut v, "verdict", r.verdict, Verdict::Match);
    report(
        2,
        "figure8 p=3 periods {1,4}, two 4-orbits",
        t,
        Duration::from_secs(1),
        v,
    );
}

#[test]
fn criterion_3_nine_one_mod_3() {
    let (r, t) = run("9_1", 3);
    let mut v = Vec::new();
    let p = gf(3);
    let expected = Poly::from_ints(p, &[1, 1]).pow(8);
    check(&mut v, "Δ mod 3", r.alexander_mod_p.clone(), expected.coeffs().to_vec());
    check(&mut v, "spectrum size", r.spectrum.len(), 1);
    if let Some(s) = r.spectrum.first() {
        check(&mut v, "d", s.order, 2);
        check(&mut v, "k", s.cells.clone(), vec![8]);
        check(&mut v, "r", s.r, 2);
    }
    check(&mut v, "predicted", set(&r.predicted_periods), set(&[1, 2, 6, 18]));
    check(
        &mut v,
        "oracle",
        r.oracle_periods.as_deref().map(set),
        Some(set(&[1, 2, 6, 18])),
    );
    check(&mut v, "verdict", r.verdict, Verdict::Match);
    report(
        3,
        "9_1 p=3 (t+1)^8, d=2 k=8 r=2, periods {1,2,6,18}",
        t,
        Duration::from_secs(5),
        v,
    );
}

#[test]
fn criterion_4_six_two_mod_3() {
    let (r, t) = run("6_2", 3);
    let mut v = Vec::new();
    check(&mut v, "Δ mod 3", r.alexander_mod_p.clone(), vec![1, 0, 0, 0, 1]);
    let orders: Vec<u64> = r.spectrum.iter().map(|s| s.order).collect();
    check(&mut v, "root orders", orders, vec![8, 8]);
    check(&mut v, "predicted", set(&r.predicted_periods), set(&[1, 8]));
    check(
        &mut v,
        "oracle",
        r.oracle_periods.as_deref().map(set),
        Some(set(&[1, 8])),
    );
    check(&mut v, "verdict", r.verdict, Verdict::Match);
    report(
        4,
        "6_2 p=3 t^4+1, two order-8 orbits, periods {1,8}",
        t,
        Duration::from_secs(1),
        v,
    );
}

/// True when `a` is a nonzero multiple of some cyclic rotation of `b`.
fn equal_up_to_shift_and_scalar(a: &[u64], b: &[u64], p: PrimeModulus) -> bool {
    a.len() == b.len()
        && (0..b.len())
            .any(|shift| (1..p.value()).any(|c| (0..a.len()).all(|j| a[j] == p.mul(c, b[(j + shift) % b.len()]))))
}

#[test]
fn criterion_5_trefoil_witness() {
    let p = gf(3);
    let start = Instant::now();
    let alexander = Poly::from_ints(p, &[1, -1, 1]);
    let factor = Poly::from_ints(p, &[1, 1]);
    let w = witness_sequence(&alexander, &factor, 1).unwrap();
    let expected: Vec<u64> = [0i64, 1, 1, 0, -1, -1].iter().map(|&x| p.reduce(x)).collect();
    let mut v = Vec::new();
    if !equal_up_to_shift_and_scalar(&w.values, &expected, p) {
        v.push(format!(
            "witness {:?} is not a scaled rotation of {expected:?}",
            w.values
        ));
    }
    report(
        5,
        "trefoil p=3 s=1 witness (0,1,1,0,-1,-1)",
        start.elapsed(),
        Duration::MAX,
        v,
    );
}

fn property_violations(r: &AnalysisReport) -> Vec<String> {
    let tag = format!("{} p={}", r.knot, r.prime);
    let mut v = Vec::new();
    let predicted = set(&r.predicted_periods);
    let Some(oracle) = r.oracle_periods.as_deref().map(set) else {
        return vec![format!("{tag}: no oracle result")];
    };
    // (a) containment, equality when exact
    if !oracle.is_subset(&predicted) {
        v.push(format!("{tag}: oracle {oracle:?} not within predicted {predicted:?}"));
    }
    if r.exact && oracle != predicted {
        v.push(format!(
            "{tag}: exact prediction {predicted:?} differs from oracle {oracle:?}"
        ));
    }
    // (b) lcm of observed periods is the order of the shift
    let observed = oracle.iter().fold(1, |acc, &n| lcm(acc, n));
    if observed != r.order_of_j {
        v.push(format!(
            "{tag}: lcm of oracle periods {observed} != order {}",
            r.order_of_j
        ));
    }
    // (c) exact counts partition the space
    let total: u128 = r.census.as_ref().map(|c| c.exact_counts.values().sum()).unwrap_or(0);
    if total != (r.prime as u128).pow(r.total_dim as u32) {
        v.push(format!(
            "{tag}: {total} points counted, expected {}^{}",
            r.prime, r.total_dim
        ));
    }
    // (d) every nontrivial period is a multiple of a root order
    for &n in predicted.iter().filter(|&&n| n > 1) {
        if !r.spectrum.iter().any(|s| n % s.order == 0) {
            v.push(format!("{tag}: period {n} divisible by no root order"));
        }
    }
    // (e) witnesses satisfy their recurrences and have the declared period
    let p = gf(r.prime);
    let delta = Poly::from_coeffs(p, r.alexander_mod_p.clone());
    for w in &r.witnesses {
        let local = Poly::from_coeffs(p, w.factor.clone()).pow(w.s as u64 + 1);
        if !satisfies_recurrence(&w.values, &delta) || !satisfies_recurrence(&w.values, &local) {
            v.push(format!("{tag}: witness s={} breaks its recurrence", w.s));
        }
        if minimal_period(&w.values) != w.declared_period {
            v.push(format!(
                "{tag}: witness s={} has period {}, declared {}",
                w.s,
                minimal_period(&w.values),
                w.declared_period
            ));
        }
    }
    if r.witnesses.is_empty() {
        v.push(format!("{tag}: no witnesses"));
    }
    v.extend(r.violations.iter().map(|s| format!("{tag}: {s}")));
    v
}

#[test]
fn criterion_6_property_sweep() {
    let start = Instant::now();
    let mut v = Vec::new();
    for entry in CATALOG {
        for p in [2, 3, 5, 7] {
            match analyze(&KnotInput::Catalog(entry), gf(p), AnalyzeOptions::default()) {
                Ok(r) => v.extend(property_violations(&r)),
                Err(e) => v.push(format!("{} p={p}: {e}", entry.name)),
            }
        }
    }
    report(
        6,
        "catalog x {2,3,5,7} property sweep",
        start.elapsed(),
        Duration::from_secs(60),
        v,
    );
}

fn random_poly(rng: &mut ChaCha8Rng, p: PrimeModulus, max_degree: usize) -> Poly {
    let degree = rng.gen_range(0..=max_degree);
    Poly::from_coeffs(p, (0..=degree).map(|_| rng.gen_range(0..p.value())).collect())
}

fn smith_violations(rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut v = Vec::new();
    let mut done = 0;
    while done < 500 {
        let p = gf([2, 3, 5, 7][rng.gen_range(0..4)]);
        let n = rng.gen_range(1..=5);
        let entries = (0..n * n).map(|_| random_poly(rng, p, 4)).collect();
        let m = MatrixPoly::from_entries(p, n, n, entries);
        let det = determinant(&m).unwrap();
        if det.is_zero() {
            continue;
        }
        done += 1;
        let sf = smith_form(&m).unwrap();
        let a = PolyMatrix::from_matrix_poly(&m).unwrap();
        let prod = sf.u.mul(&a).mul(&sf.v);
        for r in 0..n {
            for c in 0..n {
                let want = if r == c { sf.diagonal[r].clone() } else { Poly::zero(p) };
                if *prod.get(r, c) != want {
                    v.push(format!("instance {done}: U·A·V differs from the diagonal at ({r},{c})"));
                }
            }
        }
        let inv = smith_normal_form(&m).unwrap();
        if !inv.i_list.windows(2).all(|w| w[1].divides(&w[0])) {
            v.push(format!("instance {done}: divisibility chain broken"));
        }
        if inv.product(p) != det.monic() {
            v.push(format!("instance {done}: product of invariants != monic det"));
        }
    }
    v
}

fn factor_violations(rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut v = Vec::new();
    for i in 0..500 {
        let p = gf([2, 3, 5, 7][rng.gen_range(0..4)]);
        let mut a = random_poly(rng, p, 16);
        if a.is_zero() {
            a = Poly::one(p);
        }
        let f = factor_seeded(&a, rng.gen()).unwrap();
        if f.expand(p) != a {
            v.push(format!("factorization {i} of {a} does not multiply back"));
        }
        if !f.factors.iter().all(|(g, _)| g.is_monic() && is_irreducible(g)) {
            v.push(format!("factorization {i} of {a} has a reducible or non-monic factor"));
        }
    }
    v
}

fn fox_violations(rng: &mut ChaCha8Rng) -> Vec<String> {
    let gens = 3;
    let mut v = Vec::new();
    for i in 0..200 {
        let len = rng.gen_range(0..=12);
        let w = Word::from_letters((0..len).map(|_| {
            let e = rng.gen_range(1..=3) * if rng.gen() { 1 } else { -1 };
            (rng.gen_range(0..gens), e)
        }));
        // w − 1 = Σ_j ∂w/∂x_j · (x_j − 1)
        let rhs = (0..gens).fold(GroupRingElement::zero(), |acc, g| {
            let x_minus_one = GroupRingElement::from_word(Word::generator(g)).sub(&GroupRingElement::one());
            acc.add(&fox_derivative(&w, g).mul(&x_minus_one))
        });
        let lhs = GroupRingElement::from_word(w.clone()).sub(&GroupRingElement::one());
        if lhs != rhs {
            v.push(format!("word {i} {w:?} breaks the fundamental identity"));
        }
    }
    v
}

#[test]
fn criterion_7_algebra_kernels() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v = smith_violations(&mut rng);
    v.extend(factor_violations(&mut rng));
    v.extend(fox_violations(&mut rng));
    report(
        7,
        "500 Smith forms, 500 factorizations, 200 Fox identities",
        start.elapsed(),
        Duration::MAX,
        v,
    );
}
