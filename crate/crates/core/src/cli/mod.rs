//! End-to-end analysis: input → Alexander matrix → spectrum → predicted
//! periods, cross-checked against the oracle census.

pub mod catalog;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::dynsys::{
    companion_matrix, iterate_census, orbit_census, witness_sequence, DynsysError, OrbitCensus, RecurrenceSystem,
    WitnessSequence,
};
use crate::field::PrimeModulus;
use crate::foxcalc::{
    alexander_matrix, check_unit_at_one, parse_presentation, reduce_normalize, FoxError, IntLaurentPoly, MatrixPoly,
};
use crate::pencil::{determinant, jordan_spectrum, smith_normal_form, JordanSpectrum, PencilError};
use crate::periods::{candidate_period_set, lcm, PeriodSet, PeriodsError};
use crate::poly::{factor_seeded, Poly, PolyError, DEFAULT_FACTOR_SEED};

pub use catalog::{CatalogEntry, CATALOG};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("unknown knot `{0}`; run `catalog` for the built-in list")]
    UnknownKnot(String),
    #[error("knot `{0}` has no built-in presentation")]
    NoPresentation(String),
    #[error("invalid Alexander polynomial: {0}")]
    BadAlexander(String),
    #[error("Alexander polynomial vanishes mod {0}")]
    ZeroModP(u64),
    #[error("presentation: {0}")]
    Fox(FoxError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Periods(#[from] PeriodsError),
    #[error("oracle: {0}")]
    Dynsys(DynsysError),
}

// Manual conversions keep the wrapped error out of the source chain, so a
// chained report does not print its message twice.
impl From<FoxError> for AnalysisError {
    fn from(e: FoxError) -> Self {
        Self::Fox(e)
    }
}

impl From<DynsysError> for AnalysisError {
    fn from(e: DynsysError) -> Self {
        Self::Dynsys(e)
    }
}

/// Where the knot comes from.
#[derive(Debug, Clone)]
pub enum KnotInput {
    /// A catalog entry, analysed through its Alexander polynomial.
    Catalog(&'static CatalogEntry),
    /// A catalog entry, analysed through its two-generator presentation.
    CatalogPresentation(&'static CatalogEntry),
    Presentation {
        name: String,
        text: String,
    },
    /// Integer coefficients low degree first; treated as a two-bridge knot.
    Alexander(Vec<i64>),
}

impl KnotInput {
    pub fn name(&self) -> String {
        match self {
            Self::Catalog(e) => e.name.to_string(),
            Self::CatalogPresentation(e) => format!("{} (presentation)", e.name),
            Self::Presentation { name, .. } => name.clone(),
            Self::Alexander(c) => format!("alexander[{}]", join(c)),
        }
    }
}

/// Parses whitespace-separated integer coefficients, low degree first.
pub fn parse_alexander(text: &str) -> Result<Vec<i64>, AnalysisError> {
    let coeffs = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<i64>()
                .map_err(|_| AnalysisError::BadAlexander(format!("`{s}` is not an integer")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if coeffs.iter().all(|&c| c == 0) {
        return Err(AnalysisError::BadAlexander("no nonzero coefficients".into()));
    }
    Ok(coeffs)
}

#[derive(Debug, Clone, Copy)]
pub struct AnalyzeOptions {
    pub verify: bool,
    pub seed: u64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            verify: true,
            seed: DEFAULT_FACTOR_SEED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    /// Oracle period set equals the predicted set.
    Match,
    /// Oracle set is strictly inside a predicted upper bound.
    Subset,
    /// Anything else, including failed consistency checks.
    Mismatch,
    /// The oracle was not run.
    Unverified,
}

impl Verdict {
    pub fn is_failure(self) -> bool {
        self == Self::Mismatch
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorEntry {
    pub factor: Vec<u64>,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumEntry {
    pub factor: Vec<u64>,
    pub degree: usize,
    pub order: u64,
    pub cells: Vec<usize>,
    pub r: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessEntry {
    pub factor: Vec<u64>,
    pub s: usize,
    pub declared_period: u64,
    pub minimal_period: u64,
    pub satisfies_recurrence: bool,
    pub values: Vec<u64>,
}

/// Size of the cyclic solution space at the horizon against the number of
/// unknowns in the block-circulant system.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OracleSpace {
    pub dimension: usize,
    pub unknowns: u64,
}

#[derive(Debug, Clone, Default)]
pub struct Timings {
    pub algebra: Duration,
    pub oracle: Duration,
}

/// Everything one analysis produces. JSON keys are emitted in sorted order.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub knot: String,
    pub prime: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alexander_z: Option<Vec<i64>>,
    /// Determinant of the normalized Alexander matrix mod p, low degree first.
    pub alexander_mod_p: Vec<u64>,
    pub factorization: Vec<FactorEntry>,
    pub invariant_polynomials: Vec<Vec<u64>>,
    pub spectrum: Vec<SpectrumEntry>,
    pub total_dim: usize,
    #[serde(rename = "order_of_J")]
    pub order_of_j: u64,
    pub predicted_periods: Vec<u64>,
    pub exact: bool,
    pub oracle_periods: Option<Vec<u64>>,
    pub orbit_counts: Option<BTreeMap<String, u64>>,
    pub point_counts: Option<BTreeMap<String, u64>>,
    pub oracle_space: Option<OracleSpace>,
    pub witnesses: Vec<WitnessEntry>,
    pub verdict: Verdict,
    pub violations: Vec<String>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub timings: Timings,
    #[serde(skip)]
    pub spectrum_data: Option<JordanSpectrum>,
    #[serde(skip)]
    pub census: Option<OrbitCensus>,
    #[serde(skip)]
    pub period_set: Option<PeriodSet>,
}

struct Prepared {
    matrix: MatrixPoly,
    alexander_z: Option<Vec<i64>>,
    two_bridge: bool,
    notes: Vec<String>,
}

fn laurent_matrix_1x1(coeffs: &[i64]) -> Vec<Vec<IntLaurentPoly>> {
    vec![vec![IntLaurentPoly::from_coeffs(coeffs)]]
}

fn prepare(input: &KnotInput, p: PrimeModulus) -> Result<Prepared, AnalysisError> {
    let mut notes = Vec::new();
    let from_presentation = |text: &str, notes: &mut Vec<String>| -> Result<(MatrixPoly, bool), AnalysisError> {
        let pres = parse_presentation(text)?;
        for line in &pres.dropped_relators {
            notes.push(format!("trivial relator on line {line} dropped"));
        }
        let m = alexander_matrix(&pres)?;
        check_unit_at_one(&m)?;
        let two_bridge = m.len() == 1;
        Ok((reduce_normalize(&m, p)?, two_bridge))
    };
    let prepared = match input {
        KnotInput::Catalog(entry) => Prepared {
            matrix: reduce_normalize(&laurent_matrix_1x1(entry.alexander), p)?,
            alexander_z: Some(entry.alexander.to_vec()),
            two_bridge: entry.two_bridge,
            notes,
        },
        KnotInput::CatalogPresentation(entry) => {
            let text = entry
                .presentation()
                .ok_or_else(|| AnalysisError::NoPresentation(entry.name.to_string()))?;
            let (matrix, two_bridge) = from_presentation(&text, &mut notes)?;
            Prepared {
                matrix,
                alexander_z: Some(entry.alexander.to_vec()),
                two_bridge,
                notes,
            }
        }
        KnotInput::Presentation { text, .. } => {
            let (matrix, two_bridge) = from_presentation(text, &mut notes)?;
            Prepared {
                matrix,
                alexander_z: None,
                two_bridge,
                notes,
            }
        }
        KnotInput::Alexander(coeffs) => {
            let at_one: i128 = coeffs.iter().map(|&c| c as i128).sum();
            if at_one.abs() != 1 {
                notes.push(format!(
                    "Δ(1) = {at_one}, not ±1; this is not the Alexander polynomial of a knot"
                ));
            }
            let matrix = reduce_normalize(&laurent_matrix_1x1(coeffs), p).map_err(|e| match e {
                FoxError::ZeroMatrixModP(q) => AnalysisError::ZeroModP(q),
                other => other.into(),
            })?;
            Prepared {
                matrix,
                alexander_z: Some(coeffs.clone()),
                two_bridge: true,
                notes,
            }
        }
    };
    Ok(prepared)
}

fn to_u64(x: u128) -> u64 {
    u64::try_from(x).unwrap_or(u64::MAX)
}

/// Runs the full pipeline for one knot and prime.
pub fn analyze(input: &KnotInput, p: PrimeModulus, opts: AnalyzeOptions) -> Result<AnalysisReport, AnalysisError> {
    let started = Instant::now();
    let Prepared {
        matrix,
        alexander_z,
        two_bridge,
        mut notes,
    } = prepare(input, p)?;

    if let Some(z) = &alexander_z {
        let top = z.iter().rposition(|&c| c != 0).unwrap_or(0);
        let bottom = z.iter().position(|&c| c != 0).unwrap_or(0);
        if p.reduce(z[top]) == 0 || p.reduce(z[bottom]) == 0 {
            notes.push(format!("Δ loses degree mod {p}; zero-root and infinite parts dropped"));
        }
    }

    let det = determinant(&matrix)?;
    let (det_shift, alexander_mod_p) = det.strip_x_power();
    if det_shift > 0 {
        notes.push(format!("t^{det_shift} stripped from det mod {p}"));
    }
    let factorization = factor_seeded(&alexander_mod_p, opts.seed)?;
    let invariants = smith_normal_form(&matrix)?;
    let spectrum = jordan_spectrum(&invariants, p, opts.seed)?;
    let stripped: usize = spectrum.stripped_t_exponents.iter().sum();
    if stripped > 0 {
        notes.push(format!(
            "zero-eigenvalue factors t^{:?} stripped from the invariant polynomials",
            spectrum.stripped_t_exponents
        ));
    }
    let predicted = candidate_period_set(&spectrum, two_bridge)?;
    let algebra = started.elapsed();

    let mut violations = Vec::new();
    if invariants.product(p).strip_x_power().1 != alexander_mod_p.monic() {
        violations.push("product of invariant polynomials differs from det".to_string());
    }
    if spectrum.total_dim != alexander_mod_p.degree().unwrap_or(0) {
        violations.push(format!(
            "spectrum dimension {} differs from deg det {}",
            spectrum.total_dim,
            alexander_mod_p.degree().unwrap_or(0)
        ));
    }
    for &n in predicted.periods.iter().filter(|&&n| n > 1) {
        if !spectrum.orbits.iter().any(|o| n % o.order_d == 0) {
            violations.push(format!("predicted period {n} is divisible by no root order"));
        }
    }

    let mut witnesses = Vec::new();
    if two_bridge {
        for orbit in &spectrum.orbits {
            for s in 0..orbit.k_max {
                let w: WitnessSequence = witness_sequence(&alexander_mod_p, &orbit.factor, s)?;
                let entry = WitnessEntry {
                    factor: orbit.factor.coeffs().to_vec(),
                    s,
                    declared_period: w.declared_period,
                    minimal_period: w.minimal_period(),
                    satisfies_recurrence: w.satisfies(&alexander_mod_p),
                    values: w.values,
                };
                if !entry.satisfies_recurrence {
                    violations.push(format!("witness ({}, s={s}) violates the recurrence", orbit.factor));
                }
                if entry.minimal_period != entry.declared_period {
                    violations.push(format!(
                        "witness ({}, s={s}) has minimal period {} but declared {}",
                        orbit.factor, entry.minimal_period, entry.declared_period
                    ));
                }
                witnesses.push(entry);
            }
        }
    }

    let oracle_started = Instant::now();
    let mut oracle_space = None;
    let census = if opts.verify {
        let sys = RecurrenceSystem::from_matrix_poly(&matrix)?;
        let census = orbit_census(&sys, predicted.order_of_j)?;
        if two_bridge {
            let t = companion_matrix(&alexander_mod_p)?;
            let iterated = iterate_census(&t, predicted.order_of_j)?;
            if iterated.period_set != census.period_set || iterated.exact_counts != census.exact_counts {
                violations.push("companion-matrix census disagrees with the cyclic-solution census".into());
            }
        }
        if census.top_dim() != spectrum.total_dim {
            violations.push(format!(
                "oracle space has dimension {} but the spectrum predicts {}",
                census.top_dim(),
                spectrum.total_dim
            ));
        }
        let oracle_lcm = census.period_set.iter().copied().fold(1, lcm);
        if oracle_lcm != predicted.order_of_j {
            violations.push(format!(
                "lcm of oracle periods is {oracle_lcm}, order of J is {}",
                predicted.order_of_j
            ));
        }
        oracle_space = Some(OracleSpace {
            dimension: census.top_dim(),
            unknowns: sys.width() as u64 * predicted.order_of_j,
        });
        Some(census)
    } else {
        None
    };
    let oracle = oracle_started.elapsed();

    let verdict = match &census {
        None => Verdict::Unverified,
        Some(c) => {
            if !violations.is_empty() {
                Verdict::Mismatch
            } else if c.period_set == predicted.periods {
                Verdict::Match
            } else if c.period_set.is_subset(&predicted.periods) && !predicted.exact {
                notes.push("oracle period set is a strict subset of the predicted bound".into());
                Verdict::Subset
            } else {
                Verdict::Mismatch
            }
        }
    };

    Ok(AnalysisReport {
        knot: input.name(),
        prime: p.value(),
        alexander_z,
        alexander_mod_p: alexander_mod_p.coeffs().to_vec(),
        factorization: factorization
            .factors
            .iter()
            .map(|(f, m)| FactorEntry {
                factor: f.coeffs().to_vec(),
                multiplicity: *m,
            })
            .collect(),
        invariant_polynomials: invariants.i_list.iter().map(|f| f.coeffs().to_vec()).collect(),
        spectrum: spectrum
            .orbits
            .iter()
            .map(|o| SpectrumEntry {
                factor: o.factor.coeffs().to_vec(),
                degree: o.degree(),
                order: o.order_d,
                cells: o.cell_sizes.clone(),
                r: o.r,
            })
            .collect(),
        total_dim: spectrum.total_dim,
        order_of_j: predicted.order_of_j,
        predicted_periods: predicted.periods.iter().copied().collect(),
        exact: predicted.exact,
        oracle_periods: census.as_ref().map(|c| c.period_set.iter().copied().collect()),
        orbit_counts: census.as_ref().map(|c| {
            c.orbit_counts
                .iter()
                .map(|(n, k)| (n.to_string(), to_u64(*k)))
                .collect()
        }),
        point_counts: census.as_ref().map(|c| {
            c.exact_counts
                .iter()
                .filter(|(_, &k)| k > 0)
                .map(|(n, k)| (n.to_string(), to_u64(*k)))
                .collect()
        }),
        oracle_space,
        witnesses,
        verdict,
        violations,
        notes,
        timings: Timings { algebra, oracle },
        spectrum_data: Some(spectrum),
        census,
        period_set: Some(predicted),
    })
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn set(xs: &[u64]) -> String {
    format!("{{{}}}", xs.iter().map(u64::to_string).collect::<Vec<_>>().join(", "))
}

impl AnalysisReport {
    /// Canonical JSON: keys sorted, no floats.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }

    pub fn to_text(&self) -> String {
        let p = PrimeModulus::new(self.prime).expect("report prime is prime");
        let show = |c: &[u64]| Poly::from_coeffs(p, c.to_vec()).to_string();
        let mut out = String::new();
        let _ = writeln!(out, "knot            {}", self.knot);
        let _ = writeln!(out, "prime           {}", self.prime);
        if let Some(z) = &self.alexander_z {
            let _ = writeln!(out, "Alexander (Z)   {}", IntLaurentPoly::from_coeffs(z));
        }
        let _ = writeln!(out, "Alexander mod p {}", show(&self.alexander_mod_p));
        let factors: Vec<String> = self
            .factorization
            .iter()
            .map(|f| format!("({})^{}", show(&f.factor), f.multiplicity))
            .collect();
        let _ = writeln!(out, "factorization   {}", factors.join(" · "));
        let invs: Vec<String> = self.invariant_polynomials.iter().map(|c| show(c)).collect();
        let _ = writeln!(out, "invariant polys {}", invs.join(", "));
        let _ = writeln!(
            out,
            "spectrum        {:<24} {:>3} {:>8} {:>10} {:>3}",
            "factor", "deg", "order d", "cells", "r"
        );
        for s in &self.spectrum {
            let _ = writeln!(
                out,
                "                {:<24} {:>3} {:>8} {:>10} {:>3}",
                show(&s.factor),
                s.degree,
                s.order,
                format!("{:?}", s.cells),
                s.r
            );
        }
        let _ = writeln!(out, "dimension m     {}", self.total_dim);
        let _ = writeln!(out, "order of J      {}", self.order_of_j);
        let _ = writeln!(
            out,
            "predicted       {} ({})",
            set(&self.predicted_periods),
            if self.exact { "exact" } else { "upper bound" }
        );
        if let (Some(periods), Some(orbits), Some(points)) =
            (&self.oracle_periods, &self.orbit_counts, &self.point_counts)
        {
            let _ = writeln!(out, "oracle          {}", set(periods));
            for n in periods {
                let key = n.to_string();
                let _ = writeln!(
                    out,
                    "  period {:>6}: {:>8} points, {:>6} orbits",
                    n, points[&key], orbits[&key]
                );
            }
        }
        if let Some(space) = &self.oracle_space {
            let _ = writeln!(
                out,
                "oracle space    dimension {} of {} unknowns",
                space.dimension, space.unknowns
            );
        }
        for w in &self.witnesses {
            let vals: Vec<i64> = w.values.iter().map(|&v| p.signed(v)).collect();
            let _ = writeln!(
                out,
                "witness         f = {}, s = {}: period {} ({:?})",
                show(&w.factor),
                w.s,
                w.minimal_period,
                vals
            );
        }
        for n in &self.notes {
            let _ = writeln!(out, "note            {n}");
        }
        for v in &self.violations {
            let _ = writeln!(out, "VIOLATION       {v}");
        }
        let _ = writeln!(
            out,
            "verdict         {}",
            serde_json::to_value(self.verdict).unwrap().as_str().unwrap()
        );
        out
    }
}

/// One row of a prime sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub knot: String,
    pub prime: u64,
    pub predicted_periods: Vec<u64>,
    pub exact: bool,
    pub oracle_periods: Option<Vec<u64>>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl From<&AnalysisReport> for SweepRow {
    fn from(r: &AnalysisReport) -> Self {
        Self {
            knot: r.knot.clone(),
            prime: r.prime,
            predicted_periods: r.predicted_periods.clone(),
            exact: r.exact,
            oracle_periods: r.oracle_periods.clone(),
            verdict: r.verdict,
            notes: r.notes.clone(),
        }
    }
}

/// Runs `analyze` over every (knot, prime) pair, in parallel across pairs.
pub fn sweep(
    knots: &[KnotInput],
    primes: &[PrimeModulus],
    opts: AnalyzeOptions,
) -> Vec<Result<AnalysisReport, AnalysisError>> {
    let jobs: Vec<(&KnotInput, PrimeModulus)> =
        knots.iter().flat_map(|k| primes.iter().map(move |&p| (k, p))).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(k, p)| scope.spawn(move || analyze(k, p, opts)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("analysis thread panicked"))
            .collect()
    })
}

pub fn sweep_table(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<12} {:>5}  {:<28} {:<28} {:<8}",
        "knot", "p", "predicted", "oracle", "verdict"
    );
    for r in rows {
        let oracle = r.oracle_periods.as_deref().map(set).unwrap_or_else(|| "-".into());
        let verdict = serde_json::to_value(r.verdict).unwrap().as_str().unwrap().to_string();
        let _ = writeln!(
            out,
            "{:<12} {:>5}  {:<28} {:<28} {:<8}",
            r.knot,
            r.prime,
            set(&r.predicted_periods),
            oracle,
            verdict
        );
        for n in &r.notes {
            let _ = writeln!(out, "{:<12} {:>5}  note: {n}", "", "");
        }
    }
    out
}

/// Set of periods as a `BTreeSet`, for callers comparing reports.
pub fn period_set(xs: &[u64]) -> BTreeSet<u64> {
    xs.iter().copied().collect()
}
