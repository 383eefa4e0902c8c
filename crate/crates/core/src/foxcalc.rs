//! Knot group presentations, Fox free derivatives and the Alexander matrix.
//!
//! The Alexander matrix has one row per relator and one column per
//! generator other than the distinguished meridian; entry `(i, k)` is the
//! image of `∂r_i/∂g_k` under the abelianization `g ↦ t^{κ(g)}`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::field::PrimeModulus;
use crate::matrix::FpMatrix;
use crate::poly::Poly;

/// Largest accepted exponent magnitude in a relator token. `∂g^k/∂g` has
/// `|k|` terms, so this also bounds the size of every derivative.
pub const MAX_EXPONENT: i64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoxError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown generator `{name}` at line {line}, column {col}")]
    UnknownGenerator { name: String, line: usize, col: usize },
    #[error("relator {index} (line {line}) has total kappa-weight {weight}, expected 0")]
    KappaWeightNonzero { index: usize, line: usize, weight: i64 },
    #[error("no distinguished generator declared (missing `dist` line)")]
    NoDistinguishedGenerator,
    #[error("distinguished generator `{name}` has kappa {kappa}, expected 1")]
    DistinguishedKappa { name: String, kappa: i64 },
    #[error("no generators declared (missing `gens` line)")]
    NoGenerators,
    #[error("{relators} relators for {generators} generators; a knot group presentation needs generators - 1")]
    ShapeMismatch { generators: usize, relators: usize },
    #[error("Alexander matrix vanishes mod {0}")]
    ZeroMatrixModP(u64),
    #[error("Alexander matrix at t = 1 has determinant {0}, expected ±1 for a knot group")]
    NotUnitAtOne(i128),
    #[error("integer overflow while evaluating the Alexander matrix")]
    Overflow,
}

/// A freely reduced word: adjacent letters use distinct generators and
/// exponents are nonzero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<(usize, i64)>);

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Self(vec![(g, 1)])
    }

    pub fn power(g: usize, e: i64) -> Self {
        Self::from_letters([(g, e)])
    }

    /// Freely reduces the letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (g, e) in letters {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((h, f)) if *h == g => {
                    *f += e;
                    if *f == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Self(out)
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_letters(self.0.iter().chain(&other.0).copied())
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    /// Total exponent weighted by `kappa`.
    pub fn weight(&self, kappa: &[i64]) -> i64 {
        self.0.iter().map(|&(g, e)| e * kappa[g]).sum()
    }
}

/// Finite integer combination of group words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::identity())
    }

    pub fn from_word(w: Word) -> Self {
        Self::from_terms([(w, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, i64)>) -> Self {
        let mut e = Self::zero();
        for (w, c) in terms {
            e.add_term(w, c);
        }
        e
    }

    pub fn terms(&self) -> &BTreeMap<Word, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, w: Word, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(w) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, &a) in &self.terms {
            for (v, &b) in &other.terms {
                out.add_term(u.mul(v), a * b);
            }
        }
        out
    }

    /// Left multiplication by a single word.
    pub fn left_mul(&self, w: &Word) -> Self {
        Self::from_terms(self.terms.iter().map(|(v, &c)| (w.mul(v), c)))
    }
}

/// Integer Laurent polynomial in `t`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntLaurentPoly {
    terms: BTreeMap<i64, i64>,
}

impl IntLaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    /// Ordinary polynomial with coefficients low-degree-first.
    pub fn from_coeffs(coeffs: &[i64]) -> Self {
        Self::from_terms(coeffs.iter().enumerate().map(|(i, &c)| (i as i64, c)))
    }

    fn add_term(&mut self, e: i64, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(e).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i64) -> i64 {
        self.terms.get(&e).copied().unwrap_or(0)
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&e, &a) in &self.terms {
            for (&f, &b) in &other.terms {
                out.add_term(e + f, a * b);
            }
        }
        out
    }

    /// Multiplies by `t^s`.
    pub fn shift(&self, s: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(&e, &c)| (e + s, c)))
    }

    pub fn eval_at_one(&self) -> i128 {
        self.terms.values().map(|&c| c as i128).sum()
    }

    /// Normalized so the lowest exponent is zero and the lowest coefficient
    /// positive, making polynomials equal up to units `±t^s` compare equal.
    pub fn normalized(&self) -> Self {
        let Some(lo) = self.min_exponent() else {
            return Self::zero();
        };
        let sign = if self.terms[&lo] < 0 { -1 } else { 1 };
        Self::from_terms(self.terms.iter().map(|(&e, &c)| (e - lo, sign * c)))
    }
}

impl fmt::Display for IntLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&e, &c)) in self.terms.iter().enumerate() {
            let sign = if c < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            let a = c.unsigned_abs();
            match (e, a) {
                (0, a) => write!(f, "{a}")?,
                (1, 1) => write!(f, "t")?,
                (1, a) => write!(f, "{a}t")?,
                (e, 1) => write!(f, "t^{e}")?,
                (e, a) => write!(f, "{a}t^{e}")?,
            }
        }
        Ok(())
    }
}

/// A knot group presentation with κ-weights on the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub kappa: Vec<i64>,
    pub distinguished: usize,
    pub relators: Vec<Word>,
    /// Source lines of relators that reduced to the empty word and were dropped.
    pub dropped_relators: Vec<usize>,
}

impl Presentation {
    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

fn syntax(tok: &Token<'_>, msg: impl Into<String>) -> FoxError {
    FoxError::Syntax {
        line: tok.line,
        col: tok.col,
        msg: msg.into(),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Splits the text into statements: newline- or `;`-separated, `#` starts a comment.
fn statements(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut offset = 0;
        for part in line.split(';') {
            let mut toks = Vec::new();
            let mut start: Option<usize> = None;
            for (i, c) in part.char_indices().chain(std::iter::once((part.len(), ' '))) {
                match (c.is_whitespace(), start) {
                    (false, None) => start = Some(i),
                    (true, Some(s)) => {
                        toks.push(Token {
                            text: &part[s..i],
                            line: ln + 1,
                            col: line[..offset + s].chars().count() + 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            if !toks.is_empty() {
                out.push(toks);
            }
            offset += part.len() + 1;
        }
    }
    out
}

/// Parses the line-oriented presentation format:
///
/// ```text
/// gens x y
/// kappa x=1 y=1
/// dist x
/// rel x y x y^-1 x^-1 y^-1
/// ```
///
/// Statements may also be separated by `;`. Omitted κ-weights default to 1.
pub fn parse_presentation(text: &str) -> Result<Presentation, FoxError> {
    let mut generators: Option<Vec<String>> = None;
    let mut kappa: Vec<i64> = Vec::new();
    let mut distinguished: Option<usize> = None;
    let mut relators: Vec<(Word, usize)> = Vec::new();
    let mut dropped = Vec::new();

    let lookup = |gens: &Option<Vec<String>>, tok: &Token<'_>, name: &str| -> Result<usize, FoxError> {
        let gens = gens
            .as_ref()
            .ok_or_else(|| syntax(tok, "`gens` must precede other statements"))?;
        gens.iter()
            .position(|g| g == name)
            .ok_or_else(|| FoxError::UnknownGenerator {
                name: name.to_string(),
                line: tok.line,
                col: tok.col,
            })
    };

    for stmt in statements(text) {
        let head = &stmt[0];
        let args = &stmt[1..];
        match head.text {
            "gens" => {
                if generators.is_some() {
                    return Err(syntax(head, "duplicate `gens` statement"));
                }
                if args.is_empty() {
                    return Err(syntax(head, "`gens` needs at least one generator"));
                }
                let mut names: Vec<String> = Vec::new();
                for tok in args {
                    if !is_identifier(tok.text) {
                        return Err(syntax(tok, format!("invalid generator name `{}`", tok.text)));
                    }
                    if names.iter().any(|n| n == tok.text) {
                        return Err(syntax(tok, format!("generator `{}` declared twice", tok.text)));
                    }
                    names.push(tok.text.to_string());
                }
                kappa = vec![1; names.len()];
                generators = Some(names);
            }
            "kappa" => {
                for tok in args {
                    let (name, value) = tok
                        .text
                        .split_once('=')
                        .ok_or_else(|| syntax(tok, "expected `generator=weight`"))?;
                    let g = lookup(&generators, tok, name)?;
                    kappa[g] = value
                        .parse()
                        .map_err(|_| syntax(tok, format!("invalid weight `{value}`")))?;
                }
            }
            "dist" => {
                if args.len() != 1 {
                    return Err(syntax(head, "`dist` takes exactly one generator"));
                }
                if distinguished.is_some() {
                    return Err(syntax(head, "duplicate `dist` statement"));
                }
                distinguished = Some(lookup(&generators, &args[0], args[0].text)?);
            }
            "rel" => {
                let mut letters = Vec::with_capacity(args.len());
                for tok in args {
                    let (name, exp) = match tok.text.split_once('^') {
                        Some((name, exp)) => {
                            let e: i64 = exp
                                .parse()
                                .map_err(|_| syntax(tok, format!("invalid exponent `{exp}`")))?;
                            (name, e)
                        }
                        None => (tok.text, 1),
                    };
                    if exp.abs() > MAX_EXPONENT {
                        return Err(syntax(
                            tok,
                            format!("exponent {exp} exceeds {MAX_EXPONENT} in magnitude"),
                        ));
                    }
                    letters.push((lookup(&generators, tok, name)?, exp));
                }
                let word = Word::from_letters(letters);
                if word.is_identity() {
                    dropped.push(head.line);
                } else {
                    relators.push((word, head.line));
                }
            }
            other => return Err(syntax(head, format!("unknown statement `{other}`"))),
        }
    }

    let generators = generators.ok_or(FoxError::NoGenerators)?;
    let distinguished = distinguished.ok_or(FoxError::NoDistinguishedGenerator)?;
    if kappa[distinguished] != 1 {
        return Err(FoxError::DistinguishedKappa {
            name: generators[distinguished].clone(),
            kappa: kappa[distinguished],
        });
    }
    for (i, (w, line)) in relators.iter().enumerate() {
        let weight = w.weight(&kappa);
        if weight != 0 {
            return Err(FoxError::KappaWeightNonzero {
                index: i + 1,
                line: *line,
                weight,
            });
        }
    }
    Ok(Presentation {
        generators,
        kappa,
        distinguished,
        relators: relators.into_iter().map(|(w, _)| w).collect(),
        dropped_relators: dropped,
    })
}

/// Fox derivative `∂w/∂g` via the Leibniz rule, letter by letter.
pub fn fox_derivative(w: &Word, g: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    let mut prefix = Word::identity();
    for &(h, e) in w.letters() {
        if h == g {
            if e > 0 {
                for k in 0..e {
                    out.add_term(prefix.mul(&Word::power(g, k)), 1);
                }
            } else {
                for k in 1..=-e {
                    out.add_term(prefix.mul(&Word::power(g, -k)), -1);
                }
            }
        }
        prefix = prefix.mul(&Word::power(h, e));
    }
    out
}

/// Abelianization `word ↦ t^{κ-weight}` extended linearly.
pub fn gamma(e: &GroupRingElement, kappa: &[i64]) -> IntLaurentPoly {
    IntLaurentPoly::from_terms(e.terms().iter().map(|(w, &c)| (w.weight(kappa), c)))
}

pub type LaurentMatrix = Vec<Vec<IntLaurentPoly>>;

/// Rows are relators, columns the non-distinguished generators in declaration order.
pub fn alexander_matrix(pres: &Presentation) -> Result<LaurentMatrix, FoxError> {
    let n = pres.generators.len();
    if pres.relators.len() + 1 != n {
        return Err(FoxError::ShapeMismatch {
            generators: n,
            relators: pres.relators.len(),
        });
    }
    Ok(pres
        .relators
        .iter()
        .map(|r| {
            (0..n)
                .filter(|&g| g != pres.distinguished)
                .map(|g| gamma(&fox_derivative(r, g), &pres.kappa))
                .collect()
        })
        .collect())
}

/// Determinant of the integer matrix obtained at `t = 1`, by Bareiss elimination.
pub fn det_at_one(m: &LaurentMatrix) -> Result<i128, FoxError> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|row| row.iter().map(IntLaurentPoly::eval_at_one).collect())
        .collect();
    if n == 0 {
        return Ok(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[k][k]
                    .checked_mul(a[i][j])
                    .zip(a[i][k].checked_mul(a[k][j]))
                    .and_then(|(x, y)| x.checked_sub(y))
                    .ok_or(FoxError::Overflow)?;
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

/// Knot groups have `det A(1) = ±1`.
pub fn check_unit_at_one(m: &LaurentMatrix) -> Result<(), FoxError> {
    match det_at_one(m)? {
        1 | -1 => Ok(()),
        d => Err(FoxError::NotUnitAtOne(d)),
    }
}

/// Matrix with entries in GF(p)[t], viewed equally as `A⁰ + A¹t + ⋯ + A^M t^M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixPoly {
    p: PrimeModulus,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl MatrixPoly {
    /// Row-major entries; panics on a length mismatch.
    pub fn from_entries(p: PrimeModulus, rows: usize, cols: usize, entries: Vec<Poly>) -> Self {
        assert_eq!(entries.len(), rows * cols, "matrix entries have the wrong length");
        Self { p, rows, cols, entries }
    }

    /// The 1×1 matrix `[f]`.
    pub fn scalar(f: Poly) -> Self {
        Self::from_entries(f.modulus(), 1, 1, vec![f])
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    /// Largest entry degree `M` (0 for the zero matrix).
    pub fn degree(&self) -> usize {
        self.entries.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    /// `A^j`: the matrix of `t^j` coefficients.
    pub fn coefficient_matrix(&self, j: usize) -> FpMatrix {
        FpMatrix::from_rows(
            self.p,
            self.rows,
            self.cols,
            self.entries.iter().map(|e| e.coeff(j)).collect(),
        )
    }

    /// `[A⁰, A¹, …, A^M]`.
    pub fn coefficient_matrices(&self) -> Vec<FpMatrix> {
        (0..=self.degree()).map(|j| self.coefficient_matrix(j)).collect()
    }
}

/// Reduces coefficients mod `p`, then multiplies the whole matrix by the
/// power of `t` that makes every entry a polynomial with some entry having a
/// nonzero constant term.
pub fn reduce_normalize(m: &LaurentMatrix, p: PrimeModulus) -> Result<MatrixPoly, FoxError> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let reduced: Vec<Vec<(i64, u64)>> = m
        .iter()
        .flatten()
        .map(|e| {
            e.terms()
                .iter()
                .map(|(&exp, &c)| (exp, p.reduce(c)))
                .filter(|&(_, c)| c != 0)
                .collect()
        })
        .collect();
    let lo = reduced
        .iter()
        .flatten()
        .map(|&(e, _)| e)
        .min()
        .ok_or(FoxError::ZeroMatrixModP(p.value()))?;
    let entries = reduced
        .into_iter()
        .map(|terms| {
            let top = terms.iter().map(|&(e, _)| (e - lo) as usize).max();
            let mut coeffs = vec![0u64; top.map_or(0, |t| t + 1)];
            for (e, c) in terms {
                coeffs[(e - lo) as usize] = c;
            }
            Poly::from_coeffs(p, coeffs)
        })
        .collect();
    Ok(MatrixPoly::from_entries(p, rows, cols, entries))
}
