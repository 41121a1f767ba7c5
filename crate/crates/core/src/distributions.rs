//! Finite probability and possibility distributions over a symbol alphabet.
//!
//! A [`ProbWord`] is a probability distribution over an [`Alphabet`]; a
//! [`FuzzyWord`] is a possibility distribution (a fuzzy subset). Both are
//! identified with row vectors in the alphabet's declared coordinate order,
//! which is what the linear-algebra helpers ([`linear_combine`],
//! [`decompose_in_basis`], [`euclidean_distance`]) operate on.
//!
//! Text form uses Zadeh's notation, `0.9\a + 0.1\b`, where omitted symbols
//! carry weight zero.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Slack allowed on the total mass of a distribution.
pub const TOL_NORM: f64 = 1e-9;
/// Residual bound for basis decompositions.
pub const TOL_SOLVE: f64 = 1e-9;
/// Pivots below this magnitude mark a basis as singular.
pub const TOL_RANK: f64 = 1e-12;

// Sums this close to 1 are stored as given, which keeps text round-trips
// bit-identical.
const RENORM_SLACK: f64 = 64.0 * f64::EPSILON;

/// Whether `name` can be used as a symbol, label, or state name.
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || c == '\\' || c == '+')
}

/// An ordered, nonempty set of distinct symbol names.
#[derive(Clone, Eq)]
pub struct Alphabet {
    symbols: Arc<[String]>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if !is_valid_name(s) {
                return Err(Error::InvalidAlphabet(format!("`{s}` is not a valid symbol name")));
            }
            if symbols[..i].contains(s) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Alphabet { symbols: symbols.into() })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    pub fn position(&self, symbol: &str) -> Result<usize> {
        self.index_of(symbol).ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    /// Sub-alphabet keeping the symbols at `indices`, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Result<Alphabet> {
        Alphabet::new(indices.iter().map(|&i| self.symbols[i].clone()))
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.symbols, &other.symbols) || self.symbols == other.symbols
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.symbols.iter()).finish()
    }
}

/// Anything that assigns one real number to each symbol of an alphabet.
pub trait SymbolVector {
    fn alphabet(&self) -> &Alphabet;
    fn values(&self) -> &[f64];

    fn value_of(&self, symbol: &str) -> Result<f64> {
        Ok(self.values()[self.alphabet().position(symbol)?])
    }
}

/// A probability distribution over an alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbWord {
    alphabet: Alphabet,
    weights: Vec<f64>,
}

impl ProbWord {
    /// Weights are given in alphabet order. Entries within [`TOL_NORM`] of
    /// `[0, 1]` are clamped, and a total mass within [`TOL_NORM`] of 1 is
    /// renormalized.
    pub fn new(alphabet: &Alphabet, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != alphabet.len() {
            return Err(Error::NotADistribution(format!(
                "{} weights for an alphabet of {} symbols",
                weights.len(),
                alphabet.len()
            )));
        }
        let weights = normalize_weights(weights)?;
        Ok(ProbWord { alphabet: alphabet.clone(), weights })
    }

    pub fn from_pairs(alphabet: &Alphabet, pairs: &[(&str, f64)]) -> Result<Self> {
        let mut weights = vec![0.0; alphabet.len()];
        let mut seen = vec![false; alphabet.len()];
        for &(symbol, w) in pairs {
            let i = alphabet.position(symbol)?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::DuplicateSymbol(symbol.to_string()));
            }
            weights[i] = w;
        }
        ProbWord::new(alphabet, weights)
    }

    pub fn dirac(alphabet: &Alphabet, symbol: &str) -> Result<Self> {
        Ok(ProbWord::dirac_at(alphabet, alphabet.position(symbol)?))
    }

    pub fn dirac_at(alphabet: &Alphabet, index: usize) -> Self {
        let mut weights = vec![0.0; alphabet.len()];
        weights[index] = 1.0;
        ProbWord { alphabet: alphabet.clone(), weights }
    }

    pub fn uniform(alphabet: &Alphabet) -> Self {
        let n = alphabet.len();
        ProbWord { alphabet: alphabet.clone(), weights: vec![1.0 / n as f64; n] }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, symbol: &str) -> Result<f64> {
        self.value_of(symbol)
    }

    pub fn support(&self) -> Vec<&str> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(i, _)| self.alphabet.symbol(i))
            .collect()
    }

    pub fn to_vector(&self) -> RealVector {
        RealVector { alphabet: self.alphabet.clone(), entries: self.weights.clone() }
    }

    pub fn to_fuzzy(&self) -> FuzzyWord {
        FuzzyWord { alphabet: self.alphabet.clone(), memberships: self.weights.clone() }
    }
}

impl SymbolVector for ProbWord {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
    fn values(&self) -> &[f64] {
        &self.weights
    }
}

/// A possibility distribution (fuzzy subset) over an alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyWord {
    alphabet: Alphabet,
    memberships: Vec<f64>,
}

impl FuzzyWord {
    pub fn new(alphabet: &Alphabet, memberships: Vec<f64>) -> Result<Self> {
        if memberships.len() != alphabet.len() {
            return Err(Error::InvalidArgument(format!(
                "{} memberships for an alphabet of {} symbols",
                memberships.len(),
                alphabet.len()
            )));
        }
        let mut memberships = memberships;
        for (i, m) in memberships.iter_mut().enumerate() {
            if !m.is_finite() || *m < -TOL_NORM || *m > 1.0 + TOL_NORM {
                return Err(Error::WeightOutOfRange {
                    symbol: alphabet.symbol(i).to_string(),
                    value: *m,
                });
            }
            *m = m.clamp(0.0, 1.0);
        }
        if memberships.iter().sum::<f64>() <= 0.0 {
            return Err(Error::ZeroFuzzyWord);
        }
        Ok(FuzzyWord { alphabet: alphabet.clone(), memberships })
    }

    pub fn from_pairs(alphabet: &Alphabet, pairs: &[(&str, f64)]) -> Result<Self> {
        let mut memberships = vec![0.0; alphabet.len()];
        let mut seen = vec![false; alphabet.len()];
        for &(symbol, m) in pairs {
            let i = alphabet.position(symbol)?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::DuplicateSymbol(symbol.to_string()));
            }
            memberships[i] = m;
        }
        FuzzyWord::new(alphabet, memberships)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn memberships(&self) -> &[f64] {
        &self.memberships
    }

    /// Total membership, the normalizer of [`normalize_fuzzy`].
    pub fn mass(&self) -> f64 {
        self.memberships.iter().sum()
    }
}

impl SymbolVector for FuzzyWord {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
    fn values(&self) -> &[f64] {
        &self.memberships
    }
}

/// An arbitrary real vector indexed by symbols. Linear combinations of words
/// land here; [`as_word`] converts back when the result is stochastic.
#[derive(Clone, Debug, PartialEq)]
pub struct RealVector {
    alphabet: Alphabet,
    entries: Vec<f64>,
}

impl RealVector {
    pub fn new(alphabet: &Alphabet, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != alphabet.len() {
            return Err(Error::InvalidArgument(format!(
                "{} entries for an alphabet of {} symbols",
                entries.len(),
                alphabet.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| !e.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite entry {bad}")));
        }
        Ok(RealVector { alphabet: alphabet.clone(), entries })
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

impl SymbolVector for RealVector {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
    fn values(&self) -> &[f64] {
        &self.entries
    }
}

fn normalize_weights(mut weights: Vec<f64>) -> Result<Vec<f64>> {
    for w in &weights {
        if !w.is_finite() || *w < -TOL_NORM || *w > 1.0 + TOL_NORM {
            return Err(Error::NotADistribution(format!("entry {w} is outside [0, 1]")));
        }
    }
    for w in weights.iter_mut() {
        *w = w.clamp(0.0, 1.0);
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > TOL_NORM {
        return Err(Error::NotADistribution(format!("entries sum to {sum}")));
    }
    if (sum - 1.0).abs() > RENORM_SLACK {
        for w in weights.iter_mut() {
            *w /= sum;
        }
    }
    Ok(weights)
}

pub fn dirac(symbol: &str, alphabet: &Alphabet) -> Result<ProbWord> {
    ProbWord::dirac(alphabet, symbol)
}

/// `λ·μ`, which is generally not a distribution.
pub fn scalar_mul(lambda: f64, word: &ProbWord) -> Result<RealVector> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::ScalarOutOfRange(lambda));
    }
    Ok(RealVector {
        alphabet: word.alphabet.clone(),
        entries: word.weights.iter().map(|w| lambda * w).collect(),
    })
}

/// `Σ kᵢ·Wᵢ` computed coordinate-wise.
pub fn linear_combine<W: SymbolVector>(terms: &[(f64, &W)]) -> Result<RealVector> {
    let (_, first) = terms
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty linear combination".into()))?;
    let alphabet = first.alphabet().clone();
    let mut entries = vec![0.0; alphabet.len()];
    for (k, w) in terms {
        if *w.alphabet() != alphabet {
            return Err(Error::MixedAlphabets);
        }
        for (e, v) in entries.iter_mut().zip(w.values()) {
            *e += k * v;
        }
    }
    RealVector::new(&alphabet, entries)
}

/// Accepts a vector as a word when it is stochastic up to [`TOL_NORM`].
pub fn as_word(v: &RealVector) -> Result<ProbWord> {
    ProbWord::new(&v.alphabet, v.entries.clone())
}

/// `‖W′‖(σ) = W′(σ) / Σ_τ W′(τ)`.
pub fn normalize_fuzzy(word: &FuzzyWord) -> ProbWord {
    let mass = word.mass();
    let weights: Vec<f64> = word.memberships.iter().map(|m| m / mass).collect();
    ProbWord::new(&word.alphabet, weights).expect("normalized fuzzy word is stochastic")
}

pub fn euclidean_distance<A: SymbolVector, B: SymbolVector>(x: &A, y: &B) -> Result<f64> {
    if x.alphabet() != y.alphabet() {
        return Err(Error::MixedAlphabets);
    }
    Ok(x.values()
        .iter()
        .zip(y.values())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

/// Coefficients `k` with `target = Σ kᵢ·basisᵢ`, by Gaussian elimination with
/// partial pivoting. The basis must hold exactly `|Σ|` vectors.
pub fn decompose_in_basis<T: SymbolVector, B: SymbolVector>(
    target: &T,
    basis: &[B],
) -> Result<Vec<f64>> {
    let alphabet = target.alphabet();
    let n = alphabet.len();
    if basis.len() != n {
        return Err(Error::BasisSize { expected: n, got: basis.len() });
    }
    if basis.iter().any(|b| b.alphabet() != alphabet) {
        return Err(Error::MixedAlphabets);
    }
    // Augmented system: row j is coordinate σⱼ, column i is basis word i.
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut row: Vec<f64> = basis.iter().map(|b| b.values()[j]).collect();
            row.push(target.values()[j]);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .expect("nonempty range");
        if m[pivot][col].abs() < TOL_RANK {
            return Err(Error::LinearlyDependentBasis);
        }
        m.swap(col, pivot);
        for r in col + 1..n {
            let factor = m[r][col] / m[col][col];
            if factor != 0.0 {
                let (upper, lower) = m.split_at_mut(r);
                for (x, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                    *x -= factor * p;
                }
            }
        }
    }
    let mut k = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|c| m[row][c] * k[c]).sum();
        k[row] = (m[row][n] - tail) / m[row][row];
    }
    let residual = (0..n)
        .map(|j| {
            let combined: f64 = basis.iter().zip(&k).map(|(b, ki)| ki * b.values()[j]).sum();
            (combined - target.values()[j]).abs()
        })
        .fold(0.0, f64::max);
    if residual.is_nan() || residual > TOL_SOLVE {
        return Err(Error::LinearlyDependentBasis);
    }
    Ok(k)
}

/// Parses Zadeh notation into `(symbol, weight)` terms in source order.
///
/// Grammar: `term ("+" term)*`, `term := number "\" symbol`, whitespace
/// allowed around every token.
pub fn parse_zadeh_terms(text: &str) -> Result<Vec<(String, f64)>> {
    let mut p = ZadehParser { text, pos: 0 };
    let mut terms = Vec::new();
    loop {
        p.skip_ws();
        let weight = p.number()?;
        p.skip_ws();
        p.expect('\\')?;
        p.skip_ws();
        let symbol = p.symbol()?;
        if terms.iter().any(|(s, _): &(String, f64)| *s == symbol) {
            return Err(Error::DuplicateSymbol(symbol));
        }
        terms.push((symbol, weight));
        p.skip_ws();
        if p.at_end() {
            return Ok(terms);
        }
        p.expect('+')?;
    }
}

struct ZadehParser<'a> {
    text: &'a str,
    pos: usize,
}

impl ZadehParser<'_> {
    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn number(&mut self) -> Result<f64> {
        let bytes = self.rest().as_bytes();
        let mut end = 0;
        while end < bytes.len() {
            let b = bytes[end];
            let signed_exponent =
                (b == b'+' || b == b'-') && end > 0 && matches!(bytes[end - 1], b'e' | b'E');
            if b.is_ascii_digit() || b == b'.' || b == b'e' || b == b'E' || signed_exponent {
                end += 1;
            } else {
                break;
            }
        }
        if end == 0 {
            return Err(self.error("expected a weight"));
        }
        let token = &self.rest()[..end];
        let value = token
            .parse::<f64>()
            .map_err(|_| self.error(format!("`{token}` is not a number")))?;
        self.pos += end;
        Ok(value)
    }

    fn symbol(&mut self) -> Result<String> {
        let len = self
            .rest()
            .find(|c: char| c.is_whitespace() || c == '\\' || c == '+')
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected a symbol"));
        }
        let s = self.rest()[..len].to_string();
        self.pos += len;
        Ok(s)
    }
}

fn terms_to_vector(text: &str, alphabet: &Alphabet) -> Result<Vec<f64>> {
    let mut values = vec![0.0; alphabet.len()];
    for (symbol, w) in parse_zadeh_terms(text)? {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::WeightOutOfRange { symbol, value: w });
        }
        values[alphabet.position(&symbol)?] = w;
    }
    Ok(values)
}

pub fn parse_zadeh(text: &str, alphabet: &Alphabet) -> Result<ProbWord> {
    ProbWord::new(alphabet, terms_to_vector(text, alphabet)?)
}

pub fn parse_zadeh_fuzzy(text: &str, alphabet: &Alphabet) -> Result<FuzzyWord> {
    FuzzyWord::new(alphabet, terms_to_vector(text, alphabet)?)
}

fn write_zadeh(f: &mut fmt::Formatter<'_>, alphabet: &Alphabet, values: &[f64]) -> fmt::Result {
    let mut first = true;
    for (i, v) in values.iter().enumerate() {
        if *v == 0.0 {
            continue;
        }
        if !first {
            f.write_str(" + ")?;
        }
        first = false;
        write!(f, "{v}\\{}", alphabet.symbol(i))?;
    }
    Ok(())
}

impl fmt::Display for ProbWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_zadeh(f, &self.alphabet, &self.weights)
    }
}

impl fmt::Display for FuzzyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_zadeh(f, &self.alphabet, &self.memberships)
    }
}
