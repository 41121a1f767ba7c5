//! Operators between word-labeled automata, crisp automata, and all-words
//! automata.
//!
//! * [`retract`] turns a word-labeled automaton into a crisp one by
//!   conditioning on the observed symbol:
//!   `δ↓(p, σ) = Σ_W χ_σ(W)·δ(p, W)` with `χ_σ(W) = W(σ) / Σ_U U(σ)`.
//! * [`generalized_extend`] accepts any word `W′` over the underlying
//!   alphabet: `δ↑(p, W′) = Σ_W θ_{W′}(W)·δ(p, W)` with
//!   `θ_{W′}(W) = Σ_σ W′(σ)·χ_σ(W)`. It is stored as the retraction plus
//!   lazy mixing of its rows, which is the same function; the θ route is
//!   kept as [`GeneralizedExtension::eval_eq3`] for cross-checking.
//! * [`pacv_extend`] is the plain extension of a crisp automaton.
//!
//! A symbol with `Σ_U U(σ) = 0` is *uncovered*: χ is undefined there, and
//! every operator here refuses it unless the alphabet is explicitly
//! restricted.

use crate::automata::{InputLabel, LabelKind, LazyExtensionAutomaton, StateDistribution, WordAutomaton};
use crate::distributions::{
    decompose_in_basis, normalize_fuzzy, Alphabet, FuzzyWord, ProbWord, TOL_NORM,
};
use crate::error::{Error, Result};

/// `χ_σ(W)` for every symbol and label of one label set.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiTable {
    alphabet: Alphabet,
    label_names: Vec<String>,
    // [symbol][label]
    weights: Vec<f64>,
    column_sums: Vec<f64>,
}

impl ChiTable {
    pub fn from_labels(alphabet: &Alphabet, labels: &[InputLabel]) -> Self {
        let n = alphabet.len();
        let nl = labels.len();
        let mut weights = vec![0.0; n * nl];
        let mut column_sums = vec![0.0; n];
        for sigma in 0..n {
            let total: f64 = labels.iter().map(|l| l.membership(sigma)).sum();
            column_sums[sigma] = total;
            if total > 0.0 {
                for (w, label) in labels.iter().enumerate() {
                    weights[sigma * nl + w] = label.membership(sigma) / total;
                }
            }
        }
        ChiTable {
            alphabet: alphabet.clone(),
            label_names: labels.iter().map(|l| l.name().to_string()).collect(),
            weights,
            column_sums,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    /// `Σ_U U(σ)` per symbol.
    pub fn column_sums(&self) -> &[f64] {
        &self.column_sums
    }

    pub fn is_covered(&self, symbol: usize) -> bool {
        self.column_sums[symbol] > 0.0
    }

    pub fn covered(&self) -> Vec<usize> {
        (0..self.alphabet.len()).filter(|&s| self.is_covered(s)).collect()
    }

    pub fn uncovered(&self) -> Vec<String> {
        (0..self.alphabet.len())
            .filter(|&s| !self.is_covered(s))
            .map(|s| self.alphabet.symbol(s).to_string())
            .collect()
    }

    fn require_full_coverage(&self) -> Result<()> {
        let missing = self.uncovered();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::UncoveredSymbols(missing))
        }
    }

    /// Distribution `W ↦ χ_σ(W)` over the labels.
    pub fn chi(&self, symbol: usize) -> Result<&[f64]> {
        if !self.is_covered(symbol) {
            return Err(Error::UncoveredSymbols(vec![self.alphabet.symbol(symbol).to_string()]));
        }
        let nl = self.label_names.len();
        Ok(&self.weights[symbol * nl..(symbol + 1) * nl])
    }

    fn theta_of(&self, query: &[f64]) -> Vec<f64> {
        let nl = self.label_names.len();
        let mut theta = vec![0.0; nl];
        for (sigma, &q) in query.iter().enumerate() {
            if q == 0.0 {
                continue;
            }
            for (t, c) in theta.iter_mut().zip(&self.weights[sigma * nl..(sigma + 1) * nl]) {
                *t += q * c;
            }
        }
        theta
    }

    /// `θ_{W′}(W) = Σ_σ W′(σ)·χ_σ(W)`.
    pub fn theta(&self, query: &ProbWord) -> Result<Vec<f64>> {
        if query.alphabet() != &self.alphabet {
            return Err(Error::MixedAlphabets);
        }
        self.require_full_coverage()?;
        Ok(self.theta_of(query.weights()))
    }

    /// `θ̃_{W′}(W) = Σ_σ ‖W′‖(σ)·χ_σ(W)`.
    pub fn theta_fuzzy(&self, query: &FuzzyWord) -> Result<Vec<f64>> {
        self.theta(&normalize_fuzzy(query))
    }
}

pub fn chi_table(m: &WordAutomaton) -> ChiTable {
    ChiTable::from_labels(m.alphabet(), m.labels())
}

/// `χ_σ(·)` as a distribution over the labels of `m`, in label order.
pub fn chi(m: &WordAutomaton, symbol: &str) -> Result<Vec<f64>> {
    let sigma = m.alphabet().position(symbol)?;
    Ok(chi_table(m).chi(sigma)?.to_vec())
}

/// `θ_{W′}(·)` as a distribution over the labels of `m`, in label order.
pub fn theta(m: &WordAutomaton, query: &ProbWord) -> Result<Vec<f64>> {
    chi_table(m).theta(query)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RetractOptions {
    /// Drop uncovered symbols from the alphabet instead of failing.
    pub restrict_alphabet: bool,
}

/// Symbols kept by a retraction and the alphabet they form.
pub(crate) fn retained_symbols(chi: &ChiTable, options: RetractOptions) -> Result<(Vec<usize>, Alphabet)> {
    if options.restrict_alphabet {
        let kept = chi.covered();
        if kept.is_empty() {
            return Err(Error::UncoveredSymbols(chi.uncovered()));
        }
        let alphabet = chi.alphabet().restrict(&kept)?;
        Ok((kept, alphabet))
    } else {
        chi.require_full_coverage()?;
        Ok(((0..chi.alphabet().len()).collect(), chi.alphabet().clone()))
    }
}

pub fn retract(m: &WordAutomaton) -> Result<WordAutomaton> {
    retract_with(m, RetractOptions::default())
}

/// The crisp automaton `(Q, Σ, δ↓, q₀, F)`.
pub fn retract_with(m: &WordAutomaton, options: RetractOptions) -> Result<WordAutomaton> {
    let table = chi_table(m);
    let (kept, alphabet) = retained_symbols(&table, options)?;
    let n = m.n_states();
    let rows: Vec<Vec<Vec<f64>>> = (0..n)
        .map(|p| {
            kept.iter()
                .map(|&sigma| {
                    let chi = table.chi(sigma).expect("retained symbols are covered");
                    let mut row = vec![0.0; n];
                    for (w, &c) in chi.iter().enumerate() {
                        for (acc, t) in row.iter_mut().zip(m.row(p, w)) {
                            *acc += c * t;
                        }
                    }
                    row
                })
                .collect()
        })
        .collect();
    let labels = alphabet
        .symbols()
        .iter()
        .map(|s| InputLabel::crisp(&alphabet, s))
        .collect::<Result<Vec<_>>>()?;
    WordAutomaton::from_rows(
        m.states().to_vec(),
        alphabet,
        labels,
        rows,
        m.initial(),
        m.final_mask().to_vec(),
    )
    .map_err(|e| Error::Internal(format!("retraction produced an invalid automaton: {e}")))
}

/// The all-words automaton `(Q, D(Σ), δ↑, q₀, F)` of a word-labeled automaton.
#[derive(Clone, Debug)]
pub struct GeneralizedExtension {
    source: WordAutomaton,
    chi: ChiTable,
    lazy: LazyExtensionAutomaton,
}

pub fn generalized_extend(m: &WordAutomaton) -> Result<GeneralizedExtension> {
    let lazy = LazyExtensionAutomaton::new(retract(m)?)?;
    Ok(GeneralizedExtension { source: m.clone(), chi: chi_table(m), lazy })
}

impl GeneralizedExtension {
    pub fn source(&self) -> &WordAutomaton {
        &self.source
    }

    pub fn chi_table(&self) -> &ChiTable {
        &self.chi
    }

    pub fn retraction(&self) -> &WordAutomaton {
        self.lazy.base()
    }

    pub fn lazy(&self) -> &LazyExtensionAutomaton {
        &self.lazy
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.source.alphabet()
    }

    /// `δ↑(p, W′)` via the retraction rows.
    pub fn step(&self, state: usize, word: &ProbWord) -> Result<StateDistribution> {
        self.lazy.lazy_step(state, word)
    }

    /// `δ↑(p, W′) = Σ_W θ_{W′}(W)·δ(p, W)`, straight from the source rows.
    pub fn eval_eq3(&self, state: usize, word: &ProbWord) -> Result<StateDistribution> {
        if state >= self.source.n_states() {
            return Err(Error::UnknownState(format!("#{state}")));
        }
        let theta = self.chi.theta(word)?;
        let mut out = vec![0.0; self.source.n_states()];
        for (w, &t) in theta.iter().enumerate() {
            for (acc, x) in out.iter_mut().zip(self.source.row(state, w)) {
                *acc += t * x;
            }
        }
        Ok(StateDistribution::from_vec_unchecked(out))
    }

    pub fn run(&self, input: &[ProbWord]) -> Result<StateDistribution> {
        self.lazy.lazy_run(input)
    }

    pub fn accept(&self, input: &[ProbWord]) -> Result<f64> {
        self.lazy.lazy_accept(input)
    }

    /// Acceptance computed with [`eval_eq3`](Self::eval_eq3) at every step.
    pub fn accept_eq3(&self, input: &[ProbWord]) -> Result<f64> {
        let n = self.source.n_states();
        let mut dist = StateDistribution::dirac(n, self.source.initial()).into_vec();
        for word in input {
            let mut next = vec![0.0; n];
            for (p, &mass) in dist.iter().enumerate() {
                if mass == 0.0 {
                    continue;
                }
                for (acc, t) in next.iter_mut().zip(self.eval_eq3(p, word)?.probs()) {
                    *acc += mass * t;
                }
            }
            dist = next;
        }
        Ok(self.source.finals_mass(&StateDistribution::from_vec_unchecked(dist)))
    }
}

/// The extension of a crisp automaton, `δ̂(p, W) = Σ_σ W(σ)·δ(p, σ)`.
pub fn pacv_extend(m: &WordAutomaton) -> Result<LazyExtensionAutomaton> {
    LazyExtensionAutomaton::new(m.clone())
}

/// Views a crisp automaton as a word-labeled one whose labels are the Dirac
/// words of its symbols (label names are kept).
pub fn dirac_identify(m: &WordAutomaton) -> Result<WordAutomaton> {
    let labels = m
        .labels()
        .iter()
        .map(|l| match l.kind() {
            LabelKind::Crisp(i) => Ok(InputLabel::word(l.name(), ProbWord::dirac_at(m.alphabet(), *i))),
            _ => Err(Error::NotCrisp(l.name().to_string())),
        })
        .collect::<Result<Vec<_>>>()?;
    WordAutomaton::from_rows(
        m.states().to_vec(),
        m.alphabet().clone(),
        labels,
        m.dense_rows(),
        m.initial(),
        m.final_mask().to_vec(),
    )
}

/// Generalized extension over possibility distributions: queries are
/// normalized, `δ↑(p, W′) = Σ_W θ̃_{W′}(W)·δ(p, W)`. Coverage uses the raw
/// memberships of the labels.
#[derive(Clone, Debug)]
pub struct FuzzyExtension {
    inner: GeneralizedExtension,
}

pub fn fuzzy_generalized_extend(m: &WordAutomaton) -> Result<FuzzyExtension> {
    Ok(FuzzyExtension { inner: generalized_extend(m)? })
}

impl FuzzyExtension {
    pub fn inner(&self) -> &GeneralizedExtension {
        &self.inner
    }

    pub fn step(&self, state: usize, word: &FuzzyWord) -> Result<StateDistribution> {
        self.inner.step(state, &normalize_fuzzy(word))
    }

    /// The θ̃ route, independent of the retraction rows.
    pub fn eval_theta(&self, state: usize, word: &FuzzyWord) -> Result<StateDistribution> {
        self.inner.eval_eq3(state, &normalize_fuzzy(word))
    }

    pub fn accept(&self, input: &[FuzzyWord]) -> Result<f64> {
        let words: Vec<ProbWord> = input.iter().map(normalize_fuzzy).collect();
        self.inner.accept(&words)
    }
}

fn combine_rows(rows: impl Iterator<Item = (f64, StateDistribution)>, n: usize) -> Result<StateDistribution> {
    let mut out = vec![0.0; n];
    for (k, row) in rows {
        for (acc, t) in out.iter_mut().zip(row.probs()) {
            *acc += k * t;
        }
    }
    let sum: f64 = out.iter().sum();
    if (sum - 1.0).abs() > TOL_NORM || out.iter().any(|p| *p < -TOL_NORM) {
        return Err(Error::Internal(format!("basis combination is not stochastic (sum {sum})")));
    }
    Ok(StateDistribution::from_vec_unchecked(out))
}

/// `δ↑(p, W′)` through an arbitrary basis: write `W′ = Σ kᵢ·W′ᵢ`, then
/// return `Σ kᵢ·δ↑(p, W′ᵢ)`. Coefficients may be negative.
pub fn extend_via_basis(
    e: &LazyExtensionAutomaton,
    state: usize,
    word: &ProbWord,
    basis: &[ProbWord],
) -> Result<StateDistribution> {
    let k = decompose_in_basis(word, basis)?;
    let rows = k
        .iter()
        .zip(basis)
        .map(|(&ki, b)| Ok((ki, e.lazy_step(state, b)?)))
        .collect::<Result<Vec<_>>>()?;
    combine_rows(rows.into_iter(), e.n_states())
}

/// Basis route for fuzzy queries. With `W′ = Σ kᵢ·W′ᵢ`, the weights are
/// `kᵢ·|W′ᵢ| / |W′|` where `|·|` is total membership; for unit-mass basis
/// words this is `kᵢ / Σ_σ W′(σ)`.
pub fn fuzzy_extend_via_basis(
    e: &FuzzyExtension,
    state: usize,
    word: &FuzzyWord,
    basis: &[FuzzyWord],
) -> Result<StateDistribution> {
    let k = decompose_in_basis(word, basis)?;
    let mass = word.mass();
    let rows = k
        .iter()
        .zip(basis)
        .map(|(&ki, b)| Ok((ki * b.mass() / mass, e.step(state, b)?)))
        .collect::<Result<Vec<_>>>()?;
    combine_rows(rows.into_iter(), e.inner.source.n_states())
}
