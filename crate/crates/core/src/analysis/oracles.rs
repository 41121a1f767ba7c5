//! Literal enumeration of the sums that define retraction and extension
//! languages. Nothing here reuses [`crate::transforms`]: χ and θ are
//! recomputed inline so that an error in the fast paths cannot hide itself.
//!
//! Every oracle enumerates `|labels|^l` (or `|V|^l`) strings and refuses to
//! start when that exceeds the caller's budget.

use super::{check_budget, count_strings, for_each_tuple};
use crate::automata::{InputLabel, WordAutomaton};
use crate::distributions::{Alphabet, ProbWord};
use crate::error::{Error, Result};
use crate::grammars::ProbGrammar;
use crate::language::StringLanguage;

/// `W ↦ W(σ) / Σ_U U(σ)` over `labels`.
fn chi_column(alphabet: &Alphabet, labels: &[InputLabel], sigma: usize) -> Result<Vec<f64>> {
    let total: f64 = labels.iter().map(|l| l.membership(sigma)).sum();
    if total <= 0.0 {
        return Err(Error::UncoveredSymbols(vec![alphabet.symbol(sigma).to_string()]));
    }
    Ok(labels.iter().map(|l| l.membership(sigma) / total).collect())
}

/// `W ↦ Σ_σ W′(σ)·χ_σ(W)`.
fn theta_column(alphabet: &Alphabet, labels: &[InputLabel], query: &ProbWord) -> Result<Vec<f64>> {
    if query.alphabet() != alphabet {
        return Err(Error::MixedAlphabets);
    }
    let uncovered: Vec<String> = (0..alphabet.len())
        .filter(|&s| labels.iter().map(|l| l.membership(s)).sum::<f64>() <= 0.0)
        .map(|s| alphabet.symbol(s).to_string())
        .collect();
    if !uncovered.is_empty() {
        return Err(Error::UncoveredSymbols(uncovered));
    }
    let mut theta = vec![0.0; labels.len()];
    for (sigma, &q) in query.weights().iter().enumerate() {
        let chi = chi_column(alphabet, labels, sigma)?;
        for (t, c) in theta.iter_mut().zip(chi) {
            *t += q * c;
        }
    }
    Ok(theta)
}

fn symbol_weights<S: AsRef<str>>(alphabet: &Alphabet, labels: &[InputLabel], s: &[S]) -> Result<Vec<Vec<f64>>> {
    s.iter()
        .map(|sym| chi_column(alphabet, labels, alphabet.position(sym.as_ref())?))
        .collect()
}

fn word_weights(alphabet: &Alphabet, labels: &[InputLabel], s: &[ProbWord]) -> Result<Vec<Vec<f64>>> {
    s.iter().map(|w| theta_column(alphabet, labels, w)).collect()
}

/// `Σ_{W₁⋯W_l} f(W₁⋯W_l)·Π weights[i][Wᵢ]`, summed in lexicographic order.
fn weighted_sum<T, F>(nl: usize, weights: &[Vec<f64>], budget: u64, zero: T, mut f: F) -> Result<T>
where
    F: FnMut(&[usize], f64, &mut T),
{
    check_budget(count_strings(nl, weights.len()), budget)?;
    let mut acc = zero;
    for_each_tuple(nl, weights.len(), |tuple| {
        let k: f64 = tuple.iter().enumerate().map(|(i, &w)| weights[i][w]).product();
        f(tuple, k, &mut acc);
        Ok(())
    })?;
    Ok(acc)
}

/// `L(M_w↓)(s) = Σ L_w(M_w)(W₁⋯W_l)·Π χ_{σᵢ}(Wᵢ)` for a crisp string `s`.
pub fn retraction_principle_oracle<S: AsRef<str>>(m: &WordAutomaton, s: &[S], budget: u64) -> Result<f64> {
    let weights = symbol_weights(m.alphabet(), m.labels(), s)?;
    weighted_sum(m.labels().len(), &weights, budget, 0.0, |t, k, acc| *acc += m.accept_labels(t) * k)
}

/// `L_w(M_w↑)(S) = Σ L_w(M_w)(W₁⋯W_l)·Π θ_{W′ᵢ}(Wᵢ)`.
pub fn extension_principle_oracle(m: &WordAutomaton, s: &[ProbWord], budget: u64) -> Result<f64> {
    let weights = word_weights(m.alphabet(), m.labels(), s)?;
    weighted_sum(m.labels().len(), &weights, budget, 0.0, |t, k, acc| *acc += m.accept_labels(t) * k)
}

/// Row form of the retraction principle:
/// `δ↓(p, s) = Σ δ(p, W₁⋯W_l)·Π χ_{σᵢ}(Wᵢ)`.
pub fn retracted_run_oracle<S: AsRef<str>>(m: &WordAutomaton, state: usize, s: &[S], budget: u64) -> Result<Vec<f64>> {
    let weights = symbol_weights(m.alphabet(), m.labels(), s)?;
    let n = m.n_states();
    weighted_sum(m.labels().len(), &weights, budget, vec![0.0; n], |t, k, acc| {
        for (a, x) in acc.iter_mut().zip(m.run_from(state, t).probs()) {
            *a += k * x;
        }
    })
}

/// Row form of the extension principle:
/// `δ↑(p, S) = Σ δ(p, W₁⋯W_l)·Π θ_{W′ᵢ}(Wᵢ)`.
pub fn extended_run_oracle(m: &WordAutomaton, state: usize, s: &[ProbWord], budget: u64) -> Result<Vec<f64>> {
    let weights = word_weights(m.alphabet(), m.labels(), s)?;
    let n = m.n_states();
    weighted_sum(m.labels().len(), &weights, budget, vec![0.0; n], |t, k, acc| {
        for (a, x) in acc.iter_mut().zip(m.run_from(state, t).probs()) {
            *a += k * x;
        }
    })
}

/// `L(G_w↓)(s) = Σ L_w(G_w)(W₁⋯W_l)·Π χ_{σᵢ}(Wᵢ)`.
pub fn grammar_retraction_oracle<S: AsRef<str>>(g: &ProbGrammar, s: &[S], budget: u64) -> Result<f64> {
    let weights = symbol_weights(g.alphabet(), g.labels(), s)?;
    weighted_sum(g.labels().len(), &weights, budget, 0.0, |t, k, acc| *acc += g.generate_labels(t) * k)
}

/// `L_w(G_w↑)(S) = Σ L_w(G_w)(W₁⋯W_l)·Π θ_{W′ᵢ}(Wᵢ)`.
pub fn grammar_extension_oracle(g: &ProbGrammar, s: &[ProbWord], budget: u64) -> Result<f64> {
    let weights = word_weights(g.alphabet(), g.labels(), s)?;
    weighted_sum(g.labels().len(), &weights, budget, 0.0, |t, k, acc| *acc += g.generate_labels(t) * k)
}

/// `L(G)(a₁⋯a_l) = Σ_{A₁⋯A_l} Π Pr(Aᵢ | Aᵢ₋₁, aᵢ)·Pr(A_l → ε)` with `A₀ = S`,
/// enumerating all `|V|^l` variable sequences.
pub fn grammar_probability_by_enumeration<S: AsRef<str>>(g: &ProbGrammar, s: &[S], budget: u64) -> Result<f64> {
    let labels = s.iter().map(|x| g.label_index(x.as_ref())).collect::<Result<Vec<_>>>()?;
    if labels.is_empty() {
        return Ok(g.epsilon_prob(g.start()));
    }
    check_budget(count_strings(g.n_variables(), labels.len()), budget)?;
    let mut total = 0.0;
    for_each_tuple(g.n_variables(), labels.len(), |vars| {
        let mut prev = g.start();
        let mut p = 1.0;
        for (&a, &l) in vars.iter().zip(&labels) {
            p *= g.chain_prob(prev, l, a);
            prev = a;
        }
        total += p * g.epsilon_prob(prev);
        Ok(())
    })?;
    Ok(total)
}

/// The retraction language of a word-labeled automaton, computed by
/// [`retraction_principle_oracle`].
#[derive(Clone, Copy, Debug)]
pub struct RetractionOracle<'a> {
    pub model: &'a WordAutomaton,
    pub budget: u64,
}

impl StringLanguage<String> for RetractionOracle<'_> {
    fn probability(&self, input: &[String]) -> Result<f64> {
        retraction_principle_oracle(self.model, input, self.budget)
    }
}

/// The extension language of a word-labeled automaton, computed by
/// [`extension_principle_oracle`].
#[derive(Clone, Copy, Debug)]
pub struct ExtensionOracle<'a> {
    pub model: &'a WordAutomaton,
    pub budget: u64,
}

impl StringLanguage<ProbWord> for ExtensionOracle<'_> {
    fn probability(&self, input: &[ProbWord]) -> Result<f64> {
        extension_principle_oracle(self.model, input, self.budget)
    }
}

/// A grammar evaluated by enumerating variable sequences.
#[derive(Clone, Copy, Debug)]
pub struct GrammarEnumeration<'a> {
    pub grammar: &'a ProbGrammar,
    pub budget: u64,
}

impl StringLanguage<String> for GrammarEnumeration<'_> {
    fn probability(&self, input: &[String]) -> Result<f64> {
        grammar_probability_by_enumeration(self.grammar, input, self.budget)
    }
}
