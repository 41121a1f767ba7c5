//! A common face for everything that assigns a probability to a string.
//!
//! Crisp and word-labeled automata and grammars read label names; the
//! all-words evaluators read [`ProbWord`]s; the fuzzy evaluator reads
//! [`FuzzyWord`]s. [`crate::analysis::equivalence`] compares any two
//! evaluators that share an input type.

use crate::automata::{LazyExtensionAutomaton, WordAutomaton};
use crate::distributions::{FuzzyWord, ProbWord};
use crate::error::Result;
use crate::grammars::{GrammarExtension, ProbGrammar};
use crate::transforms::{FuzzyExtension, GeneralizedExtension};

pub trait StringLanguage<L> {
    fn probability(&self, input: &[L]) -> Result<f64>;
}

impl StringLanguage<String> for WordAutomaton {
    fn probability(&self, input: &[String]) -> Result<f64> {
        self.accept_probability(input)
    }
}

impl StringLanguage<String> for ProbGrammar {
    fn probability(&self, input: &[String]) -> Result<f64> {
        self.generate_probability(input)
    }
}

impl StringLanguage<ProbWord> for LazyExtensionAutomaton {
    fn probability(&self, input: &[ProbWord]) -> Result<f64> {
        self.lazy_accept(input)
    }
}

impl StringLanguage<ProbWord> for GeneralizedExtension {
    fn probability(&self, input: &[ProbWord]) -> Result<f64> {
        self.accept(input)
    }
}

impl StringLanguage<ProbWord> for GrammarExtension {
    fn probability(&self, input: &[ProbWord]) -> Result<f64> {
        self.generate_probability(input)
    }
}

impl StringLanguage<FuzzyWord> for FuzzyExtension {
    fn probability(&self, input: &[FuzzyWord]) -> Result<f64> {
        self.accept(input)
    }
}

/// Evaluates a generalized extension through θ weights on the source rows
/// instead of the retraction.
#[derive(Clone, Copy, Debug)]
pub struct ThetaPath<'a>(pub &'a GeneralizedExtension);

impl StringLanguage<ProbWord> for ThetaPath<'_> {
    fn probability(&self, input: &[ProbWord]) -> Result<f64> {
        self.0.accept_eq3(input)
    }
}

/// Any closure as a language.
pub struct FnLanguage<F>(pub F);

impl<L, F> StringLanguage<L> for FnLanguage<F>
where
    F: Fn(&[L]) -> Result<f64>,
{
    fn probability(&self, input: &[L]) -> Result<f64> {
        (self.0)(input)
    }
}
