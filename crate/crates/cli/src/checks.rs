//! Named checks, looked up by `cww check <name>`.

use cww_core::analysis::continuity::{continuity_probe, continuity_radius};
use cww_core::analysis::equivalence::{equivalence_up_to, EquivalenceReport};
use cww_core::analysis::oracles::{grammar_extension_oracle, grammar_retraction_oracle, ExtensionOracle, RetractionOracle};
use cww_core::analysis::random::seeded_words;
use cww_core::language::FnLanguage;
use cww_core::{
    automaton_from_grammar, generalized_extend, grammar_generalized_extend, grammar_retract_with, retract_with,
    Error, LazyExtensionAutomaton, ProbWord, RetractOptions, StringLanguage, WordAutomaton,
};
use serde::Serialize;
use serde_json::Value;

use crate::model_file::Model;
use crate::CliError;

#[derive(Clone, Debug)]
pub struct CheckContext {
    pub models: Vec<Model>,
    pub max_len: usize,
    pub tol: f64,
    pub epsilon: f64,
    pub level: usize,
    pub samples: usize,
    pub seed: u64,
    pub word_language: bool,
    pub budget: u64,
    pub probe_words: usize,
    pub restrict_alphabet: bool,
}

impl CheckContext {
    fn options(&self) -> RetractOptions {
        RetractOptions { restrict_alphabet: self.restrict_alphabet }
    }

    fn models<const N: usize>(&self, check: &str) -> Result<[&Model; N], CliError> {
        let refs: Vec<&Model> = self.models.iter().collect();
        refs.try_into().map_err(|_| CliError::Usage(format!("`check {check}` takes {N} model file(s)")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub passed: bool,
    pub report: Value,
}

pub trait Check: Sync {
    fn name(&self) -> &'static str;
    fn run(&self, ctx: &CheckContext) -> Result<CheckOutcome, CliError>;
}

static REGISTRY: &[&dyn Check] = &[&RetractionCheck, &ExtensionCheck, &EquivCheck, &ContinuityCheck];

pub fn registry() -> &'static [&'static dyn Check] {
    REGISTRY
}

pub fn names() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.name()).collect()
}

pub fn find(name: &str) -> Option<&'static dyn Check> {
    REGISTRY.iter().copied().find(|c| c.name() == name)
}

fn tagged(check: &str, report: &impl Serialize) -> Value {
    let mut v = serde_json::to_value(report).expect("reports serialize");
    if let Value::Object(map) = &mut v {
        map.insert("check".into(), Value::String(check.into()));
    }
    v
}

fn equivalence_outcome(check: &str, report: EquivalenceReport) -> CheckOutcome {
    CheckOutcome { passed: report.passed, report: tagged(check, &report) }
}

/// Retraction against the enumeration of its defining sum.
pub struct RetractionCheck;

impl Check for RetractionCheck {
    fn name(&self) -> &'static str {
        "retraction"
    }

    fn run(&self, ctx: &CheckContext) -> Result<CheckOutcome, CliError> {
        let [model] = ctx.models::<1>(self.name())?;
        let report = match model {
            Model::Automaton { model, .. } => {
                let retracted = retract_with(model, ctx.options())?;
                let oracle = RetractionOracle { model, budget: ctx.budget };
                let domain = retracted.alphabet().symbols().to_vec();
                equivalence_up_to(&retracted, &oracle, &domain, ctx.max_len, ctx.tol, ctx.budget)?
            }
            Model::Grammar { grammar, .. } => {
                let retracted = grammar_retract_with(grammar, ctx.options())?;
                let oracle = FnLanguage(|s: &[String]| grammar_retraction_oracle(grammar, s, ctx.budget));
                let domain = retracted.alphabet().symbols().to_vec();
                equivalence_up_to(&retracted, &oracle, &domain, ctx.max_len, ctx.tol, ctx.budget)?
            }
        };
        Ok(equivalence_outcome(self.name(), report))
    }
}

/// Generalized extension against the enumeration of its defining sum, on
/// the Dirac words plus a few seeded random words.
pub struct ExtensionCheck;

impl Check for ExtensionCheck {
    fn name(&self) -> &'static str {
        "extension"
    }

    fn run(&self, ctx: &CheckContext) -> Result<CheckOutcome, CliError> {
        let [model] = ctx.models::<1>(self.name())?;
        let alphabet = match model {
            Model::Automaton { model, .. } => model.alphabet().clone(),
            Model::Grammar { grammar, .. } => grammar.alphabet().clone(),
        };
        let mut domain: Vec<ProbWord> = (0..alphabet.len()).map(|i| ProbWord::dirac_at(&alphabet, i)).collect();
        domain.extend(seeded_words(&alphabet, ctx.probe_words, ctx.seed));
        let report = match model {
            Model::Automaton { model, .. } => {
                let extended = generalized_extend(model)?;
                let oracle = ExtensionOracle { model, budget: ctx.budget };
                equivalence_up_to(&extended, &oracle, &domain, ctx.max_len, ctx.tol, ctx.budget)?
            }
            Model::Grammar { grammar, .. } => {
                let extended = grammar_generalized_extend(grammar)?;
                let oracle = FnLanguage(|s: &[ProbWord]| grammar_extension_oracle(grammar, s, ctx.budget));
                equivalence_up_to(&extended, &oracle, &domain, ctx.max_len, ctx.tol, ctx.budget)?
            }
        };
        Ok(equivalence_outcome(self.name(), report))
    }
}

struct ByLabels<'a>(&'a Model);

impl StringLanguage<String> for ByLabels<'_> {
    fn probability(&self, input: &[String]) -> cww_core::Result<f64> {
        match self.0 {
            Model::Automaton { model, .. } => model.accept_probability(input),
            Model::Grammar { grammar, .. } => grammar.generate_probability(input),
        }
    }
}

fn label_names(model: &Model) -> Vec<String> {
    match model {
        Model::Automaton { model, .. } => model.label_names(),
        Model::Grammar { grammar, .. } => grammar.label_names(),
    }
}

/// Two models (automata or grammars) on every label string up to a length.
pub struct EquivCheck;

impl Check for EquivCheck {
    fn name(&self) -> &'static str {
        "equiv"
    }

    fn run(&self, ctx: &CheckContext) -> Result<CheckOutcome, CliError> {
        let [a, b] = ctx.models::<2>(self.name())?;
        let (la, mut lb) = (label_names(a), label_names(b));
        let mut sorted_a = la.clone();
        sorted_a.sort();
        lb.sort();
        if sorted_a != lb {
            let missing = la.iter().find(|l| !lb.contains(l)).or_else(|| lb.iter().find(|l| !la.contains(l)));
            return Err(Error::UnknownLabel(missing.cloned().unwrap_or_default()).into());
        }
        let report = equivalence_up_to(&ByLabels(a), &ByLabels(b), &la, ctx.max_len, ctx.tol, ctx.budget)?;
        Ok(equivalence_outcome(self.name(), report))
    }
}

fn lazy_of(model: &Model, options: RetractOptions) -> Result<LazyExtensionAutomaton, CliError> {
    let automaton: WordAutomaton = match model {
        Model::Automaton { model, .. } => model.clone(),
        Model::Grammar { grammar, .. } => automaton_from_grammar(grammar)?,
    };
    let crisp = if automaton.is_crisp() { automaton } else { retract_with(&automaton, options)? };
    Ok(LazyExtensionAutomaton::new(crisp)?)
}

/// Samples word strings within the continuity radius and reports the
/// largest gap seen.
pub struct ContinuityCheck;

impl Check for ContinuityCheck {
    fn name(&self) -> &'static str {
        "continuity"
    }

    fn run(&self, ctx: &CheckContext) -> Result<CheckOutcome, CliError> {
        let [model] = ctx.models::<1>(self.name())?;
        let lazy = lazy_of(model, ctx.options())?;
        let bound = continuity_radius(&lazy, ctx.epsilon, ctx.level, ctx.word_language)?;
        let report = continuity_probe(&lazy, &bound, ctx.samples, ctx.seed)?;
        Ok(CheckOutcome { passed: report.passed, report: tagged(self.name(), &report) })
    }
}
