//! Probabilistic automata and grammars whose inputs are words: probability
//! or possibility distributions over a finite alphabet.
//!
//! A word-labeled automaton can be turned into a crisp automaton
//! ([`retract`]) or into an automaton over every word ([`generalized_extend`]).
//! Grammars mirror the same operators. [`analysis`] holds brute-force
//! oracles, bounded equivalence checks and continuity radii.

pub mod analysis;
pub mod automata;
pub mod distributions;
pub mod error;
pub mod fixtures;
pub mod grammars;
pub mod language;
pub mod transforms;

pub use automata::{AutomatonBuilder, InputLabel, LabelKind, LazyExtensionAutomaton, StateDistribution, WordAutomaton};
pub use distributions::{
    as_word, decompose_in_basis, dirac, euclidean_distance, linear_combine, normalize_fuzzy, parse_zadeh,
    parse_zadeh_fuzzy, scalar_mul, Alphabet, FuzzyWord, ProbWord, RealVector, SymbolVector, TOL_NORM, TOL_RANK,
    TOL_SOLVE,
};
pub use error::{Error, Result, Violation};
pub use grammars::{
    automaton_from_grammar, grammar_from_automaton, grammar_generalized_extend, grammar_retract,
    grammar_retract_with, GrammarBuilder, GrammarExtension, ProbGrammar,
};
pub use language::StringLanguage;
pub use transforms::{
    chi, dirac_identify, extend_via_basis, fuzzy_extend_via_basis, fuzzy_generalized_extend, generalized_extend,
    pacv_extend, retract, retract_with, theta, ChiTable, FuzzyExtension, GeneralizedExtension, RetractOptions,
};
