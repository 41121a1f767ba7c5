//! Random models and words for property tests. Stochastic rows are uniform
//! on the simplex (sorted uniform spacings).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::{InputLabel, WordAutomaton};
use crate::distributions::{Alphabet, FuzzyWord, ProbWord};
use crate::grammars::{grammar_from_automaton, ProbGrammar};

/// Uniform point of the `(n-1)`-simplex.
pub fn random_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    assert!(n > 0, "simplex dimension must be positive");
    let mut cuts: Vec<f64> = (0..n - 1).map(|_| rng.gen::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(n);
    let mut prev = 0.0;
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(1.0 - prev);
    out
}

/// `{s0, s1, …}`.
pub fn numbered_alphabet(n: usize) -> Alphabet {
    Alphabet::new((0..n).map(|i| format!("s{i}"))).expect("generated names are valid")
}

pub fn random_word<R: Rng + ?Sized>(rng: &mut R, alphabet: &Alphabet) -> ProbWord {
    ProbWord::new(alphabet, random_simplex(rng, alphabet.len())).expect("simplex point is a word")
}

pub fn random_words<R: Rng + ?Sized>(rng: &mut R, alphabet: &Alphabet, len: usize) -> Vec<ProbWord> {
    (0..len).map(|_| random_word(rng, alphabet)).collect()
}

/// `count` random words from a fixed seed.
pub fn seeded_words(alphabet: &Alphabet, count: usize, seed: u64) -> Vec<ProbWord> {
    random_words(&mut ChaCha8Rng::seed_from_u64(seed), alphabet, count)
}

/// Memberships uniform in `[0, 1]`, redrawn until the total is positive.
pub fn random_fuzzy_word<R: Rng + ?Sized>(rng: &mut R, alphabet: &Alphabet) -> FuzzyWord {
    loop {
        let m: Vec<f64> = (0..alphabet.len()).map(|_| rng.gen::<f64>()).collect();
        if let Ok(w) = FuzzyWord::new(alphabet, m) {
            return w;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelShape {
    pub states: usize,
    pub symbols: usize,
    pub labels: usize,
}

impl ModelShape {
    /// Sizes uniform up to the given maxima, with at least two states, two
    /// symbols and one label.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_states: usize, max_symbols: usize, max_labels: usize) -> Self {
        ModelShape {
            states: rng.gen_range(2..=max_states.max(2)),
            symbols: rng.gen_range(2..=max_symbols.max(2)),
            labels: rng.gen_range(1..=max_labels.max(1)),
        }
    }
}

fn random_rows<R: Rng + ?Sized>(rng: &mut R, states: usize, labels: usize) -> Vec<Vec<Vec<f64>>> {
    (0..states)
        .map(|_| (0..labels).map(|_| random_simplex(rng, states)).collect())
        .collect()
}

fn assemble<R: Rng + ?Sized>(rng: &mut R, states: usize, alphabet: Alphabet, labels: Vec<InputLabel>) -> WordAutomaton {
    let rows = random_rows(rng, states, labels.len());
    let finals: Vec<bool> = (0..states).map(|_| rng.gen_bool(0.5)).collect();
    let initial = rng.gen_range(0..states);
    WordAutomaton::from_rows((0..states).map(|i| format!("q{i}")).collect(), alphabet, labels, rows, initial, finals)
        .expect("random rows are stochastic")
}

/// Word-labeled automaton with random labels. Simplex labels have full
/// support almost surely, so every symbol is covered.
pub fn random_pacw<R: Rng + ?Sized>(rng: &mut R, shape: ModelShape) -> WordAutomaton {
    let alphabet = numbered_alphabet(shape.symbols);
    let labels = (0..shape.labels)
        .map(|i| InputLabel::word(format!("W{i}"), random_word(rng, &alphabet)))
        .collect();
    assemble(rng, shape.states, alphabet, labels)
}

/// Like [`random_pacw`] with fuzzy labels.
pub fn random_fuzzy_pacw<R: Rng + ?Sized>(rng: &mut R, shape: ModelShape) -> WordAutomaton {
    let alphabet = numbered_alphabet(shape.symbols);
    let labels = (0..shape.labels)
        .map(|i| InputLabel::fuzzy(format!("W{i}"), random_fuzzy_word(rng, &alphabet)))
        .collect();
    assemble(rng, shape.states, alphabet, labels)
}

/// Crisp automaton; `shape.labels` is ignored.
pub fn random_pacv<R: Rng + ?Sized>(rng: &mut R, shape: ModelShape) -> WordAutomaton {
    let alphabet = numbered_alphabet(shape.symbols);
    let labels = alphabet
        .symbols()
        .iter()
        .map(|s| InputLabel::crisp(&alphabet, s).expect("own symbol"))
        .collect();
    assemble(rng, shape.states, alphabet, labels)
}

pub fn random_pgcw<R: Rng + ?Sized>(rng: &mut R, shape: ModelShape) -> ProbGrammar {
    grammar_from_automaton(&random_pacw(rng, shape)).expect("automaton is valid")
}
