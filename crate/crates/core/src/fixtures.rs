//! The three-state suspect model used throughout the test suites.
//!
//! States `q0`, `q1`, `q2`; underlying symbols `a` (do not confess) and `b`
//! (confess); word labels `W1 = 0.9\a + 0.1\b` and `W2 = 0.1\a + 0.9\b`;
//! final state `q2`.

use crate::automata::{AutomatonBuilder, InputLabel, WordAutomaton};
use crate::distributions::{Alphabet, ProbWord};
use crate::grammars::ProbGrammar;

const STATES: [&str; 3] = ["q0", "q1", "q2"];

/// `(from, label, row)` of the word-labeled model.
pub const SUSPECT_ROWS: [(&str, &str, [f64; 3]); 6] = [
    ("q0", "W1", [0.75, 0.2, 0.05]),
    ("q1", "W1", [0.4, 0.55, 0.05]),
    ("q2", "W1", [0.1, 0.85, 0.05]),
    ("q0", "W2", [0.05, 0.85, 0.1]),
    ("q1", "W2", [0.05, 0.55, 0.4]),
    ("q2", "W2", [0.05, 0.1, 0.85]),
];

/// Rows of the crisp retraction, as published.
pub const SUSPECT_RETRACTION_ROWS: [(&str, &str, [f64; 3]); 6] = [
    ("q0", "a", [0.68, 0.265, 0.055]),
    ("q0", "b", [0.12, 0.785, 0.095]),
    ("q1", "a", [0.365, 0.55, 0.085]),
    ("q1", "b", [0.085, 0.55, 0.365]),
    ("q2", "a", [0.095, 0.775, 0.13]),
    ("q2", "b", [0.055, 0.175, 0.77]),
];

pub fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).expect("static alphabet")
}

pub fn w1() -> ProbWord {
    ProbWord::new(&ab(), vec![0.9, 0.1]).expect("static word")
}

pub fn w2() -> ProbWord {
    ProbWord::new(&ab(), vec![0.1, 0.9]).expect("static word")
}

pub fn suspect_pacw_description() -> AutomatonBuilder {
    let mut b = WordAutomaton::builder(&ab())
        .states(STATES)
        .label(InputLabel::word("W1", w1()))
        .label(InputLabel::word("W2", w2()))
        .initial("q0")
        .finals(["q2"]);
    for (from, label, row) in SUSPECT_ROWS {
        b = b.row(from, label, &row);
    }
    b
}

pub fn suspect_pacw() -> WordAutomaton {
    suspect_pacw_description().build().expect("fixture is valid")
}

/// The published crisp retraction, typed in rather than computed.
pub fn suspect_retraction() -> WordAutomaton {
    let mut b = WordAutomaton::builder(&ab())
        .states(STATES)
        .crisp_labels()
        .initial("q0")
        .finals(["q2"]);
    for (from, label, row) in SUSPECT_RETRACTION_ROWS {
        b = b.row(from, label, &row);
    }
    b.build().expect("fixture is valid")
}

/// The grammar counterpart: `Pr(qj | qi, Wk)` from the same table, with
/// `Pr(q2 → ε) = 1` and the other ε-probabilities 0.
pub fn suspect_pgcw() -> ProbGrammar {
    let mut b = ProbGrammar::builder(&ab())
        .variables(STATES)
        .label(InputLabel::word("W1", w1()))
        .label(InputLabel::word("W2", w2()))
        .start("q0")
        .epsilon("q0", 0.0)
        .epsilon("q1", 0.0)
        .epsilon("q2", 1.0);
    for (from, label, row) in SUSPECT_ROWS {
        for (to, p) in STATES.iter().zip(row) {
            b = b.production(from, label, to, p);
        }
    }
    b.build().expect("fixture is valid")
}
