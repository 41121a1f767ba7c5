//! Language-preserving rewrites used to build equivalent pairs.

use crate::automata::WordAutomaton;
use crate::error::{Error, Result};
use crate::grammars::{automaton_from_grammar, grammar_from_automaton, ProbGrammar};

/// Adds a copy `copy_name` of `state` with the same outgoing rows and final
/// status; every transition into `state` sends half its mass to the copy.
/// The accepted language is unchanged.
pub fn split_state(m: &WordAutomaton, state: &str, copy_name: &str) -> Result<WordAutomaton> {
    let p = m.state_index(state)?;
    if m.state_index(copy_name).is_ok() {
        return Err(Error::InvalidArgument(format!("state `{copy_name}` already exists")));
    }
    let n = m.n_states();
    let nl = m.labels().len();
    let split_row = |row: &[f64]| {
        let mut out = row.to_vec();
        let half = row[p] / 2.0;
        out[p] = half;
        out.push(row[p] - half);
        out
    };
    let mut rows: Vec<Vec<Vec<f64>>> =
        (0..n).map(|r| (0..nl).map(|l| split_row(m.row(r, l))).collect()).collect();
    rows.push(rows[p].clone());

    let mut states = m.states().to_vec();
    states.push(copy_name.to_string());
    let mut finals = m.final_mask().to_vec();
    finals.push(m.is_final(p));
    WordAutomaton::from_rows(states, m.alphabet().clone(), m.labels().to_vec(), rows, m.initial(), finals)
}

/// [`split_state`] on the induced automaton of a grammar.
pub fn split_variable(g: &ProbGrammar, variable: &str, copy_name: &str) -> Result<ProbGrammar> {
    grammar_from_automaton(&split_state(&automaton_from_grammar(g)?, variable, copy_name)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::equivalence::equivalence_up_to;
    use crate::fixtures;

    #[test]
    fn split_preserves_language() {
        let m = fixtures::suspect_pacw();
        for s in ["q0", "q1", "q2"] {
            let split = split_state(&m, s, "copy").unwrap();
            assert_eq!(split.n_states(), 4);
            let r = equivalence_up_to(&m, &split, &m.label_names(), 4, 1e-12, 1000).unwrap();
            assert!(r.passed, "{r:?}");
        }
        assert!(split_state(&m, "q0", "q1").is_err());
        assert!(split_state(&m, "q7", "x").is_err());
    }

    #[test]
    fn split_grammar_preserves_language() {
        let g = fixtures::suspect_pgcw();
        let split = split_variable(&g, "q1", "q1b").unwrap();
        let r = equivalence_up_to(&g, &split, &g.label_names(), 4, 1e-12, 1000).unwrap();
        assert!(r.passed);
    }
}
