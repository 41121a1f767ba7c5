//! Right-linear probabilistic grammars over crisp symbols or word labels.
//!
//! Productions are `A → aB` with probability `Pr(B | A, a)` and `A → ε`
//! with probability 0 or 1. The probability of a string `a₁⋯a_l` sums, over
//! every variable sequence `S = A₀, A₁, …, A_l`, the product of the chain
//! probabilities times `Pr(A_l → ε)`.

use std::collections::HashMap;

use crate::automata::{row_violations, structural_violations, InputLabel, WordAutomaton};
use crate::distributions::{Alphabet, ProbWord};
use crate::error::{Error, Result, Violation};
use crate::transforms::{retained_symbols, ChiTable, RetractOptions};

#[derive(Clone, Debug, PartialEq)]
pub struct ProbGrammar {
    variables: Vec<String>,
    alphabet: Alphabet,
    labels: Vec<InputLabel>,
    start: usize,
    // Flattened [from][label][to].
    chain: Vec<f64>,
    epsilon: Vec<bool>,
}

fn grammar_structure(variables: &[String], alphabet: &Alphabet, labels: &[InputLabel]) -> Vec<Violation> {
    let mut out: Vec<Violation> = structural_violations(variables, alphabet, labels)
        .into_iter()
        .map(|v| match v {
            Violation::Empty { field: "states" } => Violation::Empty { field: "variables" },
            Violation::DuplicateName { field: "state", name } => {
                Violation::DuplicateName { field: "variable", name }
            }
            Violation::UnknownName { field: "state name", name } => {
                Violation::UnknownName { field: "variable name", name }
            }
            other => other,
        })
        .collect();
    for v in variables {
        if labels.iter().any(|l| l.name() == v) {
            out.push(Violation::NameClash { name: v.clone() });
        }
    }
    out
}

impl ProbGrammar {
    pub fn builder(alphabet: &Alphabet) -> GrammarBuilder {
        GrammarBuilder::new(alphabet)
    }

    /// Assemble from `rows[from][label][to]` and a boolean ε mask.
    pub fn from_rows(
        variables: Vec<String>,
        alphabet: Alphabet,
        labels: Vec<InputLabel>,
        rows: Vec<Vec<Vec<f64>>>,
        start: usize,
        epsilon: Vec<bool>,
    ) -> Result<Self> {
        let n = variables.len();
        let nl = labels.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != nl || r.iter().any(|x| x.len() != n)) {
            return Err(Error::Internal("production table has the wrong shape".into()));
        }
        if start >= n || epsilon.len() != n {
            return Err(Error::Internal("start or epsilon mask out of range".into()));
        }
        let chain = rows.into_iter().flatten().flatten().collect();
        let g = ProbGrammar { variables, alphabet, labels, start, chain, epsilon };
        let v = g.validate();
        if v.is_empty() {
            Ok(g)
        } else {
            Err(Error::InvalidModel(v))
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = grammar_structure(&self.variables, &self.alphabet, &self.labels);
        for a in 0..self.variables.len() {
            for l in 0..self.labels.len() {
                row_violations(
                    &mut out,
                    &self.variables,
                    &self.variables[a],
                    self.labels[l].name(),
                    self.chain_row(a, l),
                );
            }
        }
        out
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn n_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn labels(&self) -> &[InputLabel] {
        &self.labels
    }

    pub fn label_names(&self) -> Vec<String> {
        self.labels.iter().map(|l| l.name().to_string()).collect()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn epsilon_mask(&self) -> &[bool] {
        &self.epsilon
    }

    /// `Pr(A → ε)`.
    pub fn epsilon_prob(&self, variable: usize) -> f64 {
        if self.epsilon[variable] {
            1.0
        } else {
            0.0
        }
    }

    pub fn is_crisp(&self) -> bool {
        self.labels.iter().all(InputLabel::is_crisp)
    }

    pub fn variable_index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn label_index(&self, name: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l.name() == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    /// `Pr(B | A, a)` for every `B`, in variable order.
    pub fn chain_row(&self, from: usize, label: usize) -> &[f64] {
        let n = self.variables.len();
        let start = (from * self.labels.len() + label) * n;
        &self.chain[start..start + n]
    }

    /// `Pr(A → aB)`.
    pub fn chain_prob(&self, from: usize, label: usize, to: usize) -> f64 {
        self.chain_row(from, label)[to]
    }

    /// Forward pass over variables: `O(l·|V|²)`.
    pub fn generate_labels(&self, labels: &[usize]) -> f64 {
        let n = self.variables.len();
        let mut dist = vec![0.0; n];
        dist[self.start] = 1.0;
        for &l in labels {
            let mut next = vec![0.0; n];
            for (a, &mass) in dist.iter().enumerate() {
                if mass == 0.0 {
                    continue;
                }
                for (acc, p) in next.iter_mut().zip(self.chain_row(a, l)) {
                    *acc += mass * p;
                }
            }
            dist = next;
        }
        dist.iter().enumerate().map(|(a, m)| m * self.epsilon_prob(a)).sum()
    }

    /// `L(G)(s)`; the empty string gives `Pr(S → ε)`.
    pub fn generate_probability<S: AsRef<str>>(&self, input: &[S]) -> Result<f64> {
        let labels = input.iter().map(|s| self.label_index(s.as_ref())).collect::<Result<Vec<_>>>()?;
        Ok(self.generate_labels(&labels))
    }

    pub fn rename_variables(&self, rename: impl Fn(&str) -> String) -> Result<Self> {
        let variables: Vec<String> = self.variables.iter().map(|v| rename(v)).collect();
        let g = ProbGrammar { variables, ..self.clone() };
        let v = g.validate();
        if v.is_empty() {
            Ok(g)
        } else {
            Err(Error::InvalidModel(v))
        }
    }

    pub(crate) fn dense_rows(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.variables.len())
            .map(|a| (0..self.labels.len()).map(|l| self.chain_row(a, l).to_vec()).collect())
            .collect()
    }
}

/// Name-based description of a grammar.
#[derive(Clone, Debug)]
pub struct GrammarBuilder {
    alphabet: Alphabet,
    variables: Vec<String>,
    labels: Vec<InputLabel>,
    start: Option<String>,
    epsilon: Vec<(String, f64)>,
    productions: Vec<(String, String, String, f64)>,
}

impl GrammarBuilder {
    pub fn new(alphabet: &Alphabet) -> Self {
        GrammarBuilder {
            alphabet: alphabet.clone(),
            variables: Vec::new(),
            labels: Vec::new(),
            start: None,
            epsilon: Vec::new(),
            productions: Vec::new(),
        }
    }

    pub fn variables<I, S>(mut self, variables: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.variables.extend(variables.into_iter().map(Into::into));
        self
    }

    pub fn label(mut self, label: InputLabel) -> Self {
        self.labels.push(label);
        self
    }

    pub fn crisp_labels(mut self) -> Self {
        for s in self.alphabet.symbols().to_vec() {
            self.labels.push(InputLabel::crisp(&self.alphabet, &s).expect("symbol of own alphabet"));
        }
        self
    }

    pub fn start(mut self, variable: impl Into<String>) -> Self {
        self.start = Some(variable.into());
        self
    }

    /// `Pr(A → ε)`; unlisted variables default to 0.
    pub fn epsilon(mut self, variable: impl Into<String>, prob: f64) -> Self {
        self.epsilon.push((variable.into(), prob));
        self
    }

    /// `Pr(A → aB)`.
    pub fn production(mut self, from: &str, label: &str, to: &str, prob: f64) -> Self {
        self.productions.push((from.into(), label.into(), to.into(), prob));
        self
    }

    fn resolve(&self) -> (Vec<Violation>, Option<ProbGrammar>) {
        let mut out = grammar_structure(&self.variables, &self.alphabet, &self.labels);
        let n = self.variables.len();
        let nl = self.labels.len();
        let var_ix: HashMap<&str, usize> =
            self.variables.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let label_ix: HashMap<&str, usize> =
            self.labels.iter().enumerate().map(|(i, l)| (l.name(), i)).collect();

        let start = match &self.start {
            None => {
                out.push(Violation::Empty { field: "start" });
                None
            }
            Some(s) => {
                let ix = var_ix.get(s.as_str()).copied();
                if ix.is_none() {
                    out.push(Violation::UnknownName { field: "start", name: s.clone() });
                }
                ix
            }
        };

        let mut epsilon = vec![false; n];
        let mut seen = vec![false; n];
        for (v, p) in &self.epsilon {
            let Some(&i) = var_ix.get(v.as_str()) else {
                out.push(Violation::UnknownName { field: "epsilon", name: v.clone() });
                continue;
            };
            if seen[i] {
                out.push(Violation::DuplicateName { field: "epsilon", name: v.clone() });
            }
            seen[i] = true;
            if *p == 1.0 {
                epsilon[i] = true;
            } else if *p != 0.0 {
                out.push(Violation::EpsilonNotBinary { variable: v.clone(), value: *p });
            }
        }

        let mut table: Vec<Option<f64>> = vec![None; n * nl * n];
        let mut touched = vec![false; n * nl];
        for (from, label, to, p) in &self.productions {
            let (Some(&a), Some(&l), Some(&b)) =
                (var_ix.get(from.as_str()), label_ix.get(label.as_str()), var_ix.get(to.as_str()))
            else {
                for (field, name, known) in [
                    ("production source", from, var_ix.contains_key(from.as_str())),
                    ("production label", label, label_ix.contains_key(label.as_str())),
                    ("production target", to, var_ix.contains_key(to.as_str())),
                ] {
                    if !known {
                        out.push(Violation::UnknownName { field, name: name.clone() });
                    }
                }
                continue;
            };
            touched[a * nl + l] = true;
            let cell = &mut table[(a * nl + l) * n + b];
            if cell.is_some() {
                out.push(Violation::DuplicateEntry { from: from.clone(), label: label.clone(), to: to.clone() });
            }
            *cell = Some(*p);
        }
        let chain: Vec<f64> = table.into_iter().map(|c| c.unwrap_or(0.0)).collect();
        for a in 0..n {
            for l in 0..nl {
                if !touched[a * nl + l] {
                    out.push(Violation::MissingRow {
                        from: self.variables[a].clone(),
                        label: self.labels[l].name().to_string(),
                    });
                    continue;
                }
                let s = (a * nl + l) * n;
                row_violations(&mut out, &self.variables, &self.variables[a], self.labels[l].name(), &chain[s..s + n]);
            }
        }
        let built = match (out.is_empty(), start) {
            (true, Some(start)) => Some(ProbGrammar {
                variables: self.variables.clone(),
                alphabet: self.alphabet.clone(),
                labels: self.labels.clone(),
                start,
                chain,
                epsilon,
            }),
            _ => None,
        };
        (out, built)
    }

    pub fn build(&self) -> Result<ProbGrammar> {
        match self.resolve() {
            (_, Some(g)) => Ok(g),
            (v, None) => Err(Error::InvalidModel(v)),
        }
    }
}

pub fn validate_grammar(description: &GrammarBuilder) -> Vec<Violation> {
    description.resolve().0
}

/// `Q = V`, `q₀ = S`, `F = {A : Pr(A → ε) = 1}`, `δ(A, a)(B) = Pr(B | A, a)`.
pub fn automaton_from_grammar(g: &ProbGrammar) -> Result<WordAutomaton> {
    WordAutomaton::from_rows(
        g.variables.clone(),
        g.alphabet.clone(),
        g.labels.clone(),
        g.dense_rows(),
        g.start,
        g.epsilon.clone(),
    )
}

/// `Pr(A → aB) = δ(A, a)(B)`, `Pr(A → ε) = 1` exactly for final states.
pub fn grammar_from_automaton(m: &WordAutomaton) -> Result<ProbGrammar> {
    ProbGrammar::from_rows(
        m.states().to_vec(),
        m.alphabet().clone(),
        m.labels().to_vec(),
        m.dense_rows(),
        m.initial(),
        m.final_mask().to_vec(),
    )
}

pub fn grammar_retract(g: &ProbGrammar) -> Result<ProbGrammar> {
    grammar_retract_with(g, RetractOptions::default())
}

/// `Pr↓(A → aB) = Σ_W χ_a(W)·Pr(A → WB)`, ε-probabilities unchanged.
pub fn grammar_retract_with(g: &ProbGrammar, options: RetractOptions) -> Result<ProbGrammar> {
    let chi = ChiTable::from_labels(&g.alphabet, &g.labels);
    let (kept, alphabet) = retained_symbols(&chi, options)?;
    let n = g.n_variables();
    let rows = (0..n)
        .map(|a| {
            kept.iter()
                .map(|&sigma| {
                    let weights = chi.chi(sigma).expect("retained symbols are covered");
                    let mut row = vec![0.0; n];
                    for (w, &c) in weights.iter().enumerate() {
                        if c == 0.0 {
                            continue;
                        }
                        for (acc, p) in row.iter_mut().zip(g.chain_row(a, w)) {
                            *acc += c * p;
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
    ProbGrammar::from_rows(g.variables.clone(), alphabet, labels, rows, g.start, g.epsilon.clone())
        .map_err(|e| Error::Internal(format!("grammar retraction produced an invalid grammar: {e}")))
}

/// Generation over arbitrary words: `Pr↑(A → W′B) = Σ_W θ_{W′}(W)·Pr(A → WB)`.
#[derive(Clone, Debug)]
pub struct GrammarExtension {
    grammar: ProbGrammar,
    chi: ChiTable,
}

pub fn grammar_generalized_extend(g: &ProbGrammar) -> Result<GrammarExtension> {
    let chi = ChiTable::from_labels(&g.alphabet, &g.labels);
    let missing = chi.uncovered();
    if !missing.is_empty() {
        return Err(Error::UncoveredSymbols(missing));
    }
    Ok(GrammarExtension { grammar: g.clone(), chi })
}

impl GrammarExtension {
    pub fn grammar(&self) -> &ProbGrammar {
        &self.grammar
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.grammar.alphabet
    }

    /// `Pr↑(B | A, W′)` for every `B`.
    pub fn chain_row(&self, from: usize, word: &ProbWord) -> Result<Vec<f64>> {
        let theta = self.chi.theta(word)?;
        let mut row = vec![0.0; self.grammar.n_variables()];
        for (w, &t) in theta.iter().enumerate() {
            for (acc, p) in row.iter_mut().zip(self.grammar.chain_row(from, w)) {
                *acc += t * p;
            }
        }
        Ok(row)
    }

    pub fn generate_probability(&self, input: &[ProbWord]) -> Result<f64> {
        let g = &self.grammar;
        let n = g.n_variables();
        let mut dist = vec![0.0; n];
        dist[g.start] = 1.0;
        for word in input {
            let theta = self.chi.theta(word)?;
            let mut next = vec![0.0; n];
            for (a, &mass) in dist.iter().enumerate() {
                if mass == 0.0 {
                    continue;
                }
                for (w, &t) in theta.iter().enumerate() {
                    let k = mass * t;
                    for (acc, p) in next.iter_mut().zip(g.chain_row(a, w)) {
                        *acc += k * p;
                    }
                }
            }
            dist = next;
        }
        Ok(dist.iter().enumerate().map(|(a, m)| m * g.epsilon_prob(a)).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, ab, suspect_pgcw};
    use crate::transforms::{dirac_identify, retract};
    use approx::assert_abs_diff_eq;

    #[test]
    fn fixture_generation_probabilities() {
        let g = suspect_pgcw();
        assert_abs_diff_eq!(g.generate_probability(&["W2", "W2"]).unwrap(), 0.43, epsilon = 1e-12);
        assert_abs_diff_eq!(g.generate_probability(&["W1", "W2"]).unwrap(), 0.1975, epsilon = 1e-12);
        assert_eq!(g.generate_probability::<&str>(&[]).unwrap(), 0.0);
        assert_eq!(g.generate_probability(&["a"]), Err(Error::UnknownLabel("a".into())));
    }

    #[test]
    fn conversions_round_trip() {
        let m = fixtures::suspect_pacw();
        let g = grammar_from_automaton(&m).unwrap();
        assert_eq!(g, suspect_pgcw());
        assert_eq!(automaton_from_grammar(&g).unwrap(), m);
    }

    #[test]
    fn builder_rejects_bad_grammars() {
        let base = || {
            ProbGrammar::builder(&ab())
                .variables(["S", "T"])
                .crisp_labels()
                .start("S")
                .production("S", "a", "T", 1.0)
                .production("S", "b", "S", 1.0)
                .production("T", "a", "T", 1.0)
                .production("T", "b", "S", 1.0)
        };
        assert!(base().epsilon("T", 1.0).build().is_ok());
        assert_eq!(
            validate_grammar(&base().epsilon("T", 0.5)),
            vec![Violation::EpsilonNotBinary { variable: "T".into(), value: 0.5 }]
        );
        let clash = ProbGrammar::builder(&ab())
            .variables(["a"])
            .crisp_labels()
            .start("a")
            .production("a", "a", "a", 1.0)
            .production("a", "b", "a", 1.0);
        assert_eq!(validate_grammar(&clash), vec![Violation::NameClash { name: "a".into() }]);
        let short = base().production("S", "a", "S", 0.1);
        assert!(matches!(validate_grammar(&short)[0], Violation::RowNotStochastic { .. }));
    }

    #[test]
    fn retraction_matches_automaton_route() {
        let g = suspect_pgcw();
        let r = grammar_retract(&g).unwrap();
        assert_abs_diff_eq!(r.chain_prob(0, 0, 0), 0.68, epsilon = 1e-12);
        let via = grammar_from_automaton(&retract(&automaton_from_grammar(&g).unwrap()).unwrap()).unwrap();
        for a in 0..3 {
            for l in 0..2 {
                for (x, y) in r.chain_row(a, l).iter().zip(via.chain_row(a, l)) {
                    assert_abs_diff_eq!(*x, *y, epsilon = 1e-15);
                }
            }
        }
        assert_eq!(r.epsilon_mask(), g.epsilon_mask());
    }

    #[test]
    fn dirac_grammar_retracts_to_itself() {
        let v = grammar_from_automaton(&fixtures::suspect_retraction()).unwrap();
        let w = grammar_from_automaton(&dirac_identify(&fixtures::suspect_retraction()).unwrap()).unwrap();
        assert_eq!(grammar_retract(&w).unwrap(), v);
    }

    #[test]
    fn extension_of_fixture() {
        let e = grammar_generalized_extend(&suspect_pgcw()).unwrap();
        let w = ProbWord::new(&ab(), vec![0.2, 0.8]).unwrap();
        assert_abs_diff_eq!(e.generate_probability(&[w.clone(), w]).unwrap(), 0.286467, epsilon = 1e-12);

        let a = ProbWord::dirac_at(&ab(), 0);
        let r = grammar_retract(&suspect_pgcw()).unwrap();
        assert_abs_diff_eq!(
            e.generate_probability(&[a]).unwrap(),
            r.generate_probability(&["a"]).unwrap(),
            epsilon = 1e-15
        );
    }
}
