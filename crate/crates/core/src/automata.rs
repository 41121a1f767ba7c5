//! Probabilistic automata over crisp symbols, finite word labels, or all words.
//!
//! One [`WordAutomaton`] type covers automata with crisp inputs (each label is
//! a symbol of the underlying alphabet) and automata whose inputs are a finite
//! set of named words. The all-words automaton is never materialized:
//! [`LazyExtensionAutomaton`] wraps a crisp automaton and mixes its rows on
//! demand, `δ(p, W′) = Σ_σ W′(σ)·δ(p, σ)`.

use std::collections::HashMap;

use crate::distributions::{is_valid_name, Alphabet, FuzzyWord, ProbWord, TOL_NORM};
use crate::error::{Error, Result, Violation};

#[derive(Clone, Debug, PartialEq)]
pub enum LabelKind {
    /// Index of the symbol in the underlying alphabet.
    Crisp(usize),
    Word(ProbWord),
    Fuzzy(FuzzyWord),
}

/// A named input of an automaton or terminal of a grammar.
#[derive(Clone, Debug, PartialEq)]
pub struct InputLabel {
    name: String,
    kind: LabelKind,
}

impl InputLabel {
    /// The crisp label for `symbol`; its name is the symbol itself.
    pub fn crisp(alphabet: &Alphabet, symbol: &str) -> Result<Self> {
        let index = alphabet.position(symbol)?;
        Ok(InputLabel { name: symbol.to_string(), kind: LabelKind::Crisp(index) })
    }

    pub fn word(name: impl Into<String>, payload: ProbWord) -> Self {
        InputLabel { name: name.into(), kind: LabelKind::Word(payload) }
    }

    pub fn fuzzy(name: impl Into<String>, payload: FuzzyWord) -> Self {
        InputLabel { name: name.into(), kind: LabelKind::Fuzzy(payload) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &LabelKind {
        &self.kind
    }

    pub fn is_crisp(&self) -> bool {
        matches!(self.kind, LabelKind::Crisp(_))
    }

    /// Weight the label puts on symbol `index`. A crisp label is its Dirac word.
    pub fn membership(&self, index: usize) -> f64 {
        match &self.kind {
            LabelKind::Crisp(i) => f64::from(u8::from(*i == index)),
            LabelKind::Word(w) => w.weights()[index],
            LabelKind::Fuzzy(w) => w.memberships()[index],
        }
    }

    fn payload_problem(&self, alphabet: &Alphabet) -> Option<String> {
        match &self.kind {
            LabelKind::Crisp(i) if *i >= alphabet.len() => Some("symbol index out of range".into()),
            LabelKind::Crisp(i) if alphabet.symbol(*i) != self.name => {
                Some(format!("crisp label must be named after its symbol `{}`", alphabet.symbol(*i)))
            }
            LabelKind::Word(w) if w.alphabet() != alphabet => {
                Some("payload is over a different alphabet".into())
            }
            LabelKind::Fuzzy(w) if w.alphabet() != alphabet => {
                Some("payload is over a different alphabet".into())
            }
            _ => None,
        }
    }
}

/// A probability distribution over the states of an automaton, indexed by
/// state position.
#[derive(Clone, Debug, PartialEq)]
pub struct StateDistribution(Vec<f64>);

impl StateDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < -TOL_NORM || **p > 1.0 + TOL_NORM) {
            return Err(Error::NotADistribution(format!("state probability {p}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > TOL_NORM {
            return Err(Error::NotADistribution(format!("state probabilities sum to {sum}")));
        }
        Ok(StateDistribution(probs))
    }

    pub fn dirac(len: usize, state: usize) -> Self {
        let mut v = vec![0.0; len];
        v[state] = 1.0;
        StateDistribution(v)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, state: usize) -> f64 {
        self.0[state]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_abs_diff(&self, other: &StateDistribution) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub(crate) fn from_vec_unchecked(v: Vec<f64>) -> Self {
        StateDistribution(v)
    }
}

/// `(Q, Σ or Σ_w, δ, q₀, F)` with a total, row-stochastic transition table.
#[derive(Clone, Debug, PartialEq)]
pub struct WordAutomaton {
    states: Vec<String>,
    alphabet: Alphabet,
    labels: Vec<InputLabel>,
    // Flattened [state][label][target].
    table: Vec<f64>,
    initial: usize,
    finals: Vec<bool>,
}

impl WordAutomaton {
    pub fn builder(alphabet: &Alphabet) -> AutomatonBuilder {
        AutomatonBuilder::new(alphabet)
    }

    /// Assemble from a dense table laid out as `rows[state][label]`.
    pub fn from_rows(
        states: Vec<String>,
        alphabet: Alphabet,
        labels: Vec<InputLabel>,
        rows: Vec<Vec<Vec<f64>>>,
        initial: usize,
        finals: Vec<bool>,
    ) -> Result<Self> {
        let n = states.len();
        let nl = labels.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != nl || r.iter().any(|x| x.len() != n)) {
            return Err(Error::Internal("transition table has the wrong shape".into()));
        }
        if initial >= n || finals.len() != n {
            return Err(Error::Internal("initial or final states out of range".into()));
        }
        let table = rows.into_iter().flatten().flatten().collect();
        let m = WordAutomaton { states, alphabet, labels, table, initial, finals };
        let violations = m.validate();
        if violations.is_empty() {
            Ok(m)
        } else {
            Err(Error::InvalidModel(violations))
        }
    }

    /// Structural violations of the built automaton. Always empty for values
    /// produced by [`AutomatonBuilder::build`]; used to re-check derived
    /// automata.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = structural_violations(&self.states, &self.alphabet, &self.labels);
        for p in 0..self.states.len() {
            for l in 0..self.labels.len() {
                row_violations(
                    &mut out,
                    &self.states,
                    &self.states[p],
                    self.labels[l].name(),
                    self.row(p, l),
                );
            }
        }
        out
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn labels(&self) -> &[InputLabel] {
        &self.labels
    }

    pub fn label_names(&self) -> Vec<String> {
        self.labels.iter().map(|l| l.name.clone()).collect()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> Vec<usize> {
        (0..self.states.len()).filter(|&i| self.finals[i]).collect()
    }

    pub fn is_final(&self, state: usize) -> bool {
        self.finals[state]
    }

    pub fn final_mask(&self) -> &[bool] {
        &self.finals
    }

    pub fn is_crisp(&self) -> bool {
        self.labels.iter().all(InputLabel::is_crisp)
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn label_index(&self, name: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l.name == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn resolve_labels<S: AsRef<str>>(&self, input: &[S]) -> Result<Vec<usize>> {
        input.iter().map(|s| self.label_index(s.as_ref())).collect()
    }

    /// `δ(p, l)` as a slice over target states.
    pub fn row(&self, state: usize, label: usize) -> &[f64] {
        let n = self.states.len();
        let start = (state * self.labels.len() + label) * n;
        &self.table[start..start + n]
    }

    /// One transition of a whole distribution: `Σ_p dist(p)·δ(p, l)`.
    pub fn step(&self, dist: &[f64], label: usize) -> Vec<f64> {
        let n = self.states.len();
        let mut next = vec![0.0; n];
        for (p, &mass) in dist.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for (acc, t) in next.iter_mut().zip(self.row(p, label)) {
                *acc += mass * t;
            }
        }
        next
    }

    /// `δ(p, s)` for a string of label indices.
    pub fn run_from(&self, state: usize, labels: &[usize]) -> StateDistribution {
        let mut dist = StateDistribution::dirac(self.states.len(), state).0;
        for &l in labels {
            dist = self.step(&dist, l);
        }
        StateDistribution(dist)
    }

    /// `δ(q₀, s)`; the empty string yields the Dirac distribution at `q₀`.
    pub fn run<S: AsRef<str>>(&self, input: &[S]) -> Result<StateDistribution> {
        let labels = self.resolve_labels(input)?;
        Ok(self.run_from(self.initial, &labels))
    }

    pub fn finals_mass(&self, dist: &StateDistribution) -> f64 {
        dist.0.iter().zip(&self.finals).filter(|(_, &f)| f).map(|(p, _)| p).sum()
    }

    /// `Σ_{q∈F} δ(q₀, s)(q)`.
    pub fn accept_probability<S: AsRef<str>>(&self, input: &[S]) -> Result<f64> {
        Ok(self.finals_mass(&self.run(input)?))
    }

    pub fn accept_labels(&self, labels: &[usize]) -> f64 {
        self.finals_mass(&self.run_from(self.initial, labels))
    }

    /// Same automaton with a different final set.
    pub fn with_finals(&self, finals: Vec<bool>) -> Result<Self> {
        if finals.len() != self.states.len() {
            return Err(Error::InvalidArgument("final mask has the wrong length".into()));
        }
        Ok(WordAutomaton { finals, ..self.clone() })
    }

    /// Same automaton with states renamed by `rename`.
    pub fn rename_states(&self, rename: impl Fn(&str) -> String) -> Result<Self> {
        let states: Vec<String> = self.states.iter().map(|s| rename(s)).collect();
        let renamed = WordAutomaton { states, ..self.clone() };
        let v = renamed.validate();
        if v.is_empty() {
            Ok(renamed)
        } else {
            Err(Error::InvalidModel(v))
        }
    }

    pub(crate) fn dense_rows(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.states.len())
            .map(|p| (0..self.labels.len()).map(|l| self.row(p, l).to_vec()).collect())
            .collect()
    }
}

pub(crate) fn structural_violations(
    states: &[String],
    alphabet: &Alphabet,
    labels: &[InputLabel],
) -> Vec<Violation> {
    let mut out = Vec::new();
    if states.is_empty() {
        out.push(Violation::Empty { field: "states" });
    }
    if labels.is_empty() {
        out.push(Violation::Empty { field: "labels" });
    }
    for (i, s) in states.iter().enumerate() {
        if !is_valid_name(s) {
            out.push(Violation::UnknownName { field: "state name", name: s.clone() });
        }
        if states[..i].contains(s) {
            out.push(Violation::DuplicateName { field: "state", name: s.clone() });
        }
    }
    for (i, l) in labels.iter().enumerate() {
        if !is_valid_name(&l.name) {
            out.push(Violation::LabelPayload { label: l.name.clone(), detail: "invalid name".into() });
        }
        if labels[..i].iter().any(|o| o.name == l.name) {
            out.push(Violation::DuplicateName { field: "label", name: l.name.clone() });
        }
        if let Some(detail) = l.payload_problem(alphabet) {
            out.push(Violation::LabelPayload { label: l.name.clone(), detail });
        }
    }
    out
}

pub(crate) fn row_violations(out: &mut Vec<Violation>, states: &[String], from: &str, label: &str, row: &[f64]) {
    let mut bad_entry = false;
    for (q, &v) in row.iter().enumerate() {
        if !(-TOL_NORM..=1.0 + TOL_NORM).contains(&v) {
            bad_entry = true;
            out.push(Violation::ProbabilityOutOfRange {
                from: from.to_string(),
                label: label.to_string(),
                to: states[q].clone(),
                value: v,
            });
        }
    }
    let sum: f64 = row.iter().sum();
    if !bad_entry && (sum - 1.0).abs() > TOL_NORM {
        out.push(Violation::RowNotStochastic {
            from: from.to_string(),
            label: label.to_string(),
            sum,
        });
    }
}

/// Name-based description of an automaton, checked by [`validate`] and
/// turned into a [`WordAutomaton`] by [`AutomatonBuilder::build`].
#[derive(Clone, Debug)]
pub struct AutomatonBuilder {
    alphabet: Alphabet,
    states: Vec<String>,
    labels: Vec<InputLabel>,
    initial: Option<String>,
    finals: Vec<String>,
    entries: Vec<(String, String, String, f64)>,
}

impl AutomatonBuilder {
    pub fn new(alphabet: &Alphabet) -> Self {
        AutomatonBuilder {
            alphabet: alphabet.clone(),
            states: Vec::new(),
            labels: Vec::new(),
            initial: None,
            finals: Vec::new(),
            entries: Vec::new(),
        }
    }

    pub fn states<I, S>(mut self, states: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.states.extend(states.into_iter().map(Into::into));
        self
    }

    pub fn label(mut self, label: InputLabel) -> Self {
        self.labels.push(label);
        self
    }

    /// Adds one crisp label per alphabet symbol.
    pub fn crisp_labels(mut self) -> Self {
        for i in 0..self.alphabet.len() {
            self.labels.push(InputLabel {
                name: self.alphabet.symbol(i).to_string(),
                kind: LabelKind::Crisp(i),
            });
        }
        self
    }

    pub fn initial(mut self, state: impl Into<String>) -> Self {
        self.initial = Some(state.into());
        self
    }

    pub fn finals<I, S>(mut self, finals: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.finals.extend(finals.into_iter().map(Into::into));
        self
    }

    pub fn transition(mut self, from: &str, label: &str, to: &str, prob: f64) -> Self {
        self.entries.push((from.into(), label.into(), to.into(), prob));
        self
    }

    /// Sets a whole row `δ(from, label)` given in state order.
    pub fn row(mut self, from: &str, label: &str, probs: &[f64]) -> Self {
        let targets: Vec<String> = self.states.clone();
        for (to, &p) in targets.iter().zip(probs) {
            self.entries.push((from.into(), label.into(), to.clone(), p));
        }
        self
    }

    fn resolve(&self) -> (Vec<Violation>, Option<WordAutomaton>) {
        let mut out = structural_violations(&self.states, &self.alphabet, &self.labels);
        let n = self.states.len();
        let nl = self.labels.len();
        let state_ix: HashMap<&str, usize> =
            self.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let label_ix: HashMap<&str, usize> =
            self.labels.iter().enumerate().map(|(i, l)| (l.name.as_str(), i)).collect();

        let initial = match &self.initial {
            None => {
                out.push(Violation::Empty { field: "initial" });
                None
            }
            Some(q) => {
                let ix = state_ix.get(q.as_str()).copied();
                if ix.is_none() {
                    out.push(Violation::UnknownName { field: "initial", name: q.clone() });
                }
                ix
            }
        };
        let mut finals = vec![false; n];
        for f in &self.finals {
            match state_ix.get(f.as_str()) {
                Some(&i) => finals[i] = true,
                None => out.push(Violation::UnknownName { field: "finals", name: f.clone() }),
            }
        }

        let mut table: Vec<Option<f64>> = vec![None; n * nl * n];
        let mut touched = vec![false; n * nl];
        for (from, label, to, p) in &self.entries {
            let (Some(&a), Some(&l), Some(&b)) = (
                state_ix.get(from.as_str()),
                label_ix.get(label.as_str()),
                state_ix.get(to.as_str()),
            ) else {
                for (field, name, known) in [
                    ("transition source", from, state_ix.contains_key(from.as_str())),
                    ("transition label", label, label_ix.contains_key(label.as_str())),
                    ("transition target", to, state_ix.contains_key(to.as_str())),
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
                out.push(Violation::DuplicateEntry {
                    from: from.clone(),
                    label: label.clone(),
                    to: to.clone(),
                });
            }
            *cell = Some(*p);
        }
        let dense: Vec<f64> = table.into_iter().map(|c| c.unwrap_or(0.0)).collect();
        for a in 0..n {
            for l in 0..nl {
                if !touched[a * nl + l] {
                    out.push(Violation::MissingRow {
                        from: self.states[a].clone(),
                        label: self.labels[l].name.clone(),
                    });
                    continue;
                }
                let start = (a * nl + l) * n;
                row_violations(
                    &mut out,
                    &self.states,
                    &self.states[a],
                    &self.labels[l].name,
                    &dense[start..start + n],
                );
            }
        }
        let built = match (out.is_empty(), initial) {
            (true, Some(initial)) => Some(WordAutomaton {
                states: self.states.clone(),
                alphabet: self.alphabet.clone(),
                labels: self.labels.clone(),
                table: dense,
                initial,
                finals,
            }),
            _ => None,
        };
        (out, built)
    }

    pub fn build(&self) -> Result<WordAutomaton> {
        match self.resolve() {
            (_, Some(m)) => Ok(m),
            (v, None) => Err(Error::InvalidModel(v)),
        }
    }
}

/// Every broken invariant of a described automaton: totality, row
/// stochasticity, name resolution, label payloads.
pub fn validate(description: &AutomatonBuilder) -> Vec<Violation> {
    description.resolve().0
}

/// The all-words automaton of a crisp automaton, evaluated lazily:
/// `δ(p, W′) = Σ_σ W′(σ)·δ(p, σ)`.
#[derive(Clone, Debug)]
pub struct LazyExtensionAutomaton {
    base: WordAutomaton,
    // Label index of each alphabet symbol.
    symbol_label: Vec<usize>,
}

impl LazyExtensionAutomaton {
    /// `base` must have exactly one crisp label per alphabet symbol.
    pub fn new(base: WordAutomaton) -> Result<Self> {
        let n = base.alphabet.len();
        let mut symbol_label = vec![usize::MAX; n];
        for (l, label) in base.labels.iter().enumerate() {
            match label.kind {
                LabelKind::Crisp(i) => symbol_label[i] = l,
                _ => return Err(Error::NotCrisp(label.name.clone())),
            }
        }
        if let Some(i) = symbol_label.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidArgument(format!(
                "crisp automaton has no label for symbol `{}`",
                base.alphabet.symbol(i)
            )));
        }
        Ok(LazyExtensionAutomaton { base, symbol_label })
    }

    pub fn base(&self) -> &WordAutomaton {
        &self.base
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.base.alphabet
    }

    pub fn n_states(&self) -> usize {
        self.base.n_states()
    }

    /// `δ(p, σ̂)`, the base row of symbol `σ`.
    pub fn symbol_row(&self, state: usize, symbol: usize) -> &[f64] {
        self.base.row(state, self.symbol_label[symbol])
    }

    fn mix(&self, state: usize, weights: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.base.n_states()];
        for (sigma, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for (acc, t) in out.iter_mut().zip(self.symbol_row(state, sigma)) {
                *acc += w * t;
            }
        }
        out
    }

    pub fn lazy_step(&self, state: usize, word: &ProbWord) -> Result<StateDistribution> {
        if word.alphabet() != self.alphabet() {
            return Err(Error::MixedAlphabets);
        }
        if state >= self.n_states() {
            return Err(Error::UnknownState(format!("#{state}")));
        }
        Ok(StateDistribution(self.mix(state, word.weights())))
    }

    pub fn lazy_run_from(&self, state: usize, input: &[ProbWord]) -> Result<StateDistribution> {
        if input.iter().any(|w| w.alphabet() != self.alphabet()) {
            return Err(Error::MixedAlphabets);
        }
        let n = self.n_states();
        let mut dist = StateDistribution::dirac(n, state).0;
        for word in input {
            let mut next = vec![0.0; n];
            for (p, &mass) in dist.iter().enumerate() {
                if mass == 0.0 {
                    continue;
                }
                for (acc, t) in next.iter_mut().zip(self.mix(p, word.weights())) {
                    *acc += mass * t;
                }
            }
            dist = next;
        }
        Ok(StateDistribution(dist))
    }

    pub fn lazy_run(&self, input: &[ProbWord]) -> Result<StateDistribution> {
        self.lazy_run_from(self.base.initial, input)
    }

    pub fn lazy_accept(&self, input: &[ProbWord]) -> Result<f64> {
        Ok(self.base.finals_mass(&self.lazy_run(input)?))
    }
}
