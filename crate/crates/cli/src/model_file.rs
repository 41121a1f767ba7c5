//! JSON model files.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "kind": "automaton",
//!   "alphabet": ["a", "b"],
//!   "labels": [{ "name": "W1", "kind": "word", "payload": "0.9\\a + 0.1\\b" }],
//!   "states": ["q0", "q1"],
//!   "initial": "q0",
//!   "finals": ["q1"],
//!   "transitions": [{ "from": "q0", "label": "W1", "to": "q1", "prob": 1.0 }]
//! }
//! ```
//!
//! Grammars use `"kind": "grammar"` with `variables`, `start`,
//! `epsilon_probs` and `productions` instead. Crisp labels have no payload
//! and are named after their symbol. `lazy_extension: true` marks a crisp
//! model written by `cww extend`.

use std::fs;
use std::path::Path;

use cww_core::{
    parse_zadeh, parse_zadeh_fuzzy, Alphabet, Error, InputLabel, LabelKind, ProbGrammar, WordAutomaton,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub alphabet: Vec<String>,
    pub labels: Vec<LabelEntry>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub lazy_extension: bool,
    #[serde(flatten)]
    pub body: Body,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Body {
    Automaton {
        states: Vec<String>,
        initial: String,
        finals: Vec<String>,
        transitions: Vec<Entry>,
    },
    Grammar {
        variables: Vec<String>,
        start: String,
        epsilon_probs: Vec<EpsilonEntry>,
        productions: Vec<Entry>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelKindName {
    Crisp,
    Word,
    Fuzzy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelEntry {
    pub name: String,
    pub kind: LabelKindName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub from: String,
    pub label: String,
    pub to: String,
    pub prob: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonEntry {
    pub variable: String,
    pub prob: f64,
}

/// A loaded, validated model.
#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Automaton { model: WordAutomaton, lazy_extension: bool },
    Grammar { grammar: ProbGrammar, lazy_extension: bool },
}

impl Model {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Model::Automaton { .. } => "automaton",
            Model::Grammar { .. } => "grammar",
        }
    }
}

fn malformed(detail: impl Into<String>) -> CliError {
    CliError::Malformed(detail.into())
}

fn labels_from(alphabet: &Alphabet, entries: &[LabelEntry]) -> Result<Vec<InputLabel>, CliError> {
    entries
        .iter()
        .map(|e| {
            let payload = || {
                e.payload
                    .as_deref()
                    .ok_or_else(|| malformed(format!("label `{}` needs a payload", e.name)))
            };
            let label = match e.kind {
                LabelKindName::Crisp => {
                    if e.payload.is_some() {
                        return Err(malformed(format!("crisp label `{}` must not have a payload", e.name)));
                    }
                    InputLabel::crisp(alphabet, &e.name)
                        .map_err(|_| malformed(format!("crisp label `{}` is not a symbol of the alphabet", e.name)))?
                }
                LabelKindName::Word => InputLabel::word(
                    &e.name,
                    parse_zadeh(payload()?, alphabet).map_err(|err| payload_error(&e.name, err))?,
                ),
                LabelKindName::Fuzzy => InputLabel::fuzzy(
                    &e.name,
                    parse_zadeh_fuzzy(payload()?, alphabet).map_err(|err| payload_error(&e.name, err))?,
                ),
            };
            Ok(label)
        })
        .collect()
}

fn payload_error(label: &str, err: Error) -> CliError {
    malformed(format!("payload of label `{label}`: {err}"))
}

fn label_entries(labels: &[InputLabel]) -> Vec<LabelEntry> {
    labels
        .iter()
        .map(|l| match l.kind() {
            LabelKind::Crisp(_) => LabelEntry { name: l.name().into(), kind: LabelKindName::Crisp, payload: None },
            LabelKind::Word(w) => {
                LabelEntry { name: l.name().into(), kind: LabelKindName::Word, payload: Some(w.to_string()) }
            }
            LabelKind::Fuzzy(w) => {
                LabelEntry { name: l.name().into(), kind: LabelKindName::Fuzzy, payload: Some(w.to_string()) }
            }
        })
        .collect()
}

fn invalid(err: Error) -> CliError {
    malformed(err.to_string())
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
        if file.format_version != FORMAT_VERSION {
            return Err(malformed(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                file.format_version
            )));
        }
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text =
            fs::read_to_string(path).map_err(|e| malformed(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Malformed(d) => malformed(format!("{}: {d}", path.display())),
            other => other,
        })
    }

    pub fn to_model(&self) -> Result<Model, CliError> {
        let alphabet = Alphabet::new(self.alphabet.iter().cloned()).map_err(invalid)?;
        let labels = labels_from(&alphabet, &self.labels)?;
        match &self.body {
            Body::Automaton { states, initial, finals, transitions } => {
                let mut b = WordAutomaton::builder(&alphabet)
                    .states(states.iter().cloned())
                    .initial(initial.clone())
                    .finals(finals.iter().cloned());
                for l in labels {
                    b = b.label(l);
                }
                for t in transitions {
                    b = b.transition(&t.from, &t.label, &t.to, t.prob);
                }
                let model = b.build().map_err(invalid)?;
                if self.lazy_extension && !model.is_crisp() {
                    return Err(malformed("lazy_extension is only valid for crisp models"));
                }
                Ok(Model::Automaton { model, lazy_extension: self.lazy_extension })
            }
            Body::Grammar { variables, start, epsilon_probs, productions } => {
                let mut b = ProbGrammar::builder(&alphabet).variables(variables.iter().cloned()).start(start.clone());
                for l in labels {
                    b = b.label(l);
                }
                for e in epsilon_probs {
                    b = b.epsilon(e.variable.clone(), e.prob);
                }
                for p in productions {
                    b = b.production(&p.from, &p.label, &p.to, p.prob);
                }
                let grammar = b.build().map_err(invalid)?;
                if self.lazy_extension && !grammar.is_crisp() {
                    return Err(malformed("lazy_extension is only valid for crisp models"));
                }
                Ok(Model::Grammar { grammar, lazy_extension: self.lazy_extension })
            }
        }
    }

    pub fn from_automaton(m: &WordAutomaton, lazy_extension: bool) -> Self {
        let states = m.states();
        let labels = m.label_names();
        let mut transitions = Vec::new();
        for (p, from) in states.iter().enumerate() {
            for (l, label) in labels.iter().enumerate() {
                for (q, to) in states.iter().enumerate() {
                    transitions.push(Entry {
                        from: from.clone(),
                        label: label.clone(),
                        to: to.clone(),
                        prob: m.row(p, l)[q],
                    });
                }
            }
        }
        ModelFile {
            format_version: FORMAT_VERSION,
            alphabet: m.alphabet().symbols().to_vec(),
            labels: label_entries(m.labels()),
            lazy_extension,
            body: Body::Automaton {
                states: states.to_vec(),
                initial: states[m.initial()].clone(),
                finals: m.finals().into_iter().map(|i| states[i].clone()).collect(),
                transitions,
            },
        }
    }

    pub fn from_grammar(g: &ProbGrammar, lazy_extension: bool) -> Self {
        let vars = g.variables();
        let labels = g.label_names();
        let mut productions = Vec::new();
        for (a, from) in vars.iter().enumerate() {
            for (l, label) in labels.iter().enumerate() {
                for (b, to) in vars.iter().enumerate() {
                    productions.push(Entry {
                        from: from.clone(),
                        label: label.clone(),
                        to: to.clone(),
                        prob: g.chain_prob(a, l, b),
                    });
                }
            }
        }
        ModelFile {
            format_version: FORMAT_VERSION,
            alphabet: g.alphabet().symbols().to_vec(),
            labels: label_entries(g.labels()),
            lazy_extension,
            body: Body::Grammar {
                variables: vars.to_vec(),
                start: vars[g.start()].clone(),
                epsilon_probs: vars
                    .iter()
                    .enumerate()
                    .map(|(a, v)| EpsilonEntry { variable: v.clone(), prob: g.epsilon_prob(a) })
                    .collect(),
                productions,
            },
        }
    }

    pub fn from_model(model: &Model) -> Self {
        match model {
            Model::Automaton { model, lazy_extension } => Self::from_automaton(model, *lazy_extension),
            Model::Grammar { grammar, lazy_extension } => Self::from_grammar(grammar, *lazy_extension),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model files always serialize");
        s.push('\n');
        s
    }
}

pub fn load(path: &Path) -> Result<Model, CliError> {
    ModelFile::read(path)?.to_model().map_err(|e| match e {
        CliError::Malformed(d) => malformed(format!("{}: {d}", path.display())),
        other => other,
    })
}

pub fn save(model: &Model, path: &Path) -> Result<(), CliError> {
    fs::write(path, ModelFile::from_model(model).to_json())
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
