use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("scalar {0} is outside [0, 1]")]
    ScalarOutOfRange(f64),

    #[error("operands are defined over different alphabets")]
    MixedAlphabets,

    #[error("not a probability distribution: {0}")]
    NotADistribution(String),

    #[error("fuzzy word has zero total membership")]
    ZeroFuzzyWord,

    #[error("basis is linearly dependent")]
    LinearlyDependentBasis,

    #[error("basis has {got} words but the alphabet has {expected} symbols")]
    BasisSize { expected: usize, got: usize },

    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("symbol `{0}` appears more than once")]
    DuplicateSymbol(String),

    #[error("weight {value} for symbol `{symbol}` is outside [0, 1]")]
    WeightOutOfRange { symbol: String, value: f64 },

    #[error("invalid model: {}", join_violations(.0))]
    InvalidModel(Vec<Violation>),

    #[error("symbols not covered by any word label: {}", .0.join(", "))]
    UncoveredSymbols(Vec<String>),

    #[error("label `{0}` is not a crisp symbol")]
    NotCrisp(String),

    #[error("enumeration needs {needed} evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// A single broken structural invariant of an automaton or grammar.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Empty { field: &'static str },
    DuplicateName { field: &'static str, name: String },
    UnknownName { field: &'static str, name: String },
    NameClash { name: String },
    LabelPayload { label: String, detail: String },
    MissingRow { from: String, label: String },
    DuplicateEntry { from: String, label: String, to: String },
    ProbabilityOutOfRange { from: String, label: String, to: String, value: f64 },
    RowNotStochastic { from: String, label: String, sum: f64 },
    EpsilonNotBinary { variable: String, value: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty { field } => write!(f, "{field} is empty"),
            Violation::DuplicateName { field, name } => write!(f, "duplicate {field} `{name}`"),
            Violation::UnknownName { field, name } => write!(f, "{field} refers to unknown `{name}`"),
            Violation::NameClash { name } => {
                write!(f, "`{name}` is used both as a variable and as a label")
            }
            Violation::LabelPayload { label, detail } => write!(f, "label `{label}`: {detail}"),
            Violation::MissingRow { from, label } => {
                write!(f, "no transition defined for ({from}, {label})")
            }
            Violation::DuplicateEntry { from, label, to } => {
                write!(f, "entry ({from}, {label}, {to}) given more than once")
            }
            Violation::ProbabilityOutOfRange { from, label, to, value } => {
                write!(f, "probability {value} of ({from}, {label}, {to}) is outside [0, 1]")
            }
            Violation::RowNotStochastic { from, label, sum } => {
                write!(f, "row ({from}, {label}) sums to {sum}, not 1")
            }
            Violation::EpsilonNotBinary { variable, value } => {
                write!(f, "epsilon probability of `{variable}` is {value}, must be 0 or 1")
            }
        }
    }
}
