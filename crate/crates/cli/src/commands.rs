use std::io::Write;
use std::path::Path;

use cww_core::{
    automaton_from_grammar, grammar_from_automaton, grammar_generalized_extend, grammar_retract_with, pacv_extend,
    parse_zadeh, retract_with, ProbWord, RetractOptions,
};

use crate::checks::{self, CheckContext};
use crate::model_file::{self, Model, ModelFile};
use crate::{CheckArgs, Cli, CliError, Command, GrammarOp, EXIT_CHECK_FAILED};

fn io_error(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn emit(model: &Model, out_path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match out_path {
        Some(p) => model_file::save(model, p),
        None => out.write_all(ModelFile::from_model(model).to_json().as_bytes()).map_err(io_error),
    }
}

fn eval(cli: &Cli, model: &Path, input: &[String], words: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let model = model_file::load(model)?;
    let p = if words {
        let alphabet = match &model {
            Model::Automaton { model, .. } => model.alphabet(),
            Model::Grammar { grammar, .. } => grammar.alphabet(),
        };
        let parsed = input.iter().map(|w| parse_zadeh(w, alphabet)).collect::<Result<Vec<ProbWord>, _>>()?;
        match &model {
            Model::Automaton { model, .. } if model.is_crisp() => pacv_extend(model)?.lazy_accept(&parsed)?,
            Model::Grammar { grammar, .. } if grammar.is_crisp() => {
                grammar_generalized_extend(grammar)?.generate_probability(&parsed)?
            }
            _ => {
                return Err(CliError::Usage(
                    "word inputs need a crisp model; run `cww extend` on a word-labeled model first".into(),
                ))
            }
        }
    } else {
        let tokens: Vec<&str> = input.iter().flat_map(|s| s.split_whitespace()).collect();
        match &model {
            Model::Automaton { model, .. } => model.accept_probability(&tokens)?,
            Model::Grammar { grammar, .. } => grammar.generate_probability(&tokens)?,
        }
    };
    writeln!(out, "{:.*}", cli.precision, p).map_err(io_error)
}

fn retract_model(model: Model, options: RetractOptions, lazy_extension: bool) -> Result<Model, CliError> {
    Ok(match model {
        Model::Automaton { model, .. } => Model::Automaton { model: retract_with(&model, options)?, lazy_extension },
        Model::Grammar { grammar, .. } => {
            Model::Grammar { grammar: grammar_retract_with(&grammar, options)?, lazy_extension }
        }
    })
}

fn expect_grammar(model: Model, op: &str) -> Result<Model, CliError> {
    match model {
        Model::Grammar { .. } => Ok(model),
        Model::Automaton { .. } => Err(CliError::Usage(format!("`grammar {op}` needs a grammar model"))),
    }
}

fn grammar_op(cli: &Cli, op: &GrammarOp, out: &mut dyn Write) -> Result<(), CliError> {
    let options = RetractOptions { restrict_alphabet: cli.restrict_alphabet };
    let (result, target) = match op {
        GrammarOp::ToAutomaton { model, out } => {
            let Model::Grammar { grammar, lazy_extension } = model_file::load(model)? else {
                return Err(CliError::Usage("`grammar to-automaton` needs a grammar model".into()));
            };
            (Model::Automaton { model: automaton_from_grammar(&grammar)?, lazy_extension }, out)
        }
        GrammarOp::FromAutomaton { model, out } => {
            let Model::Automaton { model, lazy_extension } = model_file::load(model)? else {
                return Err(CliError::Usage("`grammar from-automaton` needs an automaton model".into()));
            };
            (Model::Grammar { grammar: grammar_from_automaton(&model)?, lazy_extension }, out)
        }
        GrammarOp::Retract { model, out } => {
            (retract_model(expect_grammar(model_file::load(model)?, "retract")?, options, false)?, out)
        }
        GrammarOp::Extend { model, out } => {
            (retract_model(expect_grammar(model_file::load(model)?, "extend")?, options, true)?, out)
        }
    };
    emit(&result, target.as_deref(), out)
}

fn check(cli: &Cli, args: &CheckArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let check = checks::find(&args.kind).ok_or_else(|| CliError::Usage(format!("unknown check `{}`", args.kind)))?;
    let models = args.models.iter().map(|p| model_file::load(p)).collect::<Result<Vec<_>, _>>()?;
    let ctx = CheckContext {
        models,
        max_len: args.max_len,
        tol: cli.tol,
        epsilon: args.epsilon,
        level: args.level,
        samples: args.samples,
        seed: cli.seed,
        word_language: args.word_language,
        budget: args.budget,
        probe_words: args.probe_words,
        restrict_alphabet: cli.restrict_alphabet,
    };
    let outcome = check.run(&ctx)?;
    let text = serde_json::to_string_pretty(&outcome.report).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out, "{text}").map_err(io_error)?;
    Ok(if outcome.passed { 0 } else { EXIT_CHECK_FAILED })
}

/// Executes one parsed command line and returns its exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let options = RetractOptions { restrict_alphabet: cli.restrict_alphabet };
    match &cli.command {
        Command::Eval { model, input, words } => eval(cli, model, input, *words, out)?,
        Command::Retract { model, out: target } => {
            let result = retract_model(model_file::load(model)?, options, false)?;
            emit(&result, target.as_deref(), out)?
        }
        Command::Extend { model, out: target } => {
            let result = retract_model(model_file::load(model)?, options, true)?;
            emit(&result, target.as_deref(), out)?
        }
        Command::Grammar { op } => grammar_op(cli, op, out)?,
        Command::Check(args) => return check(cli, args, out),
    }
    Ok(0)
}
