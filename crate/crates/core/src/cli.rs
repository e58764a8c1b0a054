//! Command implementations behind the `xasp` binary. Each `run_*` function
//! returns the text for standard output; errors carry their exit code.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Duration;

use thiserror::Error;

use crate::engine::{evaluate, filter_shown, AnswerSet, EngineError, GroundAtom};
use crate::explain::{
    build_explanations, build_justification_tree, select_explanations, strip_extension,
    ExplainError, Explanation, Selection,
};
use crate::instrument::{
    instrument_program, InstrumentError, InstrumentOptions, InstrumentedProgram,
    DEFAULT_RECORDING_PREDICATE,
};
use crate::oracle::{run_solver, OracleError, OracleReport, DEFAULT_TIMEOUT};
use crate::render::{self, Format, RenderOptions};
use crate::syntax::{parse_atom, parse_program, Predicate, Program, SyntaxError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Instrument,
    Explain,
    Tree,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliConfig {
    pub command: Command,
    pub input_path: PathBuf,
    pub select: Option<Vec<Predicate>>,
    pub atom: Option<String>,
    pub render: RenderOptions,
    pub recording_predicate: String,
    pub number_facts: bool,
    pub solver_path: Option<PathBuf>,
    /// Oracle only: hand the instrumented program to the solver.
    pub instrumented: bool,
    pub timeout: Duration,
    /// Tree only: refuse trees deeper than this.
    pub max_depth: Option<usize>,
}

impl CliConfig {
    pub fn new(command: Command, input_path: impl Into<PathBuf>) -> Self {
        Self {
            command,
            input_path: input_path.into(),
            select: None,
            atom: None,
            render: RenderOptions::default(),
            recording_predicate: DEFAULT_RECORDING_PREDICATE.to_owned(),
            number_facts: false,
            solver_path: None,
            instrumented: false,
            timeout: DEFAULT_TIMEOUT,
            max_depth: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match self.command {
            Command::Tree if self.atom.is_none() => {
                Err(CliError::Usage("tree requires --atom".into()))
            }
            Command::Oracle if self.solver_path.is_none() => Err(CliError::Usage(format!(
                "oracle requires --solver or the {} environment variable",
                crate::oracle::SOLVER_ENV
            ))),
            Command::Solve if self.render.format == Format::Dot => Err(CliError::Usage(
                "solve supports --format text or json".into(),
            )),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{source}", .path.display())]
    Syntax { path: PathBuf, source: SyntaxError },
    #[error("invalid --atom: {0}")]
    AtomArgument(SyntaxError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Instrument(#[from] InstrumentError),
    #[error(transparent)]
    Explain(#[from] ExplainError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(
        "solver model differs: {} missing in ours, {} extra in ours",
        .0.missing_in_ours.len(),
        .0.extra_in_ours.len()
    )]
    ModelMismatch(OracleReport),
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
    pub const SYNTAX: i32 = 4;
    pub const UNSAFE: i32 = 5;
    pub const UNSTRATIFIABLE: i32 = 6;
    pub const RESERVED_PREDICATE: i32 = 7;
    pub const NOT_IN_ANSWER_SET: i32 = 8;
    pub const SOLVER: i32 = 9;
    pub const MODEL_MISMATCH: i32 = 10;
    pub const UNKNOWN_CONST: i32 = 11;
    pub const EXPLAIN: i32 = 12;
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Io { .. } => exit::IO,
            CliError::Syntax { .. } | CliError::AtomArgument(_) => exit::SYNTAX,
            CliError::Engine(EngineError::Unsafe(_)) => exit::UNSAFE,
            CliError::Engine(EngineError::Unstratifiable(_)) => exit::UNSTRATIFIABLE,
            CliError::Engine(EngineError::UnknownConst { .. }) => exit::UNKNOWN_CONST,
            CliError::Engine(EngineError::NotGround(_)) => exit::EXPLAIN,
            CliError::Instrument(_) => exit::RESERVED_PREDICATE,
            CliError::Explain(ExplainError::NotInAnswerSet(_)) => exit::NOT_IN_ANSWER_SET,
            CliError::Explain(_) => exit::EXPLAIN,
            CliError::Oracle(_) => exit::SOLVER,
            CliError::ModelMismatch(_) => exit::MODEL_MISMATCH,
        }
    }
}

pub fn load(config: &CliConfig) -> Result<Program, CliError> {
    let path = &config.input_path;
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    parse_program(&text).map_err(|source| CliError::Syntax {
        path: path.clone(),
        source,
    })
}

/// Dispatches on `config.command`.
pub fn run(config: &CliConfig) -> Result<String, CliError> {
    config.validate()?;
    match config.command {
        Command::Solve => run_solve(config),
        Command::Instrument => run_instrument(config),
        Command::Explain => run_explain(config),
        Command::Tree => run_tree(config),
        Command::Oracle => {
            let report = run_oracle(config)?;
            if report.matches {
                Ok(render_report(&report, config.render.format))
            } else {
                Err(CliError::ModelMismatch(report))
            }
        }
    }
}

pub fn run_solve(config: &CliConfig) -> Result<String, CliError> {
    let program = load(config)?;
    let answer_set = evaluate(&program)?;
    let shown = filter_shown(&answer_set, &program);
    Ok(match config.render.format {
        Format::Json => render::answer_set_to_json(&shown, &answer_set) + "\n",
        _ => render::answer_set_to_text(&shown),
    })
}

fn instrument(config: &CliConfig, program: &Program) -> Result<InstrumentedProgram, CliError> {
    Ok(instrument_program(
        program,
        &InstrumentOptions {
            recording_predicate: config.recording_predicate.clone(),
            number_facts: config.number_facts,
        },
    )?)
}

pub fn run_instrument(config: &CliConfig) -> Result<String, CliError> {
    let program = load(config)?;
    let instrumented = instrument(config, &program)?;
    Ok(render::program_to_source(&instrumented.extended))
}

struct Explained {
    program: InstrumentedProgram,
    answer_set: AnswerSet,
    explanations: Vec<Explanation>,
}

fn explained(config: &CliConfig) -> Result<Explained, CliError> {
    let program = load(config)?;
    let instrumented = instrument(config, &program)?;
    let extended = evaluate(&instrumented.extended)?;
    let explanations = build_explanations(&extended, &instrumented)?;
    Ok(Explained {
        answer_set: strip_extension(&extended, &instrumented.recording_predicate),
        program: instrumented,
        explanations,
    })
}

fn parse_atom_arg(text: &str) -> Result<crate::syntax::Atom, CliError> {
    parse_atom(text).map_err(CliError::AtomArgument)
}

/// Without `--select` or `--atom`, explanations of shown predicates (all
/// when the program has no `#show`).
pub fn run_explain(config: &CliConfig) -> Result<String, CliError> {
    let ex = explained(config)?;
    let mut selection = Selection {
        predicates: config.select.clone().map(|s| s.into_iter().collect()),
        atom: None,
    };
    if let Some(text) = &config.atom {
        let pattern = parse_atom_arg(text)?;
        if let Some(ground) = GroundAtom::from_atom(&pattern) {
            if !ex.answer_set.contains(&ground) {
                return Err(ExplainError::NotInAnswerSet(ground.to_string()).into());
            }
        }
        selection.atom = Some(pattern);
    }
    if selection.predicates.is_none()
        && selection.atom.is_none()
        && !ex.program.original.shows.is_empty()
    {
        selection.predicates = Some(
            ex.program
                .original
                .shows
                .iter()
                .cloned()
                .collect::<BTreeSet<_>>(),
        );
    }
    let selected = select_explanations(&ex.explanations, &selection);
    Ok(match config.render.format {
        Format::Text => render::explanations_to_text(&selected, &config.render),
        Format::Json => render::explanations_to_json(&selected) + "\n",
        Format::Dot => render::explanations_to_dot(&selected, &config.render),
    })
}

pub fn run_tree(config: &CliConfig) -> Result<String, CliError> {
    let text = config
        .atom
        .as_deref()
        .ok_or_else(|| CliError::Usage("tree requires --atom".into()))?;
    let pattern = parse_atom_arg(text)?;
    let atom = GroundAtom::from_atom(&pattern).ok_or_else(|| {
        CliError::AtomArgument(SyntaxError::NotGround {
            atom: pattern.to_string(),
            variable: pattern.variables().next().unwrap_or_default().to_owned(),
        })
    })?;
    let ex = explained(config)?;
    let tree = build_justification_tree(&atom, &ex.explanations, &ex.answer_set, config.max_depth)?;
    Ok(match config.render.format {
        Format::Text => render::tree_to_text(&tree, &config.render),
        Format::Json => render::tree_to_json(&tree, config.render.show_test_leaves) + "\n",
        Format::Dot => render::tree_to_dot(&tree, &config.render),
    })
}

/// Runs the external solver on the input (or its instrumented form) and
/// compares its model with our shown atoms.
pub fn run_oracle(config: &CliConfig) -> Result<OracleReport, CliError> {
    let solver = config
        .solver_path
        .as_deref()
        .ok_or_else(|| CliError::Usage("oracle requires a solver path".into()))?;
    let program = load(config)?;
    let (ours, theirs) = if config.instrumented {
        let instrumented = instrument(config, &program)?;
        let answer_set = evaluate(&instrumented.extended)?;
        let ours = filter_shown(&answer_set, &instrumented.extended);
        let mut file = tempfile::Builder::new()
            .prefix("xasp-")
            .suffix(".lp")
            .tempfile()
            .map_err(|source| CliError::Io {
                path: std::env::temp_dir(),
                source,
            })?;
        file.write_all(render::program_to_source(&instrumented.extended).as_bytes())
            .map_err(|source| CliError::Io {
                path: file.path().to_owned(),
                source,
            })?;
        let theirs = run_solver(solver, file.path(), config.timeout)?;
        (ours, theirs)
    } else {
        let answer_set = evaluate(&program)?;
        let ours = filter_shown(&answer_set, &program);
        (
            ours,
            run_solver(solver, &config.input_path, config.timeout)?,
        )
    };
    Ok(OracleReport::compare(&ours, &theirs))
}

pub fn render_report(report: &OracleReport, format: Format) -> String {
    let list = |s: &BTreeSet<GroundAtom>| s.iter().map(ToString::to_string).collect::<Vec<_>>();
    match format {
        Format::Json => {
            serde_json::json!({
                "match": report.matches,
                "missing_in_ours": list(&report.missing_in_ours),
                "extra_in_ours": list(&report.extra_in_ours),
            })
            .to_string()
                + "\n"
        }
        _ => {
            let mut out = String::from(if report.matches {
                "match\n"
            } else {
                "mismatch\n"
            });
            if !report.missing_in_ours.is_empty() {
                let _ = writeln!(out, "missing: {}", list(&report.missing_in_ours).join(" "));
            }
            if !report.extra_in_ours.is_empty() {
                let _ = writeln!(out, "extra: {}", list(&report.extra_in_ours).join(" "));
            }
            out
        }
    }
}
