use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use xasp::cli::{self, CliConfig, CliError, Command};
use xasp::corpus;
use xasp::instrument::DEFAULT_RECORDING_PREDICATE;
use xasp::oracle::SOLVER_ENV;
use xasp::render::{Format, RenderOptions};
use xasp::syntax::Predicate;

#[derive(Parser)]
#[command(
    name = "xasp",
    version,
    about = "Explain answer sets of stratified logic programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Print the shown atoms of the answer set.
    Solve {
        file: PathBuf,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Print the program extended with rule-recording rules.
    Instrument {
        file: PathBuf,
        #[command(flatten)]
        inst: InstArgs,
    },
    /// Print explanations for derived atoms.
    Explain {
        file: PathBuf,
        /// Comma-separated predicates, e.g. p/2,q/1.
        #[arg(long, value_delimiter = ',')]
        select: Option<Vec<Predicate>>,
        /// Atom or atom pattern, e.g. a(1,2) or a(X,2).
        #[arg(long)]
        atom: Option<String>,
        #[arg(long, default_value = "text")]
        format: Format,
        /// Wrap explanation lines longer than this.
        #[arg(long)]
        width: Option<usize>,
        #[arg(long)]
        no_tests: bool,
        #[command(flatten)]
        inst: InstArgs,
    },
    /// Print the justification tree of one atom.
    Tree {
        file: PathBuf,
        #[arg(long)]
        atom: String,
        #[arg(long, default_value = "text")]
        format: Format,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long)]
        no_tests: bool,
        #[command(flatten)]
        inst: InstArgs,
    },
    /// Compare our answer set with an external solver's model.
    Oracle {
        file: PathBuf,
        #[arg(long, env = SOLVER_ENV)]
        solver: PathBuf,
        #[arg(long)]
        instrumented: bool,
        /// Seconds before the solver is killed.
        #[arg(long, default_value_t = 30.0)]
        timeout: f64,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// List the bundled example programs, or print one.
    Examples { name: Option<String> },
}

#[derive(Args)]
struct InstArgs {
    /// Name of the recording predicate.
    #[arg(long = "pred", default_value = DEFAULT_RECORDING_PREDICATE)]
    pred: String,
    /// Also number and record facts.
    #[arg(long)]
    number_facts: bool,
}

impl InstArgs {
    fn apply(self, c: &mut CliConfig) {
        c.recording_predicate = self.pred;
        c.number_facts = self.number_facts;
    }
}

fn render(format: Format, no_tests: bool, width: Option<usize>) -> RenderOptions {
    RenderOptions {
        format,
        show_test_leaves: !no_tests,
        max_width: width,
    }
}

fn config(sub: Sub) -> Result<CliConfig, CliError> {
    Ok(match sub {
        Sub::Solve { file, format } => {
            let mut c = CliConfig::new(Command::Solve, file);
            c.render.format = format;
            c
        }
        Sub::Instrument { file, inst } => {
            let mut c = CliConfig::new(Command::Instrument, file);
            inst.apply(&mut c);
            c
        }
        Sub::Explain {
            file,
            select,
            atom,
            format,
            width,
            no_tests,
            inst,
        } => {
            let mut c = CliConfig::new(Command::Explain, file);
            c.select = select;
            c.atom = atom;
            c.render = render(format, no_tests, width);
            inst.apply(&mut c);
            c
        }
        Sub::Tree {
            file,
            atom,
            format,
            max_depth,
            no_tests,
            inst,
        } => {
            let mut c = CliConfig::new(Command::Tree, file);
            c.atom = Some(atom);
            c.max_depth = max_depth;
            c.render = render(format, no_tests, None);
            inst.apply(&mut c);
            c
        }
        Sub::Oracle {
            file,
            solver,
            instrumented,
            timeout,
            format,
        } => {
            let mut c = CliConfig::new(Command::Oracle, file);
            c.solver_path = Some(solver);
            c.instrumented = instrumented;
            c.render.format = format;
            c.timeout = Duration::try_from_secs_f64(timeout)
                .map_err(|_| CliError::Usage(format!("invalid timeout {timeout}")))?;
            c
        }
        Sub::Examples { .. } => unreachable!("handled before"),
    })
}

fn examples(name: Option<String>) -> Result<String, CliError> {
    match name {
        None => Ok(corpus::list_examples()
            .iter()
            .map(|e| format!("{}\t{}\n", e.name, e.description))
            .collect()),
        Some(n) => corpus::example(&n)
            .map(|e| e.source.to_owned())
            .ok_or_else(|| CliError::Usage(format!("no bundled example named `{n}`"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Sub::Examples { name } => examples(name),
        sub => config(sub).and_then(|c| {
            cli::run(&c).inspect_err(|e| {
                if let CliError::ModelMismatch(report) = e {
                    print!("{}", cli::render_report(report, c.render.format));
                }
            })
        }),
    };
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(cli::exit::IO as u8);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("xasp: error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
