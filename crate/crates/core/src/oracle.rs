//! Cross-checking against an external solver run as a child process.

use std::collections::BTreeSet;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::thread;
use std::time::Duration;

use thiserror::Error;
use wait_timeout::ChildExt;

use crate::engine::GroundAtom;

/// Environment variable holding the default solver path.
pub const SOLVER_ENV: &str = "XASP_SOLVER";

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("cannot run solver `{}`: {message}", .path.display())]
    SolverSpawn { path: PathBuf, message: String },
    #[error("solver `{}` did not finish within {} s", .path.display(), .timeout.as_secs_f64())]
    SolverTimeout { path: PathBuf, timeout: Duration },
    #[error("cannot parse solver output: {0}")]
    SolverOutputParse(String),
}

/// Outcome of comparing our atoms to the solver's model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub matches: bool,
    /// In the solver's model but not in ours.
    pub missing_in_ours: BTreeSet<GroundAtom>,
    /// In ours but not in the solver's model.
    pub extra_in_ours: BTreeSet<GroundAtom>,
}

impl OracleReport {
    pub fn compare(ours: &BTreeSet<GroundAtom>, theirs: &BTreeSet<GroundAtom>) -> Self {
        let missing_in_ours: BTreeSet<_> = theirs.difference(ours).cloned().collect();
        let extra_in_ours: BTreeSet<_> = ours.difference(theirs).cloned().collect();
        Self {
            matches: missing_in_ours.is_empty() && extra_in_ours.is_empty(),
            missing_in_ours,
            extra_in_ours,
        }
    }
}

/// Parses a model printed as a single line of whitespace-separated ground
/// atoms. Output with no non-blank line is the empty model; more than one
/// non-blank line is rejected.
pub fn parse_model(output: &str) -> Result<BTreeSet<GroundAtom>, OracleError> {
    let mut lines = output.lines().filter(|l| !l.trim().is_empty());
    let Some(line) = lines.next() else {
        return Ok(BTreeSet::new());
    };
    if let Some(extra) = lines.next() {
        return Err(OracleError::SolverOutputParse(format!(
            "expected one model line, found another: `{}`",
            truncate(extra)
        )));
    }
    line.split_whitespace()
        .map(|token| {
            GroundAtom::parse(token).map_err(|e| {
                OracleError::SolverOutputParse(format!(
                    "`{}` is not a ground atom: {e}",
                    truncate(token)
                ))
            })
        })
        .collect()
}

fn truncate(s: &str) -> String {
    const MAX: usize = 60;
    if s.chars().count() <= MAX {
        s.to_owned()
    } else {
        s.chars().take(MAX).collect::<String>() + "..."
    }
}

/// Runs `solver program` and parses its standard output with
/// [`parse_model`]. The exit status is ignored, since solvers commonly use
/// nonzero codes to report satisfiability.
pub fn run_solver(
    solver: &Path,
    program: &Path,
    timeout: Duration,
) -> Result<BTreeSet<GroundAtom>, OracleError> {
    let spawn_error = |message: String| OracleError::SolverSpawn {
        path: solver.to_owned(),
        message,
    };
    let mut child = Command::new(solver)
        .arg(program)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| spawn_error(e.to_string()))?;

    let mut stdout = child.stdout.take().expect("stdout is piped");
    let reader = thread::spawn(move || {
        let mut buf = Vec::new();
        stdout.read_to_end(&mut buf).map(|_| buf)
    });

    let status = child
        .wait_timeout(timeout)
        .map_err(|e| spawn_error(e.to_string()))?;
    if status.is_none() {
        let _ = child.kill();
        let _ = child.wait();
        return Err(OracleError::SolverTimeout {
            path: solver.to_owned(),
            timeout,
        });
    }

    let bytes = reader
        .join()
        .map_err(|_| spawn_error("output reader panicked".into()))?
        .map_err(|e| spawn_error(e.to_string()))?;
    let text = String::from_utf8(bytes)
        .map_err(|_| OracleError::SolverOutputParse("output is not valid UTF-8".into()))?;
    parse_model(&text)
}
