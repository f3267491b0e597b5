//! Library side of the `cp-lattice` command-line tool: argument definitions, JSON
//! documents and the subcommands, kept out of `main` so they can be driven in-process.

pub mod args;
pub mod commands;
pub mod document;

use rayon::prelude::*;
use thiserror::Error;

use crate::document::ErrorDocument;

pub use args::Cli;
pub use commands::run;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Process exit status. Larger values dominate when a batch is summarized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Cp = 0,
    NotCp = 1,
    Malformed = 2,
    /// The closed-form and general qubit verdicts disagree.
    Mismatch = 3,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn from_cp(cp: bool) -> Self {
        if cp {
            Self::Cp
        } else {
            Self::NotCp
        }
    }
}

/// What a subcommand writes: one document (or DOT text) for stdout, optional
/// diagnostics for stderr, and the exit status.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: Vec<String>,
    pub status: Status,
}

impl Outcome {
    pub fn ok(stdout: String, status: Status) -> Self {
        Self {
            stdout,
            stderr: Vec::new(),
            status,
        }
    }

    pub fn failure(err: &CliError) -> Self {
        Self {
            stdout: String::new(),
            stderr: vec![format!("cp-lattice: {err}")],
            status: Status::Malformed,
        }
    }
}

/// One processed batch line: its JSON text and status.
pub type LineResult = Result<(String, Status), CliError>;

/// Runs `f` over the nonblank lines of `text`, possibly in parallel, and joins the results
/// as JSON Lines in input order. Lines that fail become error objects and make the
/// batch exit with at least [`Status::Malformed`]; a mismatch anywhere wins over that.
pub fn run_batch<F>(text: &str, threads: Option<usize>, f: F) -> Result<Outcome, CliError>
where
    F: Fn(&str) -> LineResult + Sync,
{
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l))
        .collect();
    let work = || -> Vec<(usize, LineResult)> {
        lines.par_iter().map(|&(no, line)| (no, f(line))).collect()
    };
    let results = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(work),
        None => work(),
    };

    let mut stdout = String::new();
    let mut stderr = Vec::new();
    let mut status = Status::Cp;
    for (line, result) in results {
        let (text, s) = match result {
            Ok(ok) => ok,
            Err(err) => {
                stderr.push(format!("cp-lattice: line {line}: {err}"));
                let doc = ErrorDocument {
                    line,
                    error: err.to_string(),
                };
                (
                    serde_json::to_string(&doc).expect("error document serializes"),
                    Status::Malformed,
                )
            }
        };
        if s == Status::Mismatch {
            stderr.push(format!(
                "cp-lattice: line {line}: closed-form and general verdicts disagree"
            ));
        }
        status = status.max(s);
        stdout.push_str(&text);
        stdout.push('\n');
    }
    Ok(Outcome {
        stdout,
        stderr,
        status,
    })
}
