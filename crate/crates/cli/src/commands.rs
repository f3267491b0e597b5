use std::io::Read;
use std::path::Path;

use cp_lattice::lattice::{cp_test, cp_test_matrix, matrix_from_schur_params, random_cp};
use cp_lattice::lattice_graph::{build_lattice_graph, emit_dot};
use cp_lattice::qubit::{analysis_matrix, closed_form_params, eight_inequalities_cp};
use cp_lattice::{ChoiMatrix, KingRuskaiForm};
use serde::{Deserialize, Serialize};

use crate::args::{Cli, Command, InputArgs, Mode, QubitArgs};
use crate::document::{ChannelDocument, ClosedFormDocument, Metadata, ParamsInput, ResultDocument};
use crate::{run_batch, CliError, Outcome, Status};

/// Executes a parsed command line. Never panics on bad input; every failure becomes an
/// [`Outcome`] with [`Status::Malformed`].
pub fn run(cli: Cli) -> Outcome {
    let tol = cli.tol;
    let result = if !(tol.is_finite() && tol >= 0.0) {
        Err(CliError::Malformed(format!(
            "tolerance must be a finite nonnegative number, got {tol}"
        )))
    } else {
        dispatch(cli.command, tol)
    };
    result.unwrap_or_else(|e| Outcome::failure(&e))
}

fn dispatch(command: Command, tol: f64) -> Result<Outcome, CliError> {
    match command {
        Command::TestCp(args) => channel_command(args, tol, false),
        Command::Params(args) => channel_command(args, tol, true),
        Command::Reconstruct { input } => reconstruct(&read_input(input.as_deref())?),
        Command::Qubit(args) => qubit_command(args, tol),
        Command::LatticeDot { n, params } => {
            let params = params.as_deref().map(read_path).transpose()?;
            lattice_dot(n, params.as_deref())
        }
        Command::Random { n, seed } => random(n, seed),
    }
}

fn read_path(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_input(path: Option<&Path>) -> Result<Vec<u8>, CliError> {
    match path {
        Some(p) if p != Path::new("-") => read_path(p),
        _ => {
            let mut buf = Vec::new();
            std::io::stdin()
                .read_to_end(&mut buf)
                .map_err(|source| CliError::Io {
                    path: "stdin".into(),
                    source,
                })?;
            Ok(buf)
        }
    }
}

fn read_batch(path: &Path) -> Result<String, CliError> {
    String::from_utf8(read_path(path)?)
        .map_err(|_| CliError::Malformed(format!("{} is not UTF-8", path.display())))
}

fn parse<'a, T: Deserialize<'a>>(bytes: &'a [u8], what: &str) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Malformed(format!("{what}: {e}")))
}

fn pretty<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn compact<T: Serialize>(doc: &T) -> String {
    serde_json::to_string(doc).expect("documents serialize")
}

/// Lattice test of one channel document. A `pauli_transfer` document is tested through
/// the Choi matrix of the map itself.
pub fn test_document(
    bytes: &[u8],
    tol: f64,
    with_params: bool,
) -> Result<(ResultDocument, Status), CliError> {
    let doc: ChannelDocument = parse(bytes, "channel document")?;
    let choi = doc.to_spec()?.to_choi();
    let verdict = cp_test(&choi, tol);
    let result = ResultDocument::from_verdict(&verdict, with_params, Metadata::new(tol, bytes));
    Ok((result, Status::from_cp(verdict.is_cp())))
}

fn channel_command(args: InputArgs, tol: f64, with_params: bool) -> Result<Outcome, CliError> {
    if let Some(batch) = &args.batch {
        let text = read_batch(batch)?;
        return run_batch(&text, args.threads, |line| {
            test_document(line.as_bytes(), tol, with_params).map(|(d, s)| (compact(&d), s))
        });
    }
    let bytes = read_input(args.input.as_deref())?;
    let (doc, status) = test_document(&bytes, tol, with_params)?;
    Ok(Outcome::ok(pretty(&doc), status))
}

/// Rebuilds the Choi document from a params (or result) document.
pub fn reconstruct(bytes: &[u8]) -> Result<Outcome, CliError> {
    let input: ParamsInput = parse(bytes, "params document")?;
    let params = input.into_params().to_params()?;
    let size = params.size();
    let n = (1..=size).find(|n| n * n >= size).unwrap_or(1);
    if n * n != size {
        return Err(CliError::Malformed(format!(
            "params: diagonal length {size} is not a perfect square"
        )));
    }
    let s = matrix_from_schur_params(&params).map_err(|e| CliError::Malformed(e.to_string()))?;
    let choi = ChoiMatrix::new(n, s).map_err(|e| CliError::Malformed(e.to_string()))?;
    Ok(Outcome::ok(
        pretty(&ChannelDocument::from_choi(&choi)),
        Status::Cp,
    ))
}

/// One line of a qubit batch. A full `pauli_transfer` channel document also parses.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QubitInput {
    pub t: [f64; 3],
    pub lambda: [f64; 3],
}

/// Qubit test in the requested mode. `Both` reports the general verdict and returns
/// [`Status::Mismatch`] when the two paths disagree.
pub fn test_qubit(
    input: &QubitInput,
    mode: Mode,
    tol: f64,
    raw: &[u8],
) -> Result<(ResultDocument, Status), CliError> {
    let p = KingRuskaiForm::new(input.t, input.lambda)
        .ok_or_else(|| CliError::Malformed("t and lambda must be finite".into()))?;
    let metadata = Metadata::new(tol, raw);
    let closed = || eight_inequalities_cp(&p, tol);
    let general = || cp_test_matrix(&analysis_matrix(&p), tol);
    let (verdict, agree) = match mode {
        Mode::ClosedForm => (closed(), true),
        Mode::General => (general(), true),
        Mode::Both => {
            let g = general();
            let agree = closed().is_cp() == g.is_cp();
            (g, agree)
        }
    };
    let mut doc = ResultDocument::from_verdict(&verdict, false, metadata);
    if mode != Mode::General {
        doc.closed_form = Some(ClosedFormDocument::from(&closed_form_params(&p, tol)));
    }
    let status = if agree {
        Status::from_cp(doc.cp)
    } else {
        Status::Mismatch
    };
    Ok((doc, status))
}

fn triple(values: Option<Vec<f64>>, name: &str) -> Result<[f64; 3], CliError> {
    let v = values.unwrap_or_default();
    <[f64; 3]>::try_from(v.as_slice()).map_err(|_| {
        CliError::Malformed(format!(
            "--{name} takes exactly three values, got {}",
            v.len()
        ))
    })
}

fn qubit_command(args: QubitArgs, tol: f64) -> Result<Outcome, CliError> {
    let mode = args.mode;
    if let Some(batch) = &args.batch {
        let text = read_batch(batch)?;
        return run_batch(&text, args.threads, |line| {
            let input: QubitInput = parse(line.as_bytes(), "qubit line")?;
            test_qubit(&input, mode, tol, line.as_bytes()).map(|(d, s)| (compact(&d), s))
        });
    }
    let input = QubitInput {
        t: triple(args.t, "t")?,
        lambda: triple(args.lambda, "lambda")?,
    };
    let raw = compact(&input);
    let (doc, status) = test_qubit(&input, mode, tol, raw.as_bytes())?;
    let mut outcome = Outcome::ok(pretty(&doc), status);
    if status == Status::Mismatch {
        outcome
            .stderr
            .push("cp-lattice: closed-form and general verdicts disagree".into());
    }
    Ok(outcome)
}

/// DOT text of the lattice of size `n`, annotated when params are given. The size may
/// be omitted when it follows from the params.
pub fn lattice_dot(n: Option<usize>, params: Option<&[u8]>) -> Result<Outcome, CliError> {
    let params = params
        .map(|bytes| {
            parse::<ParamsInput>(bytes, "params document")?
                .into_params()
                .to_params()
        })
        .transpose()?;
    let size = match (n, &params) {
        (Some(n), Some(p)) if p.size() != n => {
            return Err(CliError::Malformed(format!(
                "--n {n} does not match the params size {}",
                p.size()
            )))
        }
        (Some(n), _) => n,
        (None, Some(p)) => p.size(),
        (None, None) => {
            return Err(CliError::Malformed(
                "either --n or --params is required".into(),
            ))
        }
    };
    let graph = build_lattice_graph(size).map_err(|e| CliError::Malformed(e.to_string()))?;
    let dot = emit_dot(&graph, params.as_ref()).map_err(|e| CliError::Malformed(e.to_string()))?;
    Ok(Outcome::ok(dot, Status::Cp))
}

pub fn random(n: usize, seed: u64) -> Result<Outcome, CliError> {
    if n == 0 {
        return Err(CliError::Malformed("--n must be at least 1".into()));
    }
    Ok(Outcome::ok(
        pretty(&ChannelDocument::from_choi(&random_cp(n, seed))),
        Status::Cp,
    ))
}
