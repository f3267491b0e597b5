use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cp_lattice_cli::{run, Cli};

fn main() -> ExitCode {
    let outcome = run(Cli::parse());
    for line in &outcome.stderr {
        eprintln!("{line}");
    }
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(outcome.stdout.as_bytes())
        .and_then(|_| stdout.flush())
        .is_err()
    {
        eprintln!("cp-lattice: cannot write to stdout");
    }
    ExitCode::from(outcome.status.code() as u8)
}
