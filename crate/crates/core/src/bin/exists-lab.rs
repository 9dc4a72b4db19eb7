use std::io::Write;
use std::process::ExitCode;

use exists_lab::cli::{run_args, SEED_VAR};

fn main() -> ExitCode {
    let seed = std::env::var(SEED_VAR).ok();
    let outcome = run_args(std::env::args_os(), seed.as_deref());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
