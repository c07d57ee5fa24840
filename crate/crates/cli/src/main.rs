use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let mut err = io::stderr();
    let code = absq_cli::run_from_args(std::env::args_os(), &mut input, &mut out, &mut err);
    if out.flush().is_err() && code == absq_cli::EXIT_OK {
        return ExitCode::from(absq_cli::EXIT_IO as u8);
    }
    ExitCode::from(code as u8)
}
