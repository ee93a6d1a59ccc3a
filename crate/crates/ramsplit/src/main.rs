use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    // stderr stays unlocked: search progress is written from worker threads
    let code = ramsplit::cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr());
    ExitCode::from(code as u8)
}
