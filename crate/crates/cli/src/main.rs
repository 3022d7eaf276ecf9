use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = simpson_cli::run(std::env::args_os());
    let _ = std::io::stdout().write_all(result.stdout.as_bytes());
    let _ = std::io::stderr().write_all(result.stderr.as_bytes());
    ExitCode::from(result.code as u8)
}
