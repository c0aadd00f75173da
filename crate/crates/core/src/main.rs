use std::process::ExitCode;

fn main() -> ExitCode {
    upos::cli::run(std::env::args_os())
}
