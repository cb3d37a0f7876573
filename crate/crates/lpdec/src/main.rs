use std::process::ExitCode;

fn main() -> ExitCode {
    lpdec::cli::main_with(std::env::args_os())
}
