use std::process::ExitCode;

fn main() -> ExitCode {
    spinxfer::cli::main_with(std::env::args_os())
}
