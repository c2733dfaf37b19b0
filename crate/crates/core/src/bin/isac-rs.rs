use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(isac_rs::cli::main_with_args(std::env::args().collect()))
}
