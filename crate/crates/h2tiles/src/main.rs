use std::process::ExitCode;

fn main() -> ExitCode {
    h2tiles::cli::run_from_env()
}
