use std::process::ExitCode;

fn main() -> ExitCode {
    botprof::cli::run()
}
