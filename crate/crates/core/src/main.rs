use std::process::ExitCode;

fn main() -> ExitCode {
    dispmap::cli::main()
}
