use std::process::ExitCode;

fn main() -> ExitCode {
    hsc_cli::main_with(std::env::args_os())
}
