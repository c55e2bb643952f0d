use std::process::ExitCode;

fn main() -> ExitCode {
    stego_harness::cli::main_with_args(std::env::args_os())
}
