use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(hamflow::main_with_args(std::env::args_os()))
}
