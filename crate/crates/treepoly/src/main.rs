use std::process::ExitCode;

fn main() -> ExitCode {
    treepoly::cli::main()
}
