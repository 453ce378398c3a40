use std::process::ExitCode;

fn main() -> ExitCode {
    let code = shiftlab_cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    ExitCode::from(code as u8)
}
