use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code = rank2sep_cli::run_cli(
        std::env::args_os(),
        &mut io::stdin().lock(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
