use std::process::ExitCode;

use clap::Parser;
use engelhaar_cli::{render, run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("engelhaar: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let report = run(&cli.command, &cli.flags)?;
    let text = render(&report, cli.flags.format)?;
    match &cli.flags.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    if report.findings > 0 {
        eprintln!("engelhaar: {} counterexample finding(s)", report.findings);
    }
    Ok(report.exit_code())
}
