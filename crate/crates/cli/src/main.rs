use std::io::Write;
use std::process::ExitCode;

use clap::Parser as _;
use dicke_fcs_cli::{run, Cli, CliError, RunConfig};

fn emit(text: &str, cfg: &RunConfig) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = RunConfig::resolve(&cli.opts).and_then(|cfg| {
        let report = run(cli.command, &cfg)?;
        emit(&report.text, &cfg)?;
        Ok(report.failed)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("dicke-fcs: verification failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("dicke-fcs: {e}");
            ExitCode::from(1)
        }
    }
}
