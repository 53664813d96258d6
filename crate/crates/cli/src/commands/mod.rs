mod evolve;
mod scan;
mod verify;

use dicke_fcs_core::model::{critical_couplings, ModelParams};

use crate::config::RunConfig;
use crate::output::number;
use crate::{CliError, Command};

pub use scan::sweep_grid;

/// Rendered command output. `failed` is set only by `verify`.
#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub failed: bool,
}

impl Report {
    fn ok(text: String) -> Self {
        Self { text, failed: false }
    }
}

pub fn run(command: Command, cfg: &RunConfig) -> Result<Report, CliError> {
    match command {
        Command::Criticals => criticals(cfg).map(Report::ok),
        Command::Scan => scan::run(cfg).map(Report::ok),
        Command::Evolve => evolve::run(cfg).map(Report::ok),
        Command::Verify => verify::run(cfg),
    }
}

pub(crate) fn params_at(cfg: &RunConfig, lambda: f64) -> Result<ModelParams<f64>, CliError> {
    Ok(ModelParams::new(cfg.omega0, cfg.omega, lambda, cfg.gamma, cfg.j_atoms)?)
}

fn criticals(cfg: &RunConfig) -> Result<String, CliError> {
    let cc = critical_couplings(&params_at(cfg, 0.0)?)?;
    let mut out: String = cfg.echo().iter().map(|l| format!("# {l}\n")).collect();
    if cfg.gamma == 0.0 {
        out += &format!("lambda_c = {}\n", number(cc.lambda1));
        out += "closed system: lambda1 = lambda2 = lambda3, no gap\n";
    } else {
        out += &format!("lambda1 = {}\n", number(cc.lambda1));
        out += &format!("lambda2 = {}\n", number(cc.lambda2));
        out += &format!("lambda3 = {}\n", number(cc.lambda3));
        out += "normal: lambda < lambda1\n";
        out += "gap: lambda1 <= lambda <= lambda3\n";
        out += "superradiant: lambda > lambda3\n";
    }
    Ok(out)
}
