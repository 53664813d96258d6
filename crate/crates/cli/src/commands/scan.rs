use dicke_fcs_core::bogoliubov::eigenenergies;
use dicke_fcs_core::model::{classify_phase, critical_couplings, effective_quadratic, CriticalCouplings, Phase};
use dicke_fcs_core::statistics::{cumulants, fano_factors, occupations, prepare};
use rayon::prelude::*;

use super::params_at;
use crate::config::{LambdaUnits, Quantity, RunConfig, Spacing};
use crate::output::{cell, number, Table};
use crate::CliError;

/// λ values of a sweep in absolute units, ascending, with the extra
/// near-critical points folded in.
pub fn sweep_grid(cfg: &RunConfig, cc: &CriticalCouplings<f64>) -> Vec<f64> {
    let unit = match cfg.lambda_units {
        LambdaUnits::Absolute => 1.0,
        LambdaUnits::Lambda2 => cc.lambda2,
    };
    let r = cfg.lambda_range;
    let (lo, hi) = (r.start * unit, r.end * unit);
    let last = (r.points - 1) as f64;
    let mut grid: Vec<f64> = (0..r.points)
        .map(|i| {
            let u = i as f64 / last;
            match cfg.spacing {
                Spacing::Linear => lo + (hi - lo) * u,
                Spacing::Log => lo * (hi / lo).powf(u),
            }
        })
        .collect();
    for k in 2..cfg.edge_points + 2 {
        let d = 10f64.powi(-(k as i32));
        grid.extend([cc.lambda1 * (1.0 - d), cc.lambda3 * (1.0 + d)].into_iter().filter(|l| (lo..=hi).contains(l)));
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

fn value_columns(cfg: &RunConfig) -> Vec<String> {
    let k = cfg.jet_order;
    match cfg.quantity {
        Quantity::Energies => ["eps_minus", "eps_plus", "eps_minus_closed", "eps_plus_closed"]
            .map(String::from)
            .to_vec(),
        Quantity::Occupations => ["photon_fluct", "atom_fluct", "photon_macro", "atom_macro"]
            .map(String::from)
            .to_vec(),
        Quantity::Cumulants => (1..=k)
            .map(|i| format!("fluct_{i}"))
            .chain((1..=k).map(|i| format!("macro_{i}")))
            .collect(),
        Quantity::Fano => (1..=k).map(|i| format!("fano_{i}")).collect(),
    }
}

/// Values for one stable (non-gap) point.
fn stable_values(cfg: &RunConfig, lambda: f64) -> Result<Vec<Option<f64>>, CliError> {
    let p = params_at(cfg, lambda)?;
    let some = |v: Vec<f64>| v.into_iter().map(Some).collect();
    Ok(match cfg.quantity {
        Quantity::Energies => {
            let (em, ep) = eigenenergies(&effective_quadratic(&p)?.1)?;
            let mut v = vec![Some(em), Some(ep)];
            v.extend(closed_energies(cfg, lambda));
            v
        }
        Quantity::Occupations => {
            let o = occupations(&prepare(&p)?);
            some(vec![o.photon_fluct, o.atom_fluct, o.photon_macro, o.atom_macro])
        }
        Quantity::Cumulants => {
            let cs = cumulants(&prepare(&p)?, cfg.jet_order)?;
            let m = cs.macroscopic(cfg.j_atoms);
            some(cs.fluctuation.iter().copied().chain(std::iter::repeat_n(m, cfg.jet_order)).collect())
        }
        Quantity::Fano => some(fano_factors(&cumulants(&prepare(&p)?, cfg.jet_order)?)?),
    })
}

/// Energies of the lossless system at the same λ; empty at its critical point.
fn closed_energies(cfg: &RunConfig, lambda: f64) -> [Option<f64>; 2] {
    let closed = params_at(cfg, lambda).map(|p| p.with_gamma(0.0));
    let e = closed
        .ok()
        .filter(|p| classify_phase(p).is_ok_and(|ph| ph != Phase::Gap))
        .and_then(|p| effective_quadratic(&p).ok())
        .and_then(|(_, eq)| eigenenergies(&eq).ok());
    [e.map(|x| x.0), e.map(|x| x.1)]
}

fn row(cfg: &RunConfig, cc: &CriticalCouplings<f64>, lambda: f64, width: usize) -> Vec<String> {
    let phase = params_at(cfg, lambda).and_then(|p| Ok(classify_phase(&p)?));
    let mut r = vec![number(lambda), number(lambda / cc.lambda2)];
    let (values, error) = match phase {
        Ok(Phase::Gap) => {
            let mut v = vec![None; width];
            if cfg.quantity == Quantity::Energies {
                let [a, b] = closed_energies(cfg, lambda);
                v[2] = a;
                v[3] = b;
            }
            (v, String::new())
        }
        Ok(_) => match stable_values(cfg, lambda) {
            Ok(v) => (v, String::new()),
            Err(e) => (vec![None; width], e.to_string()),
        },
        Err(ref e) => (vec![None; width], e.to_string()),
    };
    let phase_name = phase.as_ref().map_or("", |p| p.as_str());
    r.push(phase_name.to_string());
    r.push(if matches!(phase, Ok(Phase::Gap)) { "1" } else { "0" }.to_string());
    r.extend(values.into_iter().map(cell));
    r.push(error);
    r
}

pub fn run(cfg: &RunConfig) -> Result<String, CliError> {
    let cc = critical_couplings(&params_at(cfg, 0.0)?)?;
    let values = value_columns(cfg);
    let width = values.len();
    let mut header = vec!["lambda".to_string(), "lambda_over_lambda2".into(), "phase".into(), "gap".into()];
    header.extend(values);
    header.push("error".into());
    let mut table = Table::new("scan", cfg.echo(), header);
    table.note(format!("lambda1 = {}", number(cc.lambda1)));
    table.note(format!("lambda2 = {}", number(cc.lambda2)));
    table.note(format!("lambda3 = {}", number(cc.lambda3)));
    let grid = sweep_grid(cfg, &cc);
    let rows: Vec<Vec<String>> = grid.par_iter().map(|&l| row(cfg, &cc, l, width)).collect();
    for r in rows {
        table.push(r);
    }
    table.render()
}
