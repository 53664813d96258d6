use dicke_fcs_core::integrate::Tolerances;
use dicke_fcs_core::prep_dynamics::GaussianIC;
use dicke_fcs_core::statistics::{
    cgf_finite_time, cumulants, occupation_trace, prepare, relaxation_times, CgfForm, CumulantSet,
};

use super::params_at;
use crate::config::RunConfig;
use crate::output::{number, Table};
use crate::CliError;

pub fn run(cfg: &RunConfig) -> Result<String, CliError> {
    let prep = prepare(&params_at(cfg, cfg.lambda)?)?;
    let k = cfg.jet_order;
    let last = (cfg.samples - 1) as f64;
    let times: Vec<f64> = (0..cfg.samples).map(|i| cfg.t_max * i as f64 / last).collect();
    let ic = GaussianIC::centered(cfg.ic_width)?;
    let tol = Tolerances::default();
    let occ = occupation_trace(&prep, &ic, &times, &tol)?;
    let cgf = cgf_finite_time(&prep, &ic, &times, k, CgfForm::Full, &tol)?;

    let mut header = vec!["t".to_string(), "photon_occ".into(), "atom_occ".into()];
    header.extend((1..=k).map(|i| format!("fluct_{i}")));
    header.extend((1..=k).map(|i| format!("macro_{i}")));
    header.push("norm_residual".into());
    let mut table = Table::new("evolve", cfg.echo(), header);
    let tau = relaxation_times(&prep.frame, cfg.gamma)?;
    table.note(format!("phase = {}", prep.phase.as_str()));
    table.note(format!("tau1 = {}", number(tau.tau1)));
    table.note(format!("tau2 = {}", number(tau.tau2)));
    let rates = cumulants(&prep, k)?;
    for (i, r) in rates.fluctuation.iter().enumerate() {
        table.note(format!("rate_fluct_{} = {}", i + 1, number(*r)));
    }

    let macro_rate = prep.macroscopic_rate_intensive();
    for (o, c) in occ.iter().zip(&cgf) {
        let cs = CumulantSet::from_jet(&c.fluctuation, macro_rate * c.time, Some(c.time));
        let mut row = vec![number(c.time), number(o.photon_fluct), number(o.atom_fluct)];
        row.extend(cs.fluctuation.iter().map(|x| number(*x)));
        row.extend(std::iter::repeat_n(number(cs.macroscopic(cfg.j_atoms)), k));
        row.push(number(c.norm_residual));
        table.push(row);
    }
    table.render()
}
