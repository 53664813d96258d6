use dicke_fcs_core::bogoliubov::{frame_coefficients, numeric_diagonalize, BogoliubovFrame};
use dicke_fcs_core::model::{critical_couplings, effective_quadratic, ModelParams, Phase};
use dicke_fcs_core::oracle::{
    build_dicke_liouvillian, build_rwa_liouvillian, cumulant_rates_fd, dominant_eigenvalue, steady_state as oracle_steady,
    FdOptions, RwaMode,
};
use dicke_fcs_core::prep_dynamics::{evolve_to, steady_state, GaussianIC, OdeCoefficients};
use dicke_fcs_core::statistics::{
    cgf_finite_time, cumulants, mode_cgf_rates, occupations, prepare, relaxation_times, CgfForm,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{params_at, Report};
use crate::config::{RunConfig, Suite};
use crate::output::{number, Table};
use crate::CliError;

struct Check {
    suite: &'static str,
    name: String,
    value: f64,
    tolerance: Option<f64>,
    detail: String,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            suite,
            name: name.into(),
            value,
            tolerance: Some(tolerance),
            detail: String::new(),
        }
    }

    fn info(suite: &'static str, name: impl Into<String>, value: f64) -> Self {
        Self {
            tolerance: None,
            ..Self::new(suite, name, value, 0.0)
        }
    }

    fn error(suite: &'static str, name: impl Into<String>, e: impl ToString) -> Self {
        Self {
            detail: e.to_string(),
            ..Self::new(suite, name, f64::NAN, 0.0)
        }
    }

    fn status(&self) -> &'static str {
        match self.tolerance {
            None => "INFO",
            Some(t) if self.value < t => "PASS",
            Some(_) => "FAIL",
        }
    }
}

const CHIS: [f64; 4] = [0.05, 0.1, 0.2, 0.4];

pub(crate) fn frame_mismatch(a: &BogoliubovFrame<f64>, b: &BogoliubovFrame<f64>) -> [f64; 3] {
    let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(1.0);
    let coeffs = [
        (a.a, b.a),
        (a.b, b.b),
        (a.g, b.g),
        (a.d, b.d),
        (a.a2, b.a2),
        (a.b2, b.b2),
        (a.g2, b.g2),
        (a.d2, b.d2),
    ];
    [
        rel(a.eps_minus, b.eps_minus).max(rel(a.eps_plus, b.eps_plus)),
        rel(a.gamma_angle, b.gamma_angle),
        coeffs.iter().map(|&(x, y)| rel(x, y)).fold(0.0, f64::max),
    ]
}

/// Random point on a stable side of the gap, both phases equally often.
pub(crate) fn random_stable_point(rng: &mut impl Rng) -> ModelParams<f64> {
    let w0 = rng.random_range(0.1..5.0);
    let w = rng.random_range(0.1..5.0);
    let g = rng.random_range(0.0..2.0);
    let cc = critical_couplings(&ModelParams::new(w0, w, 0.0, g, 1.0).expect("valid ranges")).expect("valid ranges");
    let lambda = if rng.random_bool(0.5) {
        cc.lambda1 * rng.random_range(0.05..0.95)
    } else {
        cc.lambda3 * rng.random_range(1.05..3.0)
    };
    ModelParams::new(w0, w, lambda, g, 1.0).expect("valid ranges")
}

fn diagonalizer(cfg: &RunConfig) -> Vec<Check> {
    const S: &str = "diagonalizer";
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = [0.0f64; 3];
    for _ in 0..200 {
        let p = random_stable_point(&mut rng);
        let res = effective_quadratic(&p).and_then(|(_, eq)| Ok((frame_coefficients(&eq)?, numeric_diagonalize(&eq)?)));
        match res {
            Ok((a, b)) => {
                for (w, m) in worst.iter_mut().zip(frame_mismatch(&a, &b)) {
                    *w = w.max(m);
                }
            }
            Err(e) => return vec![Check::error(S, format!("point {p:?}"), e)],
        }
    }
    ["energies", "angle", "coefficients"]
        .iter()
        .zip(worst)
        .map(|(n, w)| Check::new(S, format!("max_{n}_mismatch_200_points"), w, 1e-10))
        .collect()
}

pub(crate) fn steady_ics() -> Vec<GaussianIC<f64>> {
    let c = Complex64::new;
    vec![
        GaussianIC::centered(0.1).expect("positive width"),
        GaussianIC::centered(1.0).expect("positive width"),
        GaussianIC::centered(10.0).expect("positive width"),
        GaussianIC::new(1.0, c(0.5, 0.5), c(0.0, -0.3)).expect("positive width"),
        GaussianIC::new(0.3, c(-0.2, 0.0), c(0.1, 0.1)).expect("positive width"),
    ]
}

fn prep_steady(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    const S: &str = "prep-steady";
    let prep = prepare(&params_at(cfg, cfg.lambda)?)?;
    let t_end = 20.0 * relaxation_times(&prep.frame, cfg.gamma)?.max();
    let k = OdeCoefficients::without_counting(&prep.frame, cfg.gamma, 0);
    let target = steady_state(&k)?.state;
    let times: Vec<f64> = (0..=40).map(|i| t_end * i as f64 / 40.0).collect();
    let mut out = vec![Check::info(S, "t_end", t_end)];
    for (i, ic) in steady_ics().iter().enumerate() {
        let end = evolve_to(ic, &k, t_end)?;
        let width = [(&end.d1, &target.d1), (&end.d2, &target.d2)]
            .iter()
            .map(|(a, b)| (a.value() - b.value()).norm() / b.value().norm())
            .fold(0.0, f64::max);
        let shift = [&end.b1, &end.b2, &end.c1, &end.c2]
            .iter()
            .map(|x| x.value().norm())
            .fold(0.0, f64::max);
        let norm = cgf_finite_time(&prep, ic, &times, 1, CgfForm::Full, &Default::default())?
            .iter()
            .map(|f| f.norm_residual)
            .fold(0.0, f64::max);
        let tag = format!("ic{}(eps={})", i + 1, ic.epsilon_width);
        out.push(Check::new(S, format!("{tag}_width_rel_error"), width, 1e-8));
        out.push(Check::new(S, format!("{tag}_displacement"), shift, 1e-8));
        out.push(Check::new(S, format!("{tag}_max_abs_F0"), norm, 1e-8));
    }
    Ok(out)
}

fn rwa_oracle(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    const S: &str = "rwa-oracle";
    let prep = prepare(&params_at(cfg, cfg.lambda)?)?;
    let mut out = Vec::new();
    let mut fd_sum = [0.0; 3];
    for (idx, mode) in [RwaMode::One, RwaMode::Two].into_iter().enumerate() {
        for chi in CHIS {
            let name = format!("mode{}_chi{chi}", idx + 1);
            let theta = build_rwa_liouvillian(&prep.frame, mode, cfg.gamma, chi, cfg.rwa_cutoff)
                .and_then(|l| dominant_eigenvalue(&l));
            out.push(match theta {
                Ok(t) => Check::new(S, name, (t - mode_cgf_rates(&prep, chi)[idx]).norm(), 1e-6),
                Err(e) => Check::error(S, name, e),
            });
        }
        let l = build_rwa_liouvillian(&prep.frame, mode, cfg.gamma, 0.0, cfg.rwa_cutoff)?;
        let fd = cumulant_rates_fd(
            &l,
            FdOptions {
                max_order: 3,
                ..FdOptions::default()
            },
        )?;
        fd_sum.iter_mut().zip(fd).for_each(|(a, b)| *a += b);
    }
    let cs = cumulants(&prep, 3)?;
    for (i, v) in fd_sum.iter().enumerate() {
        let want = cs.fluctuation(i + 1);
        out.push(Check::new(S, format!("fd_cumulant_{}_rel_error", i + 1), (v - want).abs() / want.abs(), 1e-4));
    }
    Ok(out)
}

pub(crate) fn finite_j_rate(params: &ModelParams<f64>, j: f64, cutoff: usize) -> Result<f64, CliError> {
    let mut p = *params;
    p.j_atoms = j;
    let l = build_dicke_liouvillian(&p, cutoff, 0.0)?;
    let rho = oracle_steady(&l)?;
    Ok(l.emission_rate(&rho))
}

fn finite_j(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    const S: &str = "finite-j";
    let params = params_at(cfg, cfg.lambda)?;
    let prep = prepare(&params)?;
    if prep.phase != Phase::Normal {
        return Ok(vec![Check::error(S, "phase", "the finite-j oracle needs a normal-phase point")]);
    }
    let limit = cfg.gamma * occupations(&prep).photon_fluct;
    let r1 = finite_j_rate(&params, 1.0, cfg.photon_cutoff)?;
    let r4 = finite_j_rate(&params, 4.0, cfg.photon_cutoff)?;
    let (d1, d4) = ((r1 - limit).abs(), (r4 - limit).abs());
    Ok(vec![
        Check::info(S, "limit", limit),
        Check::info(S, "rate_j1", r1),
        Check::info(S, "rate_j4", r4),
        Check::new(S, "deviation_ratio_j4_over_j1", d4 / d1, 1.0),
        Check::new(S, "relative_deviation_j4", d4 / limit, 0.25),
    ])
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let suites: Vec<Suite> = match cfg.suite {
        Suite::All => vec![Suite::Diagonalizer, Suite::PrepSteady, Suite::RwaOracle, Suite::FiniteJ],
        s => vec![s],
    };
    let results: Vec<Vec<Check>> = suites
        .par_iter()
        .map(|s| {
            let (name, r) = match s {
                Suite::Diagonalizer => ("diagonalizer", Ok(diagonalizer(cfg))),
                Suite::PrepSteady => ("prep-steady", prep_steady(cfg)),
                Suite::RwaOracle => ("rwa-oracle", rwa_oracle(cfg)),
                Suite::FiniteJ => ("finite-j", finite_j(cfg)),
                Suite::All => unreachable!("expanded above"),
            };
            r.unwrap_or_else(|e| vec![Check::error(name, "setup", e)])
        })
        .collect();

    let header = ["suite", "check", "value", "tolerance", "status", "detail"].map(String::from).to_vec();
    let mut table = Table::new("verify", cfg.echo(), header);
    let mut failed = false;
    for c in results.iter().flatten() {
        failed |= c.status() == "FAIL";
        table.push(vec![
            c.suite.to_string(),
            c.name.clone(),
            number(c.value),
            c.tolerance.map(number).unwrap_or_default(),
            c.status().to_string(),
            c.detail.clone(),
        ]);
    }
    Ok(Report {
        text: table.render()?,
        failed,
    })
}
