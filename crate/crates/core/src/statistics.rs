//! Counting statistics, occupations and relaxation times.
//!
//! Every quantity is split the same way: a macroscopic Poisson part carried
//! by the mean-field photon number Γ|α| (extensive, so reported per atom and
//! scaled by N = 2j on request), and an intensive fluctuation part coming
//! from the two Bogoliubov modes.

use num_complex::Complex;

use crate::bogoliubov::{frame_coefficients, BogoliubovFrame};
use crate::error::{Error, Result};
use crate::integrate::Tolerances;
use crate::jet::CountingJet;
use crate::model::{classify_phase, effective_quadratic, EffectiveQuadratic, MeanField, ModelParams, Phase};
use crate::prep_dynamics::{a_rate_closed_form, evolve, exp_m1, ode_rhs, GaussianIC, OdeCoefficients, PState};
use crate::scalar::Real;

type Jet<T> = CountingJet<T>;

/// Everything derived once per parameter point.
#[derive(Debug, Clone)]
pub struct Prepared<T> {
    pub params: ModelParams<T>,
    pub phase: Phase,
    pub mean_field: MeanField<T>,
    pub quadratic: EffectiveQuadratic<T>,
    pub frame: BogoliubovFrame<T>,
}

impl<T: Real> Prepared<T> {
    /// Γ|α| per atom.
    pub fn macroscopic_rate_intensive(&self) -> T {
        self.params.gamma_loss * self.mean_field.alpha_abs_intensive()
    }

    pub fn coefficients(&self, s: &Jet<T>) -> OdeCoefficients<T> {
        OdeCoefficients::new(&self.frame, self.params.gamma_loss, self.mean_field.alpha_abs_intensive(), s)
    }
}

/// Validates the point and builds its frame. Fails inside the gap and for
/// a lossless cavity, where nothing is counted.
pub fn prepare<T: Real>(params: &ModelParams<T>) -> Result<Prepared<T>> {
    params.validate()?;
    if params.gamma_loss == T::zero() {
        return Err(Error::InvalidParams("counting statistics need gamma_loss > 0".into()));
    }
    let phase = classify_phase(params)?;
    if phase == Phase::Gap {
        return Err(Error::GapRegion);
    }
    let (mean_field, quadratic) = effective_quadratic(params)?;
    let frame = frame_coefficients(&quadratic)?;
    Ok(Prepared {
        params: *params,
        phase,
        mean_field,
        quadratic,
        frame,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationTimes<T> {
    pub tau1: T,
    pub tau2: T,
}

impl<T: Real> RelaxationTimes<T> {
    pub fn max(&self) -> T {
        self.tau1.max(self.tau2)
    }
}

/// τ1 = 1/(Γcos²γ), τ2 = 1/(Γsin²γ); an exactly decoupled mode gets +∞.
pub fn relaxation_times<T: Real>(frame: &BogoliubovFrame<T>, gamma_loss: T) -> Result<RelaxationTimes<T>> {
    if !(gamma_loss > T::zero()) {
        return Err(Error::InvalidParams(format!("gamma_loss = {gamma_loss} must be > 0")));
    }
    let inv = |w: T| {
        if w == T::zero() {
            T::infinity()
        } else {
            T::one() / (gamma_loss * w)
        }
    };
    let (s, c) = frame.gamma_angle.sin_cos();
    Ok(RelaxationTimes {
        tau1: inv(c * c),
        tau2: inv(s * s),
    })
}

/// Long-time CGF rate lim F/t, split into its two parts. `V` is a complex
/// number for a fixed χ or a jet in s = iχ.
#[derive(Debug, Clone, PartialEq)]
pub struct CgfRate<V> {
    pub fluctuation: V,
    /// Γ|α|(e^{iχ} − 1) per atom.
    pub macroscopic_intensive: V,
}

impl<T: Real> CgfRate<Complex<T>> {
    pub fn total(&self, j_atoms: T) -> Complex<T> {
        self.fluctuation + self.macroscopic_intensive * (j_atoms + j_atoms)
    }
}

fn rate_for<T: Real>(prep: &Prepared<T>, s: &Jet<T>) -> Result<CgfRate<Jet<T>>> {
    let k = prep.coefficients(s);
    Ok(CgfRate {
        fluctuation: -a_rate_closed_form(&k)?,
        macroscopic_intensive: -k.drive_rate,
    })
}

/// CGF rate at a fixed counting angle χ.
pub fn cgf_rate<T: Real>(prep: &Prepared<T>, chi: T) -> Result<CgfRate<Complex<T>>> {
    let s = Jet::constant(Complex::new(T::zero(), chi), 0);
    let r = rate_for(prep, &s)?;
    Ok(CgfRate {
        fluctuation: r.fluctuation.value(),
        macroscopic_intensive: r.macroscopic_intensive.value(),
    })
}

/// The two quasi-mode terms of the fluctuation CGF rate at angle χ,
/// ½Γ[(x − y) − √(x² + y² − 2xy(2e^{2iχ} − 1))] with (x, y) = (Ā², B̄²) and
/// (Ḡ², D̄²). They sum to the fluctuation part of [`cgf_rate`].
pub fn mode_cgf_rates<T: Real>(prep: &Prepared<T>, chi: T) -> [Complex<T>; 2] {
    let f = &prep.frame;
    let two = T::lit(2.0);
    let q = exp_m1(Complex::new(T::zero(), two * chi));
    let term = |a: T, b: T| {
        let (x, y) = (a * a, b * b);
        let m = (a.abs() - b.abs()) * (a.abs() + b.abs());
        let shift = q * (-T::lit(4.0) * x * y);
        let root = (shift + m * m).sqrt();
        let t = if m > T::zero() { shift / (root + m) } else { root - m };
        -t * (prep.params.gamma_loss / two)
    };
    [term(f.a, f.b), term(f.g, f.d)]
}

/// CGF rate as a jet in s about χ = 0.
pub fn cgf_rate_jet<T: Real>(prep: &Prepared<T>, order: usize) -> Result<CgfRate<Jet<T>>> {
    rate_for(prep, &Jet::variable(Complex::new(T::zero(), T::zero()), order))
}

/// Which finite-time CGF to build from the P-function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CgfForm {
    /// The full Gaussian integral: −a + Σᵢ[ln(2π/dᵢ) + bᵢcᵢ/dᵢ].
    #[default]
    Full,
    /// Only −a, dropping the dᵢ-dependent terms.
    Truncated,
}

/// Finite-time CGF at one time, as jets in s about χ = 0.
#[derive(Debug, Clone)]
pub struct FiniteTimeCgf<T> {
    pub time: T,
    /// F_fluct(χ, t) − F_fluct(0, t).
    pub fluctuation: Jet<T>,
    /// Instantaneous dF_fluct/dt.
    pub fluctuation_slope: Jet<T>,
    /// Γ|α|(e^{iχ} − 1)·t per atom.
    pub macroscopic_intensive: Jet<T>,
    /// F_fluct(0, t) before subtraction; zero up to integration error.
    pub norm_residual: T,
}

fn log_norm_slope<T: Real>(st: &PState<T>, dt: &PState<T>) -> Result<Jet<T>> {
    let mut out = -&dt.a;
    for (b, c, d, db, dc, dd) in [
        (&st.b1, &st.c1, &st.d1, &dt.b1, &dt.c1, &dt.d1),
        (&st.b2, &st.c2, &st.d2, &dt.b2, &dt.c2, &dt.d2),
    ] {
        let inv_d = d.recip()?;
        let bc = b * c;
        let dbc = &(db * c) + &(b * dc);
        out -= &(dd * &inv_d);
        out += &(&dbc * &inv_d);
        out -= &(&(&bc * dd) * &(&inv_d * &inv_d));
    }
    Ok(out)
}

/// Finite-time CGF along a trajectory started from `ic`.
pub fn cgf_finite_time<T: Real>(
    prep: &Prepared<T>,
    ic: &GaussianIC<T>,
    times: &[T],
    order: usize,
    form: CgfForm,
    tol: &Tolerances<T>,
) -> Result<Vec<FiniteTimeCgf<T>>> {
    let s = Jet::variable(Complex::new(T::zero(), T::zero()), order);
    let k = prep.coefficients(&s);
    let a0 = ic.to_state(order).a.value();
    let traj = evolve(ic, &k, times, tol)?;
    traj.iter()
        .map(|st| {
            let dt = ode_rhs(st, &k);
            let (mut f, slope) = match form {
                CgfForm::Full => (st.log_norm()?, log_norm_slope(st, &dt)?),
                CgfForm::Truncated => ((-&st.a).add_scalar(a0), -&dt.a),
            };
            let residual = f.value().norm();
            f.coeffs_mut()[0] = Complex::new(T::zero(), T::zero());
            Ok(FiniteTimeCgf {
                time: st.time,
                fluctuation: f,
                fluctuation_slope: slope,
                macroscopic_intensive: (-&k.drive_rate).scale_real(st.time),
                norm_residual: residual,
            })
        })
        .collect()
}

/// Cumulants k = 1..K, either long-time rates (`time == None`) or the
/// accumulated cumulants ⟨nᵏ⟩_C(t) at a finite time.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantSet<T> {
    pub time: Option<T>,
    /// δ⟨nᵏ⟩_C, index k − 1.
    pub fluctuation: Vec<T>,
    /// Γ|α| per atom (times t for a finite time); the same for every k.
    pub macroscopic_intensive: T,
    /// Largest imaginary part discarded when reading off the cumulants.
    pub max_imag: T,
}

impl<T: Real> CumulantSet<T> {
    pub fn from_jet(fluctuation: &Jet<T>, macroscopic_intensive: T, time: Option<T>) -> Self {
        let derivs = fluctuation.derivatives();
        let max_imag = derivs.iter().map(|z| z.im.abs()).fold(T::zero(), T::max);
        Self {
            time,
            fluctuation: derivs.iter().map(|z| z.re).collect(),
            macroscopic_intensive,
            max_imag,
        }
    }

    pub fn order(&self) -> usize {
        self.fluctuation.len()
    }

    pub fn fluctuation(&self, k: usize) -> T {
        self.fluctuation[k - 1]
    }

    /// Macroscopic part for N = 2j atoms.
    pub fn macroscopic(&self, j_atoms: T) -> T {
        self.macroscopic_intensive * (j_atoms + j_atoms)
    }

    pub fn total(&self, k: usize, j_atoms: T) -> T {
        self.fluctuation(k) + self.macroscopic(j_atoms)
    }
}

/// Long-time cumulant rates ⟨nᵏ⟩_C/t for k = 1..order.
pub fn cumulants<T: Real>(prep: &Prepared<T>, order: usize) -> Result<CumulantSet<T>> {
    let rate = cgf_rate_jet(prep, order)?;
    Ok(CumulantSet::from_jet(&rate.fluctuation, prep.macroscopic_rate_intensive(), None))
}

/// Accumulated cumulants at time t after starting from `ic`.
pub fn cumulants_at<T: Real>(prep: &Prepared<T>, ic: &GaussianIC<T>, t: T, order: usize) -> Result<CumulantSet<T>> {
    let f = cgf_finite_time(prep, ic, &[t], order, CgfForm::Full, &Tolerances::default())?;
    Ok(CumulantSet::from_jet(
        &f[0].fluctuation,
        prep.macroscopic_rate_intensive() * t,
        Some(t),
    ))
}

/// F_k = δ⟨nᵏ⟩_C / δ⟨n⟩_C for k = 1..K (index k − 1).
pub fn fano_factors<T: Real>(cs: &CumulantSet<T>) -> Result<Vec<T>> {
    let first = *cs.fluctuation.first().ok_or(Error::DegenerateDenominator)?;
    if first == T::zero() || !first.is_finite() {
        return Err(Error::DegenerateDenominator);
    }
    Ok(cs.fluctuation.iter().map(|&x| x / first).collect())
}

/// Mode occupations: fluctuation parts ⟨a1†a1⟩, ⟨a2†a2⟩ (normal phase) or
/// ⟨c†c⟩, ⟨d†d⟩ (superradiant), plus the extensive mean-field parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupations<T> {
    pub photon_fluct: T,
    pub atom_fluct: T,
    pub photon_macro: T,
    pub atom_macro: T,
}

impl<T: Real> Occupations<T> {
    pub fn photon_total(&self) -> T {
        self.photon_fluct + self.photon_macro
    }

    pub fn atom_total(&self) -> T {
        self.atom_fluct + self.atom_macro
    }
}

fn macros<T: Real>(prep: &Prepared<T>) -> (T, T) {
    let j = prep.params.j_atoms;
    (prep.mean_field.alpha_abs(j), prep.mean_field.beta_abs(j))
}

/// Steady occupations from their closed forms.
pub fn occupations<T: Real>(prep: &Prepared<T>) -> Occupations<T> {
    let (photon_macro, atom_macro) = macros(prep);
    let (photon_fluct, atom_fluct) = match prep.phase {
        Phase::Normal => {
            let p = &prep.params;
            let (w, w0, l2) = (p.omega, p.omega0, p.lambda * p.lambda);
            let two = T::lit(2.0);
            let photon = l2 / (two * w * w0 - T::lit(8.0) * l2);
            let atom = (-T::lit(4.0) + w / w0 + two * w0 / w + w * w / (w * w0 - T::lit(4.0) * l2)) / T::lit(8.0);
            (photon, atom)
        }
        _ => {
            let f = &prep.frame;
            let (w, w0) = (prep.quadratic.omega_c, prep.quadratic.omega0_eff);
            let (c2, s2) = (f.cos_sq(), f.sin_sq());
            let (em2, ep2) = (f.eps_minus * f.eps_minus, f.eps_plus * f.eps_plus);
            let eighth = T::lit(0.125);
            let photon = (-T::lit(2.0) + w * w * c2 / em2 + c2 * em2 / (w * w) + w * w * s2 / ep2 + s2 * ep2 / (w * w))
                * eighth;
            let ww0 = w * w0;
            let atom = (-T::lit(4.0) + w / w0 + w0 / w + ww0 * s2 / em2 + s2 * em2 / ww0 + ww0 * c2 / ep2 + c2 * ep2 / ww0)
                * eighth;
            (photon, atom)
        }
    };
    Occupations {
        photon_fluct,
        atom_fluct,
        photon_macro,
        atom_macro,
    }
}

fn reconstruct<T: Real>(f: &BogoliubovFrame<T>, n1: T, n2: T) -> (T, T) {
    let photon = f.b * f.b + f.d * f.d + (f.a * f.a + f.b * f.b) * n1 + (f.g * f.g + f.d * f.d) * n2;
    let atom = f.b2 * f.b2 + f.d2 * f.d2 + (f.a2 * f.a2 + f.b2 * f.b2) * n1 + (f.g2 * f.g2 + f.d2 * f.d2) * n2;
    (photon, atom)
}

/// Steady occupations rebuilt from the thermal occupations of the two
/// diagonal modes through the Bogoliubov transformation.
pub fn occupations_reconstructed<T: Real>(prep: &Prepared<T>) -> Occupations<T> {
    let f = &prep.frame;
    let w = prep.quadratic.omega_c;
    // B̄²/cos²γ and D̄²/sin²γ written without the removable 0/0.
    let thermal = |e: T| (w - e).powi(2) / (T::lit(4.0) * w * e);
    let (photon_fluct, atom_fluct) = reconstruct(f, thermal(f.eps_minus), thermal(f.eps_plus));
    let (photon_macro, atom_macro) = macros(prep);
    Occupations {
        photon_fluct,
        atom_fluct,
        photon_macro,
        atom_macro,
    }
}

/// Time-dependent occupations along a trajectory started from `ic`.
pub fn occupation_trace<T: Real>(
    prep: &Prepared<T>,
    ic: &GaussianIC<T>,
    times: &[T],
    tol: &Tolerances<T>,
) -> Result<Vec<Occupations<T>>> {
    let k = OdeCoefficients::without_counting(&prep.frame, prep.params.gamma_loss, 0);
    let (photon_macro, atom_macro) = macros(prep);
    evolve(ic, &k, times, tol)?
        .iter()
        .map(|st| {
            let (m1, m2) = st.mode_moments()?;
            let (photon_fluct, atom_fluct) = reconstruct(&prep.frame, m1.value().re, m2.value().re);
            Ok(Occupations {
                photon_fluct,
                atom_fluct,
                photon_macro,
                atom_macro,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::critical_couplings;
    use crate::prep_dynamics::steady_state;

    fn prep(omega0: f64, omega: f64, gamma: f64, lambda: f64) -> Prepared<f64> {
        prepare(&ModelParams::new(omega0, omega, lambda, gamma, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn rate_vanishes_at_zero_field() {
        for p in [prep(2.0, 1.0, 1.0, 0.3), prep(0.5, 2.0, 1.0, 0.8)] {
            let r = cgf_rate(&p, 0.0).unwrap();
            assert_eq!(r.macroscopic_intensive, Complex::new(0.0, 0.0));
            assert!(r.fluctuation.norm() < 1e-16);
        }
    }

    #[test]
    fn mode_terms_sum_to_rate() {
        for p in [prep(2.0, 1.0, 1.0, 0.3), prep(0.5, 2.0, 1.0, 1.3)] {
            for chi in [0.0, 0.05, 0.4, -1.1] {
                let [m1, m2] = mode_cgf_rates(&p, chi);
                let r = cgf_rate(&p, chi).unwrap().fluctuation;
                assert!((m1 + m2 - r).norm() < 1e-13, "{chi}");
            }
        }
    }

    #[test]
    fn desk_point_first_cumulant() {
        let p = prep(2.0, 1.0, 1.0, 0.3);
        let cs = cumulants(&p, 6).unwrap();
        assert!((cs.fluctuation(1) - 0.09 / 3.28).abs() < 1e-12);
        assert_eq!(cs.macroscopic_intensive, 0.0);
        let occ = occupations(&p);
        assert!((occ.photon_fluct - 0.0274390243902439).abs() < 1e-12);
        assert!((cs.fluctuation(1) - occ.photon_fluct).abs() < 1e-12);
        assert!(cs.max_imag < 1e-12);
    }

    #[test]
    fn first_cumulant_is_photon_occupation_in_both_phases() {
        for &(w0, w, g, lam) in &[(2.0, 1.0, 1.0, 0.5), (0.5, 2.0, 1.0, 0.6), (0.5, 2.0, 1.0, 1.3), (1.0, 1.0, 0.4, 0.9)] {
            let p = prep(w0, w, g, lam);
            let cs = cumulants(&p, 3).unwrap();
            let occ = occupations(&p);
            assert!((cs.fluctuation(1) - g * occ.photon_fluct).abs() < 1e-10, "{lam}");
            assert!((cs.macroscopic_intensive - g * p.mean_field.alpha_abs_intensive()).abs() < 1e-15);
        }
    }

    #[test]
    fn closed_form_and_reconstructed_occupations_agree() {
        for &(w0, w, g, lam) in &[
            (2.0, 1.0, 1.0, 0.3),
            (2.0, 1.0, 1.0, 0.6),
            (0.5, 2.0, 1.0, 0.2),
            (0.5, 2.0, 1.0, 0.6),
            (0.5, 2.0, 1.0, 1.5),
            (2.0, 1.0, 1.0, 1.4),
        ] {
            let p = prep(w0, w, g, lam);
            let a = occupations(&p);
            let b = occupations_reconstructed(&p);
            assert!((a.photon_fluct - b.photon_fluct).abs() < 1e-9 * (1.0 + a.photon_fluct), "{w0} {lam}");
            assert!((a.atom_fluct - b.atom_fluct).abs() < 1e-9 * (1.0 + a.atom_fluct), "{w0} {lam}");
        }
    }

    #[test]
    fn decoupled_atom_at_resonance_is_empty() {
        let p = prep(1.0, 1.0, 1.0, 1e-9);
        assert!(occupations(&p).atom_fluct.abs() < 1e-12);
    }

    #[test]
    fn jet_cumulants_match_fixed_point_route() {
        for &(w0, w, g, lam) in &[(2.0, 1.0, 1.0, 0.3), (0.5, 2.0, 1.0, 0.9)] {
            let p = prep(w0, w, g, lam);
            let s = Jet::variable(Complex::new(0.0, 0.0), 6);
            let ss = steady_state(&p.coefficients(&s)).unwrap();
            let via_fixed_point = CumulantSet::from_jet(&-ss.a_rate, 0.0, None);
            let direct = cumulants(&p, 6).unwrap();
            for k in 1..=6 {
                let (x, y) = (via_fixed_point.fluctuation(k), direct.fluctuation(k));
                assert!((x - y).abs() < 1e-10 * (1.0 + y.abs()));
            }
        }
    }

    #[test]
    fn second_cumulant_matches_finite_differences() {
        let p = prep(0.5, 2.0, 1.0, 0.7);
        let h = 1e-3;
        let f = |x: f64| cgf_rate(&p, x).unwrap().fluctuation;
        // F(χ) = Σ κ_k (iχ)^k/k!, so κ2 = −F''(0).
        let d2 = (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h)) / (12.0 * h * h);
        let k2 = cumulants(&p, 4).unwrap().fluctuation(2);
        assert!((-d2.re - k2).abs() < 1e-6 * k2.abs());
    }

    #[test]
    fn fano_factors_behave() {
        let p = prep(0.5, 2.0, 1.0, 0.9);
        let f = fano_factors(&cumulants(&p, 5).unwrap()).unwrap();
        assert_eq!(f[0], 1.0);
        let zero = prep(2.0, 1.0, 1.0, 0.0);
        assert!(matches!(fano_factors(&cumulants(&zero, 5).unwrap()), Err(Error::DegenerateDenominator)));
    }

    #[test]
    fn relaxation_time_identities() {
        let p = prep(2.0, 1.0, 1.0, 0.3);
        let r = relaxation_times(&p.frame, 1.0).unwrap();
        assert!((1.0 / r.tau1 + 1.0 / r.tau2 - 1.0).abs() < 1e-15);
        let z = prep(2.0, 1.0, 1.0, 0.0);
        let r = relaxation_times(&z.frame, 2.0).unwrap();
        assert_eq!(r.tau1, 0.5);
        assert!(r.tau2.is_infinite());
    }

    #[test]
    fn gap_and_lossless_points_are_rejected() {
        let base = ModelParams::new(2.0, 1.0, 0.0, 1.0, 1.0).unwrap();
        let cc = critical_couplings(&base).unwrap();
        let mid = 0.5 * (cc.lambda1 + cc.lambda3);
        assert!(matches!(prepare(&base.with_lambda(mid)), Err(Error::GapRegion)));
        assert!(matches!(prepare(&base.with_gamma(0.0)), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn finite_time_cgf_starts_at_zero_and_tracks_rate() {
        let p = prep(2.0, 1.0, 1.0, 0.3);
        let ic = GaussianIC::centered(0.01).unwrap();
        let tau = relaxation_times(&p.frame, 1.0).unwrap();
        let times = [0.0, 0.1 * tau.tau1, 20.0 * tau.tau2, 30.0 * tau.tau2];
        let out = cgf_finite_time(&p, &ic, &times, 4, CgfForm::Full, &Tolerances::default()).unwrap();
        assert!(out[0].fluctuation.is_zero());
        for f in &out {
            assert!(f.norm_residual < 1e-8);
        }
        let asym = cgf_rate_jet(&p, 4).unwrap().fluctuation;
        let first = |j: &Jet<f64>| j.coef(1).re;
        assert!((first(&out[1].fluctuation_slope) - first(&asym)).abs() > 0.1 * first(&asym));
        assert!((first(&out[2].fluctuation_slope) - first(&asym)).abs() < 0.01 * first(&asym));
        for k in 1..=4 {
            // Higher orders carry tᵏ·e^{−t/τ2} transients, hence the longer wait.
            let (x, y) = (out[3].fluctuation_slope.coef(k), asym.coef(k));
            assert!((x - y).norm() < 1e-7 * y.norm(), "order {k}");
        }
    }

    #[test]
    fn occupation_trace_relaxes_to_steady_value() {
        let p = prep(2.0, 1.0, 1.0, 0.3);
        let ic = GaussianIC::centered(0.05).unwrap();
        let tau = relaxation_times(&p.frame, 1.0).unwrap();
        let tr = occupation_trace(&p, &ic, &[0.0, 40.0 * tau.max()], &Tolerances::default()).unwrap();
        let steady = occupations(&p);
        assert!((tr[1].photon_fluct - steady.photon_fluct).abs() < 1e-9);
        assert!((tr[1].atom_fluct - steady.atom_fluct).abs() < 1e-9);
        assert!((tr[0].photon_fluct - steady.photon_fluct).abs() > 1e-3);
    }
}
