//! Gaussian P-function dynamics with a counting field.
//!
//! In the diagonal frame and under the rotating-wave approximation, the
//! counting-resolved P-function stays Gaussian,
//!
//! ```text
//! P0 = exp(−a + b1 γ1 + b2 γ2 + c1 γ1* + c2 γ2* − d1|γ1|² − d2|γ2|²),
//! ```
//!
//! and its seven coefficients obey closed ODEs. All coefficients are jets in
//! s = iχ so that every derivative with respect to the counting field is
//! carried along the trajectory.

use num_complex::Complex;

use crate::bogoliubov::BogoliubovFrame;
use crate::error::{Error, Result};
use crate::integrate::{integrate, Tolerances};
use crate::jet::CountingJet;
use crate::scalar::Real;

type Jet<T> = CountingJet<T>;

/// Rates of the P-function equations for one frame and one counting jet.
#[derive(Debug, Clone)]
pub struct OdeCoefficients<T> {
    pub gamma_loss: T,
    /// The counting variable s itself (constant iχ, or the identity jet).
    pub s: Jet<T>,
    pub u_bar: Jet<T>,
    pub v_bar: Jet<T>,
    pub w_bar: Jet<T>,
    pub t_bar: Jet<T>,
    /// Γ(1 − e^s), the factor multiplying every source term.
    pub counting: Jet<T>,
    /// Γ|α|(1 − e^s) per atom; multiply by 2j for the extensive rate.
    pub drive_rate: Jet<T>,
    pub source1: T,
    pub source2: T,
    pub b_sq: T,
    pub d_sq: T,
    pub a_sq: T,
    pub g_sq: T,
}

impl<T: Real> OdeCoefficients<T> {
    pub fn new(frame: &BogoliubovFrame<T>, gamma_loss: T, alpha_abs_intensive: T, s: &Jet<T>) -> Self {
        let order = s.order();
        let half_g = gamma_loss / T::lit(2.0);
        let es = s.exp();
        let one = Jet::real_constant(T::one(), order);
        // 1 − 2e^s
        let one_minus_2es = &one - &es.scale_real(T::lit(2.0));
        let (a2, b2, g2, d2) = (
            frame.a * frame.a,
            frame.b * frame.b,
            frame.g * frame.g,
            frame.d * frame.d,
        );
        let u_bar = one_minus_2es.scale_real(b2).add_scalar(Complex::new(a2, T::zero())) * half_g;
        let v_bar = one_minus_2es.scale_real(d2).add_scalar(Complex::new(g2, T::zero())) * half_g;
        let counting = (&one - &es) * gamma_loss;
        Self {
            gamma_loss,
            s: s.clone(),
            u_bar,
            v_bar,
            w_bar: es.scale_real(gamma_loss * b2),
            t_bar: es.scale_real(gamma_loss * d2),
            drive_rate: counting.scale_real(alpha_abs_intensive),
            counting,
            source1: a2 + b2,
            source2: g2 + d2,
            b_sq: b2,
            d_sq: d2,
            a_sq: a2,
            g_sq: g2,
        }
    }

    /// Coefficients with the counting field switched off.
    pub fn without_counting(frame: &BogoliubovFrame<T>, gamma_loss: T, order: usize) -> Self {
        Self::new(frame, gamma_loss, T::zero(), &Jet::zero(order))
    }

    pub fn order(&self) -> usize {
        self.s.order()
    }
}

/// Coefficients of the Gaussian P-function at one time.
#[derive(Debug, Clone)]
pub struct PState<T> {
    pub a: Jet<T>,
    pub b1: Jet<T>,
    pub b2: Jet<T>,
    pub c1: Jet<T>,
    pub c2: Jet<T>,
    pub d1: Jet<T>,
    pub d2: Jet<T>,
    pub time: T,
}

impl<T: Real> PState<T> {
    fn fields(&self) -> [&Jet<T>; 7] {
        [&self.a, &self.b1, &self.b2, &self.c1, &self.c2, &self.d1, &self.d2]
    }

    pub fn order(&self) -> usize {
        self.a.order()
    }

    pub fn flatten(&self) -> Vec<Complex<T>> {
        self.fields().iter().flat_map(|j| j.coeffs().iter().copied()).collect()
    }

    pub fn unflatten(y: &[Complex<T>], order: usize, time: T) -> Self {
        let n = order + 1;
        assert_eq!(y.len(), 7 * n, "state vector length does not match jet order");
        let j = |i: usize| Jet::from_coeffs(y[i * n..(i + 1) * n].to_vec());
        Self {
            a: j(0),
            b1: j(1),
            b2: j(2),
            c1: j(3),
            c2: j(4),
            d1: j(5),
            d2: j(6),
            time,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.fields()
            .iter()
            .all(|j| j.coeffs().iter().all(|c| c.re.is_finite() && c.im.is_finite()))
    }

    /// ln ∫P0 d²γ1 d²γ2 = −a + Σᵢ [ln(2π/dᵢ) + bᵢcᵢ/dᵢ], with the measure
    /// normalized so that ∫exp(−d|γ|²) d²γ = 2π/d.
    pub fn log_norm(&self) -> Result<Jet<T>> {
        let two_pi = Complex::new(T::lit(2.0) * T::PI(), T::zero());
        let mut out = -&self.a;
        for (b, c, d) in [(&self.b1, &self.c1, &self.d1), (&self.b2, &self.c2, &self.d2)] {
            let inv_d = d.recip()?;
            out += &inv_d.scale(two_pi).ln()?;
            out += &(&(b * c) * &inv_d);
        }
        Ok(out)
    }

    /// Normalized second moments ⟨|γᵢ|²⟩ = (bᵢcᵢ + dᵢ)/dᵢ², i.e. the
    /// occupations of the two diagonal modes.
    pub fn mode_moments(&self) -> Result<(Jet<T>, Jet<T>)> {
        let m = |b: &Jet<T>, c: &Jet<T>, d: &Jet<T>| -> Result<Jet<T>> {
            (&(b * c) + d).checked_div(&(d * d))
        };
        Ok((m(&self.b1, &self.c1, &self.d1)?, m(&self.b2, &self.c2, &self.d2)?))
    }
}

/// Displaced Gaussian initial P-function of width ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianIC<T> {
    pub epsilon_width: T,
    pub gamma1_0: Complex<T>,
    pub gamma2_0: Complex<T>,
}

impl<T: Real> GaussianIC<T> {
    pub fn new(epsilon_width: T, gamma1_0: Complex<T>, gamma2_0: Complex<T>) -> Result<Self> {
        let ic = Self {
            epsilon_width,
            gamma1_0,
            gamma2_0,
        };
        ic.validate()?;
        Ok(ic)
    }

    pub fn centered(epsilon_width: T) -> Result<Self> {
        let z = Complex::new(T::zero(), T::zero());
        Self::new(epsilon_width, z, z)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |z: Complex<T>| z.re.is_finite() && z.im.is_finite();
        if !(self.epsilon_width > T::zero() && self.epsilon_width.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "initial width must be positive, got {}",
                self.epsilon_width
            )));
        }
        if !finite(self.gamma1_0) || !finite(self.gamma2_0) {
            return Err(Error::InvalidParams("initial displacements must be finite".into()));
        }
        Ok(())
    }

    /// Initial coefficients (all independent of χ).
    pub fn to_state(&self, order: usize) -> PState<T> {
        let eps = self.epsilon_width;
        let inv = T::one() / eps;
        let c = |z: Complex<T>| Jet::constant(z, order);
        let r = |x: T| Jet::real_constant(x, order);
        let two_pi_eps = T::lit(2.0) * T::PI() * eps;
        let a0 = T::lit(2.0) * two_pi_eps.ln() + (self.gamma1_0.norm_sqr() + self.gamma2_0.norm_sqr()) * inv;
        PState {
            a: r(a0),
            b1: c(self.gamma1_0.conj() * inv),
            b2: c(self.gamma2_0.conj() * inv),
            c1: c(self.gamma1_0 * inv),
            c2: c(self.gamma2_0 * inv),
            d1: r(inv),
            d2: r(inv),
            time: T::zero(),
        }
    }
}

/// Time derivative of every coefficient.
pub fn ode_rhs<T: Real>(state: &PState<T>, k: &OdeCoefficients<T>) -> PState<T> {
    let PState {
        b1, b2, c1, c2, d1, d2, ..
    } = state;
    let two = T::lit(2.0);
    let src = |x: T| k.counting.scale_real(x);
    let mut a = src(k.b_sq + k.d_sq);
    a -= &(&k.w_bar * &(&(c1 * b1) - d1));
    a -= &(&k.t_bar * &(&(c2 * b2) - d2));
    a -= &(&k.u_bar + &k.v_bar).scale_real(two);
    let lin = |rate: &Jet<T>, bilin: &Jet<T>, x: &Jet<T>, d: &Jet<T>| &(rate * x) - &(&(bilin * x) * d);
    let dd = |rate: &Jet<T>, bilin: &Jet<T>, d: &Jet<T>, s: T| {
        &(&(rate * d).scale_real(two) - &(&(bilin * d) * d)) + &src(s)
    };
    PState {
        a,
        b1: lin(&k.u_bar, &k.w_bar, b1, d1),
        b2: lin(&k.v_bar, &k.t_bar, b2, d2),
        c1: lin(&k.u_bar, &k.w_bar, c1, d1),
        c2: lin(&k.v_bar, &k.t_bar, c2, d2),
        d1: dd(&k.u_bar, &k.w_bar, d1, k.source1),
        d2: dd(&k.v_bar, &k.t_bar, d2, k.source2),
        time: state.time,
    }
}

/// Long-time limit: fixed points of b, c, d and the asymptotic growth rate
/// of a. The `state` field holds the fixed point with a = 0.
#[derive(Debug, Clone)]
pub struct SteadyState<T> {
    pub state: PState<T>,
    pub a_rate: Jet<T>,
}

fn riccati_root<T: Real>(u: &Jet<T>, w: &Jet<T>, source: T, k: &OdeCoefficients<T>) -> Result<Jet<T>> {
    // W d² − 2U d − Γ(1 − e^s)·source = 0, root continuous from the
    // thermal width at s = 0.
    let radicand = &(u * u) + &(w * &k.counting.scale_real(source));
    let c0 = radicand.value();
    if c0.re <= T::zero() && c0.im.abs() <= T::epsilon() * (T::one() + c0.re.abs()) {
        return Err(Error::BranchAmbiguity {
            re: c0.re.to_f64_lossy(),
            im: c0.im.to_f64_lossy(),
        });
    }
    (u + &radicand.sqrt()?).checked_div(w)
}

pub fn steady_state<T: Real>(k: &OdeCoefficients<T>) -> Result<SteadyState<T>> {
    if !(k.b_sq > T::zero() && k.d_sq > T::zero()) {
        // A vacuum-like mode (B̄ or D̄ = 0) has no finite Gaussian width.
        return Err(Error::DegenerateDenominator);
    }
    let order = k.order();
    let zero = Jet::zero(order);
    let state = PState {
        a: zero.clone(),
        b1: zero.clone(),
        b2: zero.clone(),
        c1: zero.clone(),
        c2: zero,
        d1: riccati_root(&k.u_bar, &k.w_bar, k.source1, k)?,
        d2: riccati_root(&k.v_bar, &k.t_bar, k.source2, k)?,
        time: T::zero(),
    };
    let a_rate = ode_rhs(&state, k).a;
    Ok(SteadyState { state, a_rate })
}

/// The asymptotic growth rate of a in its symmetric closed form,
/// ½Γ[B̄² − Ā² + D̄² − Ḡ² + √(Ā⁴ + B̄⁴ − 2Ā²B̄²(2e^{2s} − 1)) + (mode 2)].
/// An independent route to [`SteadyState::a_rate`].
///
/// Evaluated per mode as √R − m with m = x − y and R = m² − 4xy(e^{2s} − 1),
/// rationalized when m > 0 so nothing cancels near s = 0.
pub fn a_rate_closed_form<T: Real>(k: &OdeCoefficients<T>) -> Result<Jet<T>> {
    let two = T::lit(2.0);
    let mut q = k.s.scale_real(two).exp();
    q.coeffs_mut()[0] = exp_m1(k.s.value() * two);
    let term = |a: T, b: T| -> Result<Jet<T>> {
        let (x, y) = (a * a, b * b);
        let m = (a.abs() - b.abs()) * (a.abs() + b.abs());
        let shift = q.scale_real(-T::lit(4.0) * x * y);
        let root = shift.add_scalar(Complex::new(m * m, T::zero())).sqrt()?;
        if m > T::zero() {
            shift.checked_div(&root.add_scalar(Complex::new(m, T::zero())))
        } else {
            Ok(root.add_scalar(Complex::new(-m, T::zero())))
        }
    };
    let sum = &term(k.a_sq.sqrt(), k.b_sq.sqrt())? + &term(k.g_sq.sqrt(), k.d_sq.sqrt())?;
    Ok(sum.scale_real(k.gamma_loss / two))
}

/// e^z − 1 without cancellation for small z.
pub(crate) fn exp_m1<T: Real>(z: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    let (sin_half, sin) = ((z.im * half).sin(), z.im.sin());
    Complex::new(
        z.re.exp_m1() * z.im.cos() - T::lit(2.0) * sin_half * sin_half,
        z.re.exp() * sin,
    )
}

/// Integrates the coefficient equations from `ic` and returns the state at
/// each sample time.
pub fn evolve<T: Real>(
    ic: &GaussianIC<T>,
    k: &OdeCoefficients<T>,
    sample_times: &[T],
    tol: &Tolerances<T>,
) -> Result<Vec<PState<T>>> {
    ic.validate()?;
    if let Some(&t) = sample_times.iter().find(|t| !(**t >= T::zero() && t.is_finite())) {
        return Err(Error::InvalidParams(format!("sample time {t} must be finite and nonnegative")));
    }
    let order = k.order();
    let y0 = ic.to_state(order).flatten();
    let rhs = |t: T, y: &[Complex<T>], dy: &mut [Complex<T>]| -> Result<()> {
        let st = PState::unflatten(y, order, t);
        dy.copy_from_slice(&ode_rhs(&st, k).flatten());
        Ok(())
    };
    let ys = integrate(rhs, T::zero(), &y0, sample_times, tol)?;
    Ok(ys
        .iter()
        .zip(sample_times)
        .map(|(y, &t)| PState::unflatten(y, order, t))
        .collect())
}

/// Terminal state after `t_final`.
pub fn evolve_to<T: Real>(ic: &GaussianIC<T>, k: &OdeCoefficients<T>, t_final: T) -> Result<PState<T>> {
    let mut v = evolve(ic, k, &[t_final], &Tolerances::default())?;
    Ok(v.pop().expect("one sample requested"))
}
