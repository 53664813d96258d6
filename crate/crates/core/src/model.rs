//! Physical parameters, critical couplings and the mean-field fixed point.
//!
//! All frequencies are in a common reference unit; the figures of the
//! original model study use the cavity loss rate Γ as that unit. The driving
//! frequency only fixes the rotating frame and never enters a formula here.
//!
//! Macroscopic displacements scale with the atom number N = 2j and are kept
//! in intensive (per-atom) form; [`ModelParams::j_atoms`] is only used where
//! an extensive value is reported.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cplx, Real};

/// Inputs of the driven dissipative Dicke model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    /// Atomic level splitting ω0.
    pub omega0: T,
    /// Cavity frequency ω.
    pub omega: T,
    /// Atom-field coupling λ.
    pub lambda: T,
    /// Cavity photon loss rate Γ.
    pub gamma_loss: T,
    /// Pseudo-spin length j = N/2.
    pub j_atoms: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(omega0: T, omega: T, lambda: T, gamma_loss: T, j_atoms: T) -> Result<Self> {
        let p = Self {
            omega0,
            omega,
            lambda,
            gamma_loss,
            j_atoms,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.omega0,
            self.omega,
            self.lambda,
            self.gamma_loss,
            self.j_atoms,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if self.omega0 <= T::zero() {
            return Err(Error::InvalidParams(format!("omega0 = {} must be > 0", self.omega0)));
        }
        if self.omega <= T::zero() {
            return Err(Error::InvalidParams(format!("omega = {} must be > 0", self.omega)));
        }
        if self.lambda < T::zero() {
            return Err(Error::InvalidParams(format!("lambda = {} must be >= 0", self.lambda)));
        }
        if self.gamma_loss < T::zero() {
            return Err(Error::InvalidParams(format!(
                "gamma_loss = {} must be >= 0",
                self.gamma_loss
            )));
        }
        if self.j_atoms <= T::zero() {
            return Err(Error::InvalidParams(format!("j_atoms = {} must be > 0", self.j_atoms)));
        }
        Ok(())
    }

    pub fn with_lambda(mut self, lambda: T) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_gamma(mut self, gamma_loss: T) -> Self {
        self.gamma_loss = gamma_loss;
        self
    }

    /// Number of atoms N = 2j.
    pub fn n_atoms(&self) -> T {
        self.j_atoms + self.j_atoms
    }
}

/// The three critical couplings λ1 ≤ λ2 ≤ λ3.
///
/// λ1 closes the normal-phase soft mode, λ2 is the onset of a nonzero mean
/// field, and λ3 closes the superradiant soft mode. All three coincide when
/// the loss rate vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalCouplings<T> {
    pub lambda1: T,
    pub lambda2: T,
    pub lambda3: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Normal,
    /// λ1 ≤ λ ≤ λ3: no stable quadratic description exists.
    Gap,
    Superradiant,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Normal => "normal",
            Phase::Gap => "gap",
            Phase::Superradiant => "superradiant",
        }
    }
}

/// Sign branch of the displacement pair (√α, √β).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SignBranch {
    #[default]
    Plus,
    Minus,
}

impl SignBranch {
    pub fn sign<T: Real>(self) -> T {
        match self {
            SignBranch::Plus => T::one(),
            SignBranch::Minus => -T::one(),
        }
    }
}

/// Mean-field displacements in per-atom form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanField<T> {
    /// √α / √(2j).
    pub sqrt_alpha_intensive: Complex<T>,
    /// β / (2j), in [0, 1/2).
    pub beta_intensive: T,
    pub sign_branch: SignBranch,
}

impl<T: Real> MeanField<T> {
    pub fn trivial() -> Self {
        Self {
            sqrt_alpha_intensive: Complex::new(T::zero(), T::zero()),
            beta_intensive: T::zero(),
            sign_branch: SignBranch::Plus,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.beta_intensive == T::zero() && self.sqrt_alpha_intensive.norm_sqr() == T::zero()
    }

    /// √β / √(2j), carrying the sign branch shared with √α.
    pub fn sqrt_beta_intensive(&self) -> T {
        self.sign_branch.sign::<T>() * self.beta_intensive.sqrt()
    }

    /// |α| / (2j): macroscopic photon number per atom.
    pub fn alpha_abs_intensive(&self) -> T {
        self.sqrt_alpha_intensive.norm_sqr()
    }

    /// Macroscopic photon number |α| for `j` atoms' worth of pseudo-spin.
    pub fn alpha_abs(&self, j_atoms: T) -> T {
        self.alpha_abs_intensive() * (j_atoms + j_atoms)
    }

    /// Macroscopic atomic excitation |β|.
    pub fn beta_abs(&self, j_atoms: T) -> T {
        self.beta_intensive * (j_atoms + j_atoms)
    }
}

/// Parameters of the quadratic fluctuation Hamiltonian
/// ω c†c + Ω0 d†d + Λ(c + c†)(d + d†) + M(d + d†)².
///
/// In the normal phase this is the bare two-oscillator form with
/// Ω0 = ω0, Λ = λ and M = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveQuadratic<T> {
    pub omega_c: T,
    pub omega0_eff: T,
    pub lambda_eff: T,
    pub m_squeeze: T,
    /// k / (2j) with k = 2j − β.
    pub k_intensive: T,
}

pub fn critical_couplings<T: Real>(params: &ModelParams<T>) -> Result<CriticalCouplings<T>> {
    params.validate()?;
    let ModelParams {
        omega0,
        omega,
        gamma_loss,
        ..
    } = *params;
    let lambda1_sq = omega * omega0 / T::lit(4.0);
    // λ2² = λ1²(1 + x) and λ3² = λ1²(1 + x)^{3/2} with x = Γ²/(4ω²); written
    // through ln1p/expm1 so the ordering survives small Γ.
    let x = gamma_loss * gamma_loss / (T::lit(4.0) * omega * omega);
    let lambda2_sq = lambda1_sq + lambda1_sq * x;
    let lambda3_sq = lambda1_sq + lambda1_sq * (T::lit(1.5) * x.ln_1p()).exp_m1();
    Ok(CriticalCouplings {
        lambda1: lambda1_sq.sqrt(),
        lambda2: lambda2_sq.sqrt(),
        lambda3: lambda3_sq.sqrt(),
    })
}

pub fn classify_phase<T: Real>(params: &ModelParams<T>) -> Result<Phase> {
    let cc = critical_couplings(params)?;
    Ok(if params.lambda < cc.lambda1 {
        Phase::Normal
    } else if params.lambda > cc.lambda3 {
        Phase::Superradiant
    } else {
        Phase::Gap
    })
}

pub fn solve_displacements<T: Real>(params: &ModelParams<T>) -> Result<MeanField<T>> {
    solve_displacements_on_branch(params, SignBranch::Plus)
}

pub fn solve_displacements_on_branch<T: Real>(
    params: &ModelParams<T>,
    branch: SignBranch,
) -> Result<MeanField<T>> {
    let cc = critical_couplings(params)?;
    let lambda = params.lambda;
    if lambda <= cc.lambda2 {
        return Ok(MeanField::trivial());
    }
    let ratio_sq = (cc.lambda2 / lambda).powi(2);
    let two = T::lit(2.0);
    let beta_intensive = (T::one() - ratio_sq) / two;
    let amplitude = two * lambda * (T::one() - ratio_sq * ratio_sq).sqrt() * branch.sign::<T>();
    let denom = cplx(two * params.omega, -params.gamma_loss);
    Ok(MeanField {
        sqrt_alpha_intensive: Complex::new(amplitude, T::zero()) / denom,
        beta_intensive,
        sign_branch: branch,
    })
}

/// Residuals of the three stationarity conditions for (√α, √α*, β), in the
/// per-√(2j) normalization. All three vanish at a fixed point.
pub fn mean_field_residuals<T: Real>(params: &ModelParams<T>, mf: &MeanField<T>) -> [T; 3] {
    let two = T::lit(2.0);
    let half_gamma = params.gamma_loss / two;
    let kappa = T::one() - mf.beta_intensive;
    let sqrt_beta = mf.sqrt_beta_intensive();
    let drive = two * params.lambda * kappa.sqrt() * sqrt_beta;
    let sa = mf.sqrt_alpha_intensive;
    let r1 = sa * cplx(params.omega, -half_gamma) - drive;
    let r2 = sa.conj() * cplx(params.omega, half_gamma) - drive;
    let beta_over_k = if kappa > T::zero() {
        mf.beta_intensive / kappa
    } else {
        T::zero()
    };
    let r3 = params.lambda * kappa.sqrt() * (sa.re + sa.re) * (T::one() - beta_over_k)
        - params.omega0 * sqrt_beta;
    [r1.norm(), r2.norm(), r3.abs()]
}

pub fn effective_parameters<T: Real>(
    params: &ModelParams<T>,
    mf: &MeanField<T>,
) -> Result<EffectiveQuadratic<T>> {
    let cc = critical_couplings(params)?;
    let ModelParams {
        omega0,
        omega,
        lambda,
        gamma_loss,
        ..
    } = *params;

    if mf.is_trivial() {
        return Ok(EffectiveQuadratic {
            omega_c: omega,
            omega0_eff: omega0,
            lambda_eff: lambda,
            m_squeeze: T::zero(),
            k_intensive: T::one(),
        });
    }
    if lambda <= cc.lambda2 {
        return Err(Error::InconsistentMeanField(format!(
            "nonzero displacement at lambda = {lambda} <= lambda2 = {}",
            cc.lambda2
        )));
    }
    let worst = mean_field_residuals(params, mf)
        .into_iter()
        .fold(T::zero(), T::max);
    let scale = lambda + omega + omega0 + gamma_loss;
    if !(worst <= T::lit(1e-6) * scale) {
        return Err(Error::InconsistentMeanField(format!(
            "displacement is not a fixed point (residual {worst:e})"
        )));
    }

    let lit = T::lit;
    let lam2 = lambda * lambda;
    let s = gamma_loss * gamma_loss + lit(4.0) * omega * omega;
    let lambda_eff = s * omega0
        / (lit(2.0) * lit(2.0).sqrt() * (omega * (lit(16.0) * lam2 * omega + s * omega0)).sqrt());
    let omega0_eff = lit(8.0) * lam2 * omega / s + omega0 / lit(2.0);
    let m_squeeze = -omega0 / lit(8.0)
        + (lit(96.0) * lam2 * lam2 * omega * omega - lit(2.0) * lam2 * omega * s * omega0)
            / (s * (gamma_loss * gamma_loss * omega0
                + lit(4.0) * omega * (lit(4.0) * lam2 + omega * omega0)));
    Ok(EffectiveQuadratic {
        omega_c: omega,
        omega0_eff,
        lambda_eff,
        m_squeeze,
        k_intensive: T::one() - mf.beta_intensive,
    })
}

/// Mean field plus quadratic parameters for the branch the coupling selects.
pub fn effective_quadratic<T: Real>(
    params: &ModelParams<T>,
) -> Result<(MeanField<T>, EffectiveQuadratic<T>)> {
    let mf = solve_displacements(params)?;
    let eq = effective_parameters(params, &mf)?;
    Ok((mf, eq))
}
