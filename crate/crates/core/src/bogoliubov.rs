//! Bogoliubov diagonalization of the two-mode quadratic Hamiltonian.
//!
//! The quadratic form ω c†c + Ω0 d†d + Λ(c + c†)(d + d†) + M(d + d†)² is a
//! pair of position-coupled oscillators with stiffness matrix
//!
//! ```text
//! K = [ ω²            2Λ√(ωΩ0)   ]
//!     [ 2Λ√(ωΩ0)      Ω0(Ω0 + 4M) ]
//! ```
//!
//! whose eigenvalues are the squared normal-mode energies ε∓². The rotation
//! angle γ ∈ [0, π/2] is always chosen so that mode 1 (weight cos γ on the
//! photon) carries the soft energy ε−, which is what vanishes at λ1 and λ3.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::EffectiveQuadratic;
use crate::scalar::Real;

/// Default lower bound on ε− below which frame coefficients are refused.
pub const DEFAULT_EPS_TOL: f64 = 1e-9;

/// Normal-mode energies, mixing angle and the transformation
/// v = S (d1, d1†, d2, d2†)ᵀ with
///
/// ```text
/// S = [ a   b   g   d  ]
///     [ b   a   d   g  ]
///     [ a2  b2  g2  d2 ]
///     [ b2  a2  d2  g2 ]
/// ```
///
/// where v is (a1, a1†, a2, a2†) in the normal phase and the fluctuation
/// operators (c, c†, d, d†) in the superradiant phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovFrame<T> {
    pub eps_minus: T,
    pub eps_plus: T,
    pub gamma_angle: T,
    pub a: T,
    pub b: T,
    pub g: T,
    pub d: T,
    pub a2: T,
    pub b2: T,
    pub g2: T,
    pub d2: T,
}

impl<T: Real> BogoliubovFrame<T> {
    pub fn cos_sq(&self) -> T {
        self.gamma_angle.cos().powi(2)
    }

    pub fn sin_sq(&self) -> T {
        self.gamma_angle.sin().powi(2)
    }

    /// The 4×4 transformation matrix S, row-major.
    pub fn matrix(&self) -> [[T; 4]; 4] {
        [
            [self.a, self.b, self.g, self.d],
            [self.b, self.a, self.d, self.g],
            [self.a2, self.b2, self.g2, self.d2],
            [self.b2, self.a2, self.d2, self.g2],
        ]
    }

    /// Thermal occupation of diagonal mode 1 under the rotating-wave
    /// dissipator: b̄² / (ā² − b̄²).
    pub fn mode1_occupation(&self) -> T {
        self.b * self.b / (self.a * self.a - self.b * self.b)
    }

    /// Thermal occupation of diagonal mode 2: d̄² / (ḡ² − d̄²).
    pub fn mode2_occupation(&self) -> T {
        self.d * self.d / (self.g * self.g - self.d * self.d)
    }
}

struct Stiffness<T> {
    k11: T,
    k22: T,
    k12: T,
}

fn stiffness<T: Real>(eq: &EffectiveQuadratic<T>) -> Result<Stiffness<T>> {
    let EffectiveQuadratic {
        omega_c,
        omega0_eff,
        lambda_eff,
        m_squeeze,
        ..
    } = *eq;
    if !(omega_c > T::zero() && omega0_eff > T::zero()) {
        return Err(Error::UnstableRegion {
            eps_sq: omega0_eff.min(omega_c).to_f64_lossy(),
        });
    }
    let two = T::lit(2.0);
    Ok(Stiffness {
        k11: omega_c * omega_c,
        k22: omega0_eff * (omega0_eff + T::lit(4.0) * m_squeeze),
        k12: two * lambda_eff * (omega_c * omega0_eff).sqrt(),
    })
}

/// Squared energies (ε−², ε+²) without the stability check.
fn squared_energies<T: Real>(k: &Stiffness<T>) -> (T, T) {
    let two = T::lit(2.0);
    let trace = k.k11 + k.k22;
    let root_h = ((k.k22 - k.k11).powi(2) + T::lit(4.0) * k.k12 * k.k12).sqrt();
    let plus = (trace + root_h) / two;
    // ε−² from the determinant rather than (trace − √h)/2, which cancels
    // catastrophically next to the critical couplings.
    let det = k.k11 * k.k22 - k.k12 * k.k12;
    let minus = if plus > T::zero() { det / plus } else { (trace - root_h) / two };
    (minus, plus)
}

/// Normal-mode energies (ε−, ε+), soft mode first.
pub fn eigenenergies<T: Real>(eq: &EffectiveQuadratic<T>) -> Result<(T, T)> {
    let k = stiffness(eq)?;
    let (minus_sq, plus_sq) = squared_energies(&k);
    if !(minus_sq >= T::zero()) || !(plus_sq > T::zero()) {
        return Err(Error::UnstableRegion {
            eps_sq: minus_sq.min(plus_sq).to_f64_lossy(),
        });
    }
    Ok((minus_sq.sqrt(), plus_sq.sqrt()))
}

/// Rotation angle γ ∈ [0, π/2] with
/// tan 2γ = 4Λ√(ωΩ0) / (Ω0² + 4MΩ0 − ω²), resolved by `atan2`.
pub fn mixing_angle<T: Real>(eq: &EffectiveQuadratic<T>) -> Result<T> {
    eigenenergies(eq)?;
    let k = stiffness(eq)?;
    let two_gamma = (k.k12 + k.k12).atan2(k.k22 - k.k11);
    // Λ ≥ 0 keeps 2γ in [0, π]; fold anything else back into range.
    let two_gamma = if two_gamma < T::zero() {
        two_gamma + T::PI()
    } else {
        two_gamma
    };
    Ok(two_gamma / T::lit(2.0))
}

pub fn frame_coefficients<T: Real>(eq: &EffectiveQuadratic<T>) -> Result<BogoliubovFrame<T>> {
    frame_coefficients_with_tol(eq, T::lit(DEFAULT_EPS_TOL))
}

pub fn frame_coefficients_with_tol<T: Real>(
    eq: &EffectiveQuadratic<T>,
    eps_tol: T,
) -> Result<BogoliubovFrame<T>> {
    let (em, ep) = eigenenergies(eq)?;
    if em < eps_tol {
        return Err(Error::CriticalSingularity {
            eps_minus: em.to_f64_lossy(),
            tol: eps_tol.to_f64_lossy(),
        });
    }
    let gamma = mixing_angle(eq)?;
    let (s, c) = gamma.sin_cos();
    let two = T::lit(2.0);
    let w = eq.omega_c;
    let w0 = eq.omega0_eff;
    let photon = |e: T| two * (w * e).sqrt();
    let atom = |e: T| two * (w0 * e).sqrt();
    Ok(BogoliubovFrame {
        eps_minus: em,
        eps_plus: ep,
        gamma_angle: gamma,
        a: c * (w + em) / photon(em),
        b: c * (w - em) / photon(em),
        g: s * (w + ep) / photon(ep),
        d: s * (w - ep) / photon(ep),
        a2: -s * (w0 + em) / atom(em),
        b2: s * (em - w0) / atom(em),
        g2: c * (w0 + ep) / atom(ep),
        d2: c * (w0 - ep) / atom(ep),
    })
}

/// Independent numerical diagonalization: symmetric eigen-decomposition of
/// the stiffness matrix followed by the single-mode squeezes, composed as
/// explicit 4×4 matrices. Evaluated in `f64` regardless of `T`.
pub fn numeric_diagonalize<T: Real>(eq: &EffectiveQuadratic<T>) -> Result<BogoliubovFrame<T>> {
    let w = eq.omega_c.to_f64_lossy();
    let w0 = eq.omega0_eff.to_f64_lossy();
    let lam = eq.lambda_eff.to_f64_lossy();
    let m = eq.m_squeeze.to_f64_lossy();
    if !(w > 0.0 && w0 > 0.0) {
        return Err(Error::UnstableRegion { eps_sq: w.min(w0) });
    }
    let k12 = 2.0 * lam * (w * w0).sqrt();
    let k = Matrix2::new(w * w, k12, k12, w0 * (w0 + 4.0 * m));
    let eig = SymmetricEigen::new(k);
    let (lo, hi) = if eig.eigenvalues[0] <= eig.eigenvalues[1] {
        (0, 1)
    } else {
        (1, 0)
    };
    let mu_minus = eig.eigenvalues[lo];
    let mu_plus = eig.eigenvalues[hi];
    if mu_minus < 0.0 {
        return Err(Error::UnstableRegion { eps_sq: mu_minus });
    }
    let em = mu_minus.sqrt();
    let ep = mu_plus.sqrt();
    if em == 0.0 {
        return Err(Error::CriticalSingularity {
            eps_minus: 0.0,
            tol: 0.0,
        });
    }

    // Orient the eigenvectors as (cos γ, −sin γ) and (sin γ, cos γ).
    let mut e1 = eig.eigenvectors.column(lo).into_owned();
    let mut e2 = eig.eigenvectors.column(hi).into_owned();
    if e1[0] < 0.0 || (e1[0] == 0.0 && e1[1] > 0.0) {
        e1 = -e1;
    }
    if e2[1] < 0.0 || (e2[1] == 0.0 && e2[0] < 0.0) {
        e2 = -e2;
    }
    let gamma = e2[0].atan2(e2[1]);

    let i = Complex64::i();
    let re = |x: f64| Complex64::new(x, 0.0);
    // (c, c†, d, d†) from (x1, x2, p1, p2).
    let sw = (2.0 * w).sqrt();
    let sw0 = (2.0 * w0).sqrt();
    let to_ladder = Matrix4::new(
        re(w / sw), re(0.0), i / sw, re(0.0),
        re(w / sw), re(0.0), -i / sw, re(0.0),
        re(0.0), re(w0 / sw0), re(0.0), i / sw0,
        re(0.0), re(w0 / sw0), re(0.0), -i / sw0,
    );
    // (x1, x2, p1, p2) from normal coordinates (y1, y2, q1, q2).
    let rotate = Matrix4::new(
        re(e1[0]), re(e2[0]), re(0.0), re(0.0),
        re(e1[1]), re(e2[1]), re(0.0), re(0.0),
        re(0.0), re(0.0), re(e1[0]), re(e2[0]),
        re(0.0), re(0.0), re(e1[1]), re(e2[1]),
    );
    // (y1, y2, q1, q2) from (d1, d1†, d2, d2†).
    let y = |e: f64| re(1.0 / (2.0 * e).sqrt());
    let q = |e: f64| (e / 2.0).sqrt();
    let from_modes = Matrix4::new(
        y(em), y(em), re(0.0), re(0.0),
        re(0.0), re(0.0), y(ep), y(ep),
        -i * q(em), i * q(em), re(0.0), re(0.0),
        re(0.0), re(0.0), -i * q(ep), i * q(ep),
    );
    let s = to_ladder * rotate * from_modes;
    let imag = s.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let scale = s.iter().map(|z| z.re.abs()).fold(1.0, f64::max);
    if imag > 1e-9 * scale {
        return Err(Error::LinearAlgebra(format!(
            "numeric Bogoliubov matrix is not real (imaginary part {imag:e})"
        )));
    }
    let t = |x: f64| T::lit(x);
    Ok(BogoliubovFrame {
        eps_minus: t(em),
        eps_plus: t(ep),
        gamma_angle: t(gamma),
        a: t(s[(0, 0)].re),
        b: t(s[(0, 1)].re),
        g: t(s[(0, 2)].re),
        d: t(s[(0, 3)].re),
        a2: t(s[(2, 0)].re),
        b2: t(s[(2, 1)].re),
        g2: t(s[(2, 2)].re),
        d2: t(s[(2, 3)].re),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{critical_couplings, effective_quadratic, ModelParams};
    use approx::assert_relative_eq;

    fn eq_for(omega0: f64, omega: f64, gamma: f64, lambda: f64) -> EffectiveQuadratic<f64> {
        let p = ModelParams::new(omega0, omega, lambda, gamma, 1.0).unwrap();
        effective_quadratic(&p).unwrap().1
    }

    /// Symmetric coefficient matrix Q with H = vᵀQv + const for
    /// v = (c, c†, d, d†).
    fn quadratic_form(eq: &EffectiveQuadratic<f64>) -> [[f64; 4]; 4] {
        let mut q = [[0.0; 4]; 4];
        q[0][1] = eq.omega_c / 2.0;
        q[1][0] = eq.omega_c / 2.0;
        q[2][3] = eq.omega0_eff / 2.0 + eq.m_squeeze;
        q[3][2] = q[2][3];
        q[2][2] = eq.m_squeeze;
        q[3][3] = eq.m_squeeze;
        for i in 0..2 {
            for j in 2..4 {
                q[i][j] = eq.lambda_eff / 2.0;
                q[j][i] = eq.lambda_eff / 2.0;
            }
        }
        q
    }

    fn assert_diagonalizes(eq: &EffectiveQuadratic<f64>, f: &BogoliubovFrame<f64>, tol: f64) {
        let q = quadratic_form(eq);
        let s = f.matrix();
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = (0..4)
                    .flat_map(|k| (0..4).map(move |l| (k, l)))
                    .map(|(k, l)| s[k][i] * q[k][l] * s[l][j])
                    .sum();
            }
        }
        let mut expected = [[0.0; 4]; 4];
        expected[0][1] = f.eps_minus / 2.0;
        expected[1][0] = f.eps_minus / 2.0;
        expected[2][3] = f.eps_plus / 2.0;
        expected[3][2] = f.eps_plus / 2.0;
        for i in 0..4 {
            for j in 0..4 {
                assert!(
                    (out[i][j] - expected[i][j]).abs() < tol,
                    "entry ({i},{j}): {} vs {}",
                    out[i][j],
                    expected[i][j]
                );
            }
        }
    }

    fn assert_frames_close(x: &BogoliubovFrame<f64>, y: &BogoliubovFrame<f64>, tol: f64) {
        let pairs = [
            (x.eps_minus, y.eps_minus),
            (x.eps_plus, y.eps_plus),
            (x.gamma_angle, y.gamma_angle),
            (x.a, y.a),
            (x.b, y.b),
            (x.g, y.g),
            (x.d, y.d),
            (x.a2, y.a2),
            (x.b2, y.b2),
            (x.g2, y.g2),
            (x.d2, y.d2),
        ];
        for (i, (u, v)) in pairs.iter().enumerate() {
            assert!((u - v).abs() < tol * (1.0 + u.abs()), "field {i}: {u} vs {v}");
        }
    }

    #[test]
    fn decoupled_oscillators() {
        let eq = eq_for(2.0, 1.0, 1.0, 0.0);
        let (em, ep) = eigenenergies(&eq).unwrap();
        assert_eq!((em, ep), (1.0, 2.0));
        assert_eq!(mixing_angle(&eq).unwrap(), 0.0);
        let f = frame_coefficients(&eq).unwrap();
        assert_relative_eq!(f.a, 1.0, epsilon = 1e-15);
        assert_eq!(f.b, 0.0);
        assert_eq!(f.g, 0.0);
        assert_eq!(f.d, 0.0);
        assert_relative_eq!(f.g2, 1.0, epsilon = 1e-15);

        let eq = eq_for(0.5, 2.0, 1.0, 0.0);
        let (em, ep) = eigenenergies(&eq).unwrap();
        assert_relative_eq!(em, 0.5, epsilon = 1e-15);
        assert_relative_eq!(ep, 2.0, epsilon = 1e-15);
        let num = numeric_diagonalize(&eq).unwrap();
        assert_frames_close(&frame_coefficients(&eq).unwrap(), &num, 1e-12);
    }

    #[test]
    fn degenerate_frequencies_rotate_by_quarter_turn() {
        let eq = eq_for(1.0, 1.0, 1.0, 0.2);
        assert_relative_eq!(mixing_angle(&eq).unwrap(), std::f64::consts::FRAC_PI_4, epsilon = 1e-15);
        let f = frame_coefficients(&eq).unwrap();
        assert_frames_close(&f, &numeric_diagonalize(&eq).unwrap(), 1e-10);
    }

    #[test]
    fn normal_energies_match_closed_form() {
        let eq = eq_for(2.0, 1.0, 1.0, 0.3);
        let (em, ep) = eigenenergies(&eq).unwrap();
        let root = ((4.0f64 - 1.0).powi(2) + 16.0 * 0.09 * 2.0).sqrt();
        assert_relative_eq!(2.0 * em * em, 5.0 - root, max_relative = 1e-13);
        assert_relative_eq!(2.0 * ep * ep, 5.0 + root, max_relative = 1e-13);
        let num = numeric_diagonalize(&eq).unwrap();
        assert_relative_eq!(num.eps_minus, em, max_relative = 1e-12);
        assert_relative_eq!(num.eps_plus, ep, max_relative = 1e-12);
    }

    #[test]
    fn superradiant_energies_and_rotation_relation() {
        let eq = eq_for(0.5, 2.0, 1.0, 0.63);
        let (em, ep) = eigenenergies(&eq).unwrap();
        let (w, w0, l, m) = (eq.omega_c, eq.omega0_eff, eq.lambda_eff, eq.m_squeeze);
        let h = w.powi(4)
            + w0 * (-8.0 * w * (-2.0 * l * l + m * w) + w0 * (16.0 * m * m - 2.0 * w * w + 8.0 * m * w0 + w0 * w0));
        let base = w * w + 4.0 * m * w0 + w0 * w0;
        assert_relative_eq!(2.0 * em * em, base - h.sqrt(), max_relative = 1e-10);
        assert_relative_eq!(2.0 * ep * ep, base + h.sqrt(), max_relative = 1e-12);
        let num = numeric_diagonalize(&eq).unwrap();
        assert_relative_eq!(num.eps_minus, em, max_relative = 1e-10);
        assert_relative_eq!(num.eps_plus, ep, max_relative = 1e-10);

        // The printed rotation relation, read with the soft-mode labeling,
        // holds as rhs = 2h sin²γ.
        let sh = h.sqrt();
        let rhs = w * w * (sh + w * w) - (sh - 16.0 * m * m + 2.0 * w * w) * w0 * w0
            + 4.0 * (4.0 * l * l * w - m * (sh + 2.0 * w * w)) * w0
            + 8.0 * m * w0.powi(3)
            + w0.powi(4);
        let gamma = mixing_angle(&eq).unwrap();
        assert!((rhs - 2.0 * h * gamma.sin().powi(2)).abs() < 1e-10 * h);
    }

    #[test]
    fn paper_case_split_gives_same_spectrum() {
        // Both orderings of (ω0, ω), including the degenerate point, produce
        // the same set {ε−, ε+}; only the label attached to the ± root moves.
        for &(w0, w) in &[(2.0, 1.0), (0.5, 2.0), (1.0, 1.0)] {
            let eq = eq_for(w0, w, 1.0, 0.2 * (w * w0).sqrt());
            let root = ((w0 * w0 - w * w).powi(2) + 16.0 * eq.lambda_eff.powi(2) * w * w0).sqrt();
            let (upper, lower) = if w0 > w { (1.0, -1.0) } else { (-1.0, 1.0) };
            let e_plus = ((w * w + w0 * w0 + upper * root) / 2.0).sqrt();
            let e_minus = ((w * w + w0 * w0 + lower * root) / 2.0).sqrt();
            let (em, ep) = eigenenergies(&eq).unwrap();
            let mut printed = [e_minus, e_plus];
            printed.sort_by(f64::total_cmp);
            assert_relative_eq!(printed[0], em, max_relative = 1e-12);
            assert_relative_eq!(printed[1], ep, max_relative = 1e-12);
            assert_frames_close(&frame_coefficients(&eq).unwrap(), &numeric_diagonalize(&eq).unwrap(), 1e-10);
        }
    }

    #[test]
    fn coefficient_identities_and_quadratic_form() {
        for &(w0, w, g, lam) in &[
            (2.0, 1.0, 1.0, 0.3),
            (2.0, 1.0, 1.0, 0.9),
            (0.5, 2.0, 1.0, 0.63),
            (0.5, 2.0, 1.0, 0.2),
            (1.0, 1.0, 0.5, 0.45),
            (1.0, 1.0, 0.5, 1.2),
        ] {
            let eq = eq_for(w0, w, g, lam);
            let f = frame_coefficients(&eq).unwrap();
            assert!((f.a * f.a - f.b * f.b - f.cos_sq()).abs() < 1e-12);
            assert!((f.g * f.g - f.d * f.d - f.sin_sq()).abs() < 1e-12);
            assert!((f.a * f.a - f.b * f.b + f.g * f.g - f.d * f.d - 1.0).abs() < 1e-12);
            assert_diagonalizes(&eq, &f, 1e-10);
            assert_frames_close(&f, &numeric_diagonalize(&eq).unwrap(), 1e-10);
        }
    }

    #[test]
    fn gap_region_is_unstable() {
        for lam in [0.75, 0.8, 0.83] {
            let eq = eq_for(2.0, 1.0, 1.0, lam);
            assert!(matches!(eigenenergies(&eq), Err(Error::UnstableRegion { .. })));
            assert!(matches!(numeric_diagonalize(&eq), Err(Error::UnstableRegion { .. })));
        }
    }

    #[test]
    fn soft_mode_closes_at_both_edges() {
        let p = ModelParams::new(2.0, 1.0, 0.0, 1.0, 1.0).unwrap();
        let cc = critical_couplings(&p).unwrap();
        for (lam, side) in [(cc.lambda1 - 1e-9, "normal"), (cc.lambda3 + 1e-9, "superradiant")] {
            let eq = effective_quadratic(&p.with_lambda(lam)).unwrap().1;
            let (em, _) = eigenenergies(&eq).unwrap();
            assert!(em < 1e-4, "{side}: {em}");
            assert!(matches!(
                frame_coefficients_with_tol(&eq, 1e-3),
                Err(Error::CriticalSingularity { .. })
            ));
        }
    }

    #[test]
    fn normal_energies_ignore_loss_rate() {
        let a = eigenenergies(&eq_for(2.0, 1.0, 1.0, 0.3)).unwrap();
        let b = eigenenergies(&eq_for(2.0, 1.0, 1.7, 0.3)).unwrap();
        assert_eq!(a, b);
        let c = eigenenergies(&eq_for(2.0, 1.0, 1.0, 1.2)).unwrap();
        let d = eigenenergies(&eq_for(2.0, 1.0, 1.1, 1.2)).unwrap();
        assert!((c.0 - d.0).abs() > 1e-6);
    }

    #[test]
    fn soft_mode_decreases_towards_lambda1() {
        let p = ModelParams::new(2.0, 1.0, 0.0, 1.0, 1.0).unwrap();
        let l1 = critical_couplings(&p).unwrap().lambda1;
        let mut prev = f64::INFINITY;
        for i in 0..50 {
            let lam = 0.9 * l1 + 0.1 * l1 * i as f64 / 50.0;
            let (em, _) = eigenenergies(&effective_quadratic(&p.with_lambda(lam)).unwrap().1).unwrap();
            assert!(em < prev);
            prev = em;
        }
    }

    #[test]
    fn f32_frame_tracks_f64() {
        let p32 = ModelParams::<f32>::new(2.0, 1.0, 0.3, 1.0, 1.0).unwrap();
        let eq32 = effective_quadratic(&p32).unwrap().1;
        let f32_frame = frame_coefficients(&eq32).unwrap();
        let f64_frame = frame_coefficients(&eq_for(2.0, 1.0, 1.0, 0.3)).unwrap();
        assert!((f32_frame.a as f64 - f64_frame.a).abs() < 1e-5);
        assert!((f32_frame.eps_minus as f64 - f64_frame.eps_minus).abs() < 1e-5);
    }
}
