//! Adaptive Dormand–Prince 5(4) integrator for complex state vectors.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct Tolerances<T> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            rtol: T::lit(1e-10),
            atol: T::lit(1e-12),
            max_steps: 2_000_000,
        }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Fifth-order weights minus the embedded fourth-order ones.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Right-hand side y' = f(t, y), written into the output slice.
pub trait Rhs<T> {
    fn eval(&mut self, t: T, y: &[Complex<T>], dy: &mut [Complex<T>]) -> Result<()>;
}

impl<T, F> Rhs<T> for F
where
    F: FnMut(T, &[Complex<T>], &mut [Complex<T>]) -> Result<()>,
{
    fn eval(&mut self, t: T, y: &[Complex<T>], dy: &mut [Complex<T>]) -> Result<()> {
        self(t, y, dy)
    }
}

fn error_norm<T: Real>(err: &[Complex<T>], y0: &[Complex<T>], y1: &[Complex<T>], tol: &Tolerances<T>) -> T {
    let mut acc = T::zero();
    for ((e, a), b) in err.iter().zip(y0).zip(y1) {
        let sc = tol.atol + tol.rtol * a.norm().max(b.norm());
        acc = acc + (e.norm() / sc).powi(2);
    }
    (acc / T::lit(err.len().max(1) as f64)).sqrt()
}

fn initial_step<T: Real, F: Rhs<T>>(
    f: &mut F,
    t0: T,
    y0: &[Complex<T>],
    f0: &[Complex<T>],
    span: T,
    tol: &Tolerances<T>,
) -> Result<T> {
    let scale = |y: &Complex<T>| tol.atol + tol.rtol * y.norm();
    let n = T::lit(y0.len().max(1) as f64);
    let d0 = (y0.iter().map(|y| (y.norm() / scale(y)).powi(2)).fold(T::zero(), |a, b| a + b) / n).sqrt();
    let d1 = (f0
        .iter()
        .zip(y0)
        .map(|(f, y)| (f.norm() / scale(y)).powi(2))
        .fold(T::zero(), |a, b| a + b)
        / n)
        .sqrt();
    let small = T::lit(1e-5);
    let mut h0 = if d0 < small || d1 < small {
        T::lit(1e-6)
    } else {
        T::lit(0.01) * d0 / d1
    };
    h0 = h0.min(span);
    let y1: Vec<_> = y0.iter().zip(f0).map(|(y, f)| *y + *f * h0).collect();
    let mut f1 = vec![Complex::<T>::zero(); y0.len()];
    f.eval(t0 + h0, &y1, &mut f1)?;
    let d2 = (f1
        .iter()
        .zip(f0)
        .zip(y0)
        .map(|((a, b), y)| ((*a - *b).norm() / scale(y)).powi(2))
        .fold(T::zero(), |a, b| a + b)
        / n)
        .sqrt()
        / h0;
    let dmax = d1.max(d2);
    let h1 = if dmax <= T::lit(1e-15) {
        (h0 * T::lit(1e-3)).max(T::lit(1e-6))
    } else {
        (T::lit(0.01) / dmax).powf(T::lit(0.2))
    };
    Ok((T::lit(100.0) * h0).min(h1).min(span))
}

/// Integrates from `t0` and returns the state at each of `sample_times`,
/// which must be non-decreasing and not before `t0`. Steps are clipped to
/// land exactly on every sample time.
pub fn integrate<T: Real, F: Rhs<T>>(
    mut f: F,
    t0: T,
    y0: &[Complex<T>],
    sample_times: &[T],
    tol: &Tolerances<T>,
) -> Result<Vec<Vec<Complex<T>>>> {
    let n = y0.len();
    let mut out = Vec::with_capacity(sample_times.len());
    let mut t = t0;
    let mut y = y0.to_vec();
    let t_end = sample_times.last().copied().unwrap_or(t0);
    if let Some(bad) = sample_times.windows(2).find(|w| w[1] < w[0]) {
        return Err(Error::InvalidParams(format!(
            "sample times must be non-decreasing ({} after {})",
            bad[1], bad[0]
        )));
    }
    if sample_times.first().is_some_and(|&s| s < t0) {
        return Err(Error::InvalidParams("sample time before the initial time".into()));
    }

    let mut k: Vec<Vec<Complex<T>>> = vec![vec![Complex::<T>::zero(); n]; 7];
    let mut stage = vec![Complex::<T>::zero(); n];
    let mut y_new = vec![Complex::<T>::zero(); n];
    let mut err = vec![Complex::<T>::zero(); n];
    f.eval(t, &y, &mut k[0])?;
    let mut h = if t_end > t0 {
        initial_step(&mut f, t0, &y, &k[0], t_end - t0, tol)?
    } else {
        T::one()
    };
    let mut steps = 0usize;

    for &target in sample_times {
        while t < target {
            steps += 1;
            if steps > tol.max_steps {
                return Err(Error::NonConvergence(format!(
                    "step limit {} reached at t = {t}",
                    tol.max_steps
                )));
            }
            let remaining = target - t;
            let last = h >= remaining;
            let step = if last { remaining } else { h };
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = y[i];
                    for (r, &a) in A[s][..s].iter().enumerate() {
                        if a != 0.0 {
                            acc = acc + k[r][i] * (step * T::lit(a));
                        }
                    }
                    stage[i] = acc;
                }
                let (_, rest) = k.split_at_mut(s);
                f.eval(t + step * T::lit(C[s]), &stage, &mut rest[0])?;
            }
            // The seventh stage is evaluated at the fifth-order solution.
            y_new.copy_from_slice(&stage);
            for i in 0..n {
                let mut e = Complex::<T>::zero();
                for (r, &w) in E.iter().enumerate() {
                    if w != 0.0 {
                        e = e + k[r][i] * T::lit(w);
                    }
                }
                err[i] = e * step;
            }
            let en = error_norm(&err, &y, &y_new, tol);
            if !en.is_finite() {
                h = step * T::lit(0.25);
                if h < T::epsilon() * (T::one() + t.abs()) {
                    return Err(Error::NonConvergence(format!("non-finite state near t = {t}")));
                }
                continue;
            }
            let factor = if en == T::zero() {
                T::lit(5.0)
            } else {
                (T::lit(0.9) * en.powf(T::lit(-0.2))).max(T::lit(0.2)).min(T::lit(5.0))
            };
            if en <= T::one() {
                t = if last { target } else { t + step };
                std::mem::swap(&mut y, &mut y_new);
                k.swap(0, 6);
                if !last || factor < T::one() {
                    h = step * factor;
                }
            } else {
                h = step * factor.min(T::one());
                if h < T::epsilon() * T::lit(16.0) * (T::one() + t.abs()) {
                    return Err(Error::NonConvergence(format!("step size underflow at t = {t}")));
                }
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn complex_rotation_decay() {
        let lam = Complex64::new(-0.3, 2.0);
        let rhs = |_t: f64, y: &[Complex64], dy: &mut [Complex64]| {
            dy[0] = lam * y[0];
            Ok(())
        };
        let times: Vec<f64> = (0..=10).map(|i| i as f64).collect();
        let out = integrate(rhs, 0.0, &[Complex64::new(1.0, 0.5)], &times, &Tolerances::default()).unwrap();
        for (t, y) in times.iter().zip(&out) {
            let exact = Complex64::new(1.0, 0.5) * (lam * t).exp();
            assert!((y[0] - exact).norm() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn riccati_with_known_solution() {
        // y' = 1 − y², y(0) = 0 → tanh t.
        let rhs = |_t: f64, y: &[Complex64], dy: &mut [Complex64]| {
            dy[0] = Complex64::new(1.0, 0.0) - y[0] * y[0];
            Ok(())
        };
        let out = integrate(rhs, 0.0, &[Complex64::new(0.0, 0.0)], &[0.5, 3.0, 20.0], &Tolerances::default()).unwrap();
        for (t, y) in [0.5f64, 3.0, 20.0].iter().zip(&out) {
            assert!((y[0].re - t.tanh()).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_span_and_repeated_samples() {
        let rhs = |_t: f64, y: &[Complex64], dy: &mut [Complex64]| {
            dy[0] = -y[0];
            Ok(())
        };
        let out = integrate(rhs, 1.0, &[Complex64::new(2.0, 0.0)], &[1.0, 1.0, 2.0], &Tolerances::default()).unwrap();
        assert_eq!(out[0][0], Complex64::new(2.0, 0.0));
        assert_eq!(out[1][0], Complex64::new(2.0, 0.0));
        assert!((out[2][0].re - 2.0 * (-1.0f64).exp()).abs() < 1e-10);
        assert!(integrate(rhs, 1.0, &[Complex64::new(2.0, 0.0)], &[0.5], &Tolerances::default()).is_err());
    }

    #[test]
    fn blow_up_is_reported() {
        let rhs = |_t: f64, y: &[Complex64], dy: &mut [Complex64]| {
            dy[0] = y[0] * y[0];
            Ok(())
        };
        let tol = Tolerances {
            max_steps: 10_000,
            ..Tolerances::default()
        };
        let r = integrate(rhs, 0.0, &[Complex64::new(1.0, 0.0)], &[2.0], &tol);
        assert!(matches!(r, Err(Error::NonConvergence(_))));
    }
}
