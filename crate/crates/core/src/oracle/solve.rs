use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};
use num_complex::Complex64;

use super::TruncatedLiouvillian;
use crate::error::{Error, Result};

type Lu = faer::sparse::linalg::solvers::Lu<usize, Complex64>;

fn factorize(n: usize, trips: &[(usize, usize, Complex64)]) -> Result<Lu> {
    let t: Vec<_> = trips.iter().map(|&(r, c, v)| Triplet::new(r, c, v)).collect();
    let m = SparseColMat::<usize, Complex64>::try_new_from_triplets(n, n, &t)
        .map_err(|e| Error::LinearAlgebra(format!("sparse assembly: {e:?}")))?;
    m.sp_lu().map_err(|e| Error::LinearAlgebra(format!("sparse LU: {e:?}")))
}

fn solve_with(lu: &Lu, rhs: &[Complex64]) -> Vec<Complex64> {
    let mut b = Mat::<Complex64>::zeros(rhs.len(), 1);
    for (i, &x) in rhs.iter().enumerate() {
        b[(i, 0)] = x;
    }
    let x = lu.solve(&b);
    (0..rhs.len()).map(|i| x[(i, 0)]).collect()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Normalized steady state of L(0): one population equation is replaced by
/// the trace condition.
pub fn steady_state(l: &TruncatedLiouvillian) -> Result<Vec<Complex64>> {
    let n = l.dimension();
    let diag = l.diagonal_positions();
    let pivot_row = diag[0];
    let mut trips: Vec<_> = l
        .triplets(0.0, Complex64::new(0.0, 0.0))
        .into_iter()
        .filter(|&(r, _, _)| r != pivot_row)
        .collect();
    trips.extend(diag.iter().map(|&p| (pivot_row, p, Complex64::new(1.0, 0.0))));
    let lu = factorize(n, &trips)?;
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    rhs[pivot_row] = Complex64::new(1.0, 0.0);
    let rho = solve_with(&lu, &rhs);
    if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::LinearAlgebra("steady state is singular or not unique".into()));
    }
    Ok(rho)
}

const MAX_HOMOTOPY_STEP: f64 = 0.05;
const MAX_INVERSE_ITERATIONS: usize = 60;

/// Dominant eigenvalue of L(χ) at the stored χ.
pub fn dominant_eigenvalue(l: &TruncatedLiouvillian) -> Result<Complex64> {
    Ok(dominant_eigenvalues(l, &[l.chi])?[0])
}

/// Eigenvalue branch continuously connected to 0 at χ = 0, followed by
/// shifted inverse iteration along a homotopy in χ, for each requested χ.
pub fn dominant_eigenvalues(l: &TruncatedLiouvillian, chis: &[f64]) -> Result<Vec<Complex64>> {
    let rho = steady_state(l)?;
    let mut origin = Tracker::new(l, &rho);
    origin.step(0.0)?;
    let theta0 = origin.history[0].1;
    let mut out: Vec<Complex64> = chis.iter().map(|_| theta0).collect();
    for sign in [1.0, -1.0] {
        let mut order: Vec<usize> = (0..chis.len()).filter(|&i| chis[i] * sign > 0.0).collect();
        order.sort_by(|&a, &b| chis[a].abs().total_cmp(&chis[b].abs()));
        if order.is_empty() {
            continue;
        }
        let mut tracker = origin.clone();
        for i in order {
            out[i] = tracker.advance_to(chis[i])?;
        }
    }
    Ok(out)
}

#[derive(Clone)]
struct Tracker<'a> {
    l: &'a TruncatedLiouvillian,
    history: Vec<(f64, Complex64)>,
    vec: Vec<Complex64>,
}

impl<'a> Tracker<'a> {
    fn new(l: &'a TruncatedLiouvillian, rho: &[Complex64]) -> Self {
        let nrm = norm(rho);
        Self {
            l,
            history: Vec::new(),
            vec: rho.iter().map(|z| z / nrm).collect(),
        }
    }

    fn predict(&self, chi: f64) -> Complex64 {
        let h = &self.history;
        match h.len() {
            0 => Complex64::new(0.0, 0.0),
            1 => h[0].1,
            2 => {
                let (x0, y0) = h[0];
                let (x1, y1) = h[1];
                y1 + (y1 - y0) * ((chi - x1) / (x1 - x0))
            }
            _ => {
                // Quadratic through the last three points.
                let n = h.len();
                let pts = [h[n - 3], h[n - 2], h[n - 1]];
                let mut y = Complex64::new(0.0, 0.0);
                for (a, &(xa, ya)) in pts.iter().enumerate() {
                    let mut w = 1.0;
                    for (b, &(xb, _)) in pts.iter().enumerate() {
                        if a != b {
                            w *= (chi - xb) / (xa - xb);
                        }
                    }
                    y += ya * w;
                }
                y
            }
        }
    }

    fn advance_to(&mut self, target: f64) -> Result<Complex64> {
        let start = self.history.last().map_or(0.0, |p| p.0);
        let span = target - start;
        let steps = ((span.abs() / MAX_HOMOTOPY_STEP).ceil() as usize).max(1);
        for s in 1..=steps {
            let chi = if s == steps {
                target
            } else {
                start + span * s as f64 / steps as f64
            };
            self.step(chi)?;
        }
        Ok(self.history.last().expect("just pushed").1)
    }

    fn step(&mut self, chi: f64) -> Result<()> {
        let guess = self.predict(chi);
        // Offset keeps the shifted matrix nonsingular when the guess is exact.
        let shift = guess + Complex64::new(1e-9, 1e-9) * (1.0 + guess.norm());
        let lu = factorize(self.l.dimension(), &self.l.triplets(chi, shift))?;
        let mut v = self.vec.clone();
        let mut mu = guess;
        let mut converged = false;
        for _ in 0..MAX_INVERSE_ITERATIONS {
            let w = solve_with(&lu, &v);
            let denom = dot(&v, &w);
            if denom.norm() == 0.0 || !denom.re.is_finite() {
                return Err(Error::NonConvergence(format!("inverse iteration broke down at chi = {chi}")));
            }
            let next = shift + dot(&v, &v) / denom;
            let nw = norm(&w);
            v = w.iter().map(|z| z / nw).collect();
            let done = (next - mu).norm() <= 1e-14 * (1.0 + next.norm());
            mu = next;
            if done {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence(format!("inverse iteration did not settle at chi = {chi}")));
        }
        let overlap = dot(&self.vec, &v).norm();
        if overlap < 0.5 {
            return Err(Error::EigenvalueCrossing { chi });
        }
        self.vec = v;
        self.history.push((chi, mu));
        Ok(())
    }
}

/// Finite-difference options for [`cumulant_rates_fd`].
#[derive(Debug, Clone, Copy)]
pub struct FdOptions {
    pub max_order: usize,
    pub step: f64,
    pub richardson: bool,
}

impl Default for FdOptions {
    fn default() -> Self {
        Self {
            max_order: 4,
            step: 1e-2,
            richardson: true,
        }
    }
}

fn stencil(order: usize, f: &dyn Fn(i32) -> Complex64, h: f64) -> Complex64 {
    match order {
        1 => (-f(2) + f(1) * 8.0 - f(-1) * 8.0 + f(-2)) / (12.0 * h),
        2 => (-f(2) + f(1) * 16.0 - f(0) * 30.0 + f(-1) * 16.0 - f(-2)) / (12.0 * h * h),
        3 => (-f(3) + f(2) * 8.0 - f(1) * 13.0 + f(-1) * 13.0 - f(-2) * 8.0 + f(-3)) / (8.0 * h.powi(3)),
        4 => {
            (-f(3) + f(2) * 12.0 - f(1) * 39.0 + f(0) * 56.0 - f(-1) * 39.0 + f(-2) * 12.0 - f(-3))
                / (6.0 * h.powi(4))
        }
        _ => unreachable!("orders above 4 are rejected earlier"),
    }
}

/// Cumulant rates k = 1..max_order from central differences of the
/// dominant eigenvalue in χ: κ_k = (−i)ᵏ dᵏθ/dχᵏ.
pub fn cumulant_rates_fd(l: &TruncatedLiouvillian, opts: FdOptions) -> Result<Vec<f64>> {
    if !(1..=4).contains(&opts.max_order) {
        return Err(Error::InvalidParams(format!("order {} must be in 1..=4", opts.max_order)));
    }
    let half = opts.step / 2.0;
    let multiples: [i32; 6] = [-6, -4, -3, -2, -1, 0];
    let mut grid: Vec<i32> = multiples.iter().chain(&[1, 2, 3, 4, 6]).copied().collect();
    grid.sort_unstable();
    let chis: Vec<f64> = grid.iter().map(|&m| m as f64 * half).collect();
    let vals = dominant_eigenvalues(l, &chis)?;
    let at = |m: i32| vals[grid.iter().position(|&g| g == m).expect("grid point")];
    let fine = |k: i32| at(k);
    let coarse = |k: i32| at(2 * k);
    let mut out = Vec::with_capacity(opts.max_order);
    let mut phase = Complex64::new(1.0, 0.0);
    for k in 1..=opts.max_order {
        phase *= Complex64::new(0.0, -1.0);
        let d_coarse = stencil(k, &coarse, opts.step);
        let d = if opts.richardson {
            let d_fine = stencil(k, &fine, half);
            (d_fine * 16.0 - d_coarse) / 15.0
        } else {
            d_coarse
        };
        out.push((phase * d).re);
    }
    Ok(out)
}
