//! Brute-force counting-field Liouvillians on truncated Fock spaces.
//!
//! Nothing here uses the closed forms: the RWA oracle only needs the two
//! jump rates of one Bogoliubov mode, and the finite-j oracle builds the
//! Dicke Hamiltonian and cavity loss directly. Both are f64-only.

mod solve;

use std::collections::HashMap;

use num_complex::Complex64;

use crate::bogoliubov::BogoliubovFrame;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::statistics::{occupations, prepare};

pub use solve::{cumulant_rates_fd, dominant_eigenvalue, dominant_eigenvalues, steady_state, FdOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RwaMode {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleKind {
    RwaSingleMode(RwaMode),
    FiniteJDicke { j_atoms: f64 },
}

/// Sparse operator on the truncated Hilbert space, stored by rows.
#[derive(Debug, Clone)]
struct RowOp {
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl RowOp {
    fn from_entries(dim: usize, entries: impl IntoIterator<Item = (usize, usize, Complex64)>) -> Self {
        let mut maps: Vec<HashMap<usize, Complex64>> = vec![HashMap::new(); dim];
        for (r, c, v) in entries {
            *maps[r].entry(c).or_default() += v;
        }
        let rows = maps
            .into_iter()
            .map(|m| {
                let mut row: Vec<_> = m.into_iter().filter(|(_, v)| *v != Complex64::new(0.0, 0.0)).collect();
                row.sort_by_key(|&(c, _)| c);
                row
            })
            .collect();
        Self { rows }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    /// self† · self.
    fn dagger_times_self(&self) -> RowOp {
        // (J†J)_{pq} = Σ_r conj(J_{rp}) J_{rq}
        let mut entries = Vec::new();
        for row in &self.rows {
            for &(p, vp) in row {
                for &(q, vq) in row {
                    entries.push((p, q, vp.conj() * vq));
                }
            }
        }
        RowOp::from_entries(self.dim(), entries)
    }
}

/// Vectorized Liouvillian L(χ) = L_fixed + e^{iχ} L_counted restricted to
/// an invariant sector of density-matrix elements ρ_{ik}.
#[derive(Debug, Clone)]
pub struct TruncatedLiouvillian {
    pub kind: OracleKind,
    pub chi: f64,
    pub cutoffs: Vec<usize>,
    hilbert_dim: usize,
    /// Sector element for each vector index.
    basis: Vec<(usize, usize)>,
    /// Vector indices of the diagonal elements ρ_{ii}, by i.
    diag: Vec<Option<usize>>,
    /// (row, col, fixed part, counted part), diagonal always present.
    entries: Vec<(usize, usize, Complex64, Complex64)>,
}

impl TruncatedLiouvillian {
    /// Length of the vectorized (sector-restricted) density matrix.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn with_chi(&self, chi: f64) -> Self {
        Self { chi, ..self.clone() }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Matrix entries of L(χ) − σ·1.
    pub(crate) fn triplets(&self, chi: f64, shift: Complex64) -> Vec<(usize, usize, Complex64)> {
        let e = Complex64::new(0.0, chi).exp();
        self.entries
            .iter()
            .map(|&(r, c, f, k)| {
                let mut v = f + e * k;
                if r == c {
                    v -= shift;
                }
                (r, c, v)
            })
            .collect()
    }

    /// L(χ)·v at the stored χ.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.apply_at(self.chi, v)
    }

    pub fn apply_at(&self, chi: f64, v: &[Complex64]) -> Vec<Complex64> {
        let e = Complex64::new(0.0, chi).exp();
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for &(r, c, f, k) in &self.entries {
            out[r] += (f + e * k) * v[c];
        }
        out
    }

    /// Counted part of the Liouvillian applied to v.
    pub fn apply_counted(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for &(r, c, _, k) in &self.entries {
            out[r] += k * v[c];
        }
        out
    }

    pub fn trace(&self, v: &[Complex64]) -> Complex64 {
        self.diag.iter().flatten().map(|&p| v[p]).sum()
    }

    /// Vector index of the trace-bearing element used for normalization.
    pub(crate) fn diagonal_positions(&self) -> Vec<usize> {
        self.diag.iter().flatten().copied().collect()
    }

    /// Tr[O ρ] for an operator diagonal in the Fock basis.
    pub fn expectation_diagonal(&self, v: &[Complex64], f: impl Fn(usize) -> f64) -> Complex64 {
        self.diag
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| v[p] * f(i)))
            .sum()
    }

    /// Emission rate Tr[L_counted ρ].
    pub fn emission_rate(&self, rho: &[Complex64]) -> f64 {
        self.trace(&self.apply_counted(rho)).re
    }

    /// Mean photon number Tr[a†a ρ] (RWA: the quasi-mode occupation).
    pub fn photon_number(&self, rho: &[Complex64]) -> f64 {
        let per_photon = match self.kind {
            OracleKind::RwaSingleMode(_) => 1,
            OracleKind::FiniteJDicke { j_atoms } => spin_dim(j_atoms),
        };
        self.expectation_diagonal(rho, |i| (i / per_photon) as f64).re
    }

    /// Dense density matrix from a sector vector (elements outside the
    /// sector are zero).
    pub fn to_dense(&self, v: &[Complex64]) -> Vec<Vec<Complex64>> {
        let mut m = vec![vec![Complex64::new(0.0, 0.0); self.hilbert_dim]; self.hilbert_dim];
        for (&(i, k), &x) in self.basis.iter().zip(v) {
            m[i][k] = x;
        }
        m
    }

    /// Sector vector of a dense density matrix.
    pub fn from_dense(&self, m: &[Vec<Complex64>]) -> Vec<Complex64> {
        self.basis.iter().map(|&(i, k)| m[i][k]).collect()
    }
}

struct Jump {
    op: RowOp,
    rate: f64,
    counted: bool,
}

fn assemble(
    kind: OracleKind,
    chi: f64,
    cutoffs: Vec<usize>,
    h: &RowOp,
    jumps: &[Jump],
    label: impl Fn(usize) -> usize,
) -> TruncatedLiouvillian {
    let d = h.dim();
    let mut basis = Vec::new();
    let mut index = vec![usize::MAX; d * d];
    for i in 0..d {
        for k in 0..d {
            if label(i) == label(k) {
                index[i * d + k] = basis.len();
                basis.push((i, k));
            }
        }
    }
    let diag = (0..d)
        .map(|i| Some(index[i * d + i]).filter(|&p| p != usize::MAX))
        .collect();

    // Effective non-Hermitian Hamiltonian H − (i/2)Σ rate·J†J.
    let mut heff_entries: Vec<(usize, usize, Complex64)> = Vec::new();
    for (r, row) in h.rows.iter().enumerate() {
        for &(c, v) in row {
            heff_entries.push((r, c, v));
        }
    }
    for jump in jumps {
        let jj = jump.op.dagger_times_self();
        for (r, row) in jj.rows.iter().enumerate() {
            for &(c, v) in row {
                heff_entries.push((r, c, Complex64::new(0.0, -0.5 * jump.rate) * v));
            }
        }
    }
    let heff = RowOp::from_entries(d, heff_entries);

    let minus_i = Complex64::new(0.0, -1.0);
    let mut acc: HashMap<(usize, usize), (Complex64, Complex64)> = HashMap::new();
    for (r, &(i, k)) in basis.iter().enumerate() {
        acc.entry((r, r)).or_default();
        // −i H_eff ρ
        for &(p, v) in &heff.rows[i] {
            let c = index[p * d + k];
            if c != usize::MAX {
                acc.entry((r, c)).or_default().0 += minus_i * v;
            }
        }
        // +i ρ H_eff†: (ρ H_eff†)_{ik} = Σ_p ρ_{ip} conj(H_eff_{kp})
        for &(p, v) in &heff.rows[k] {
            let c = index[i * d + p];
            if c != usize::MAX {
                acc.entry((r, c)).or_default().0 += -minus_i * v.conj();
            }
        }
        for jump in jumps {
            for &(p, vp) in &jump.op.rows[i] {
                for &(q, vq) in &jump.op.rows[k] {
                    let c = index[p * d + q];
                    if c == usize::MAX {
                        continue;
                    }
                    let val = vp * vq.conj() * jump.rate;
                    let e = acc.entry((r, c)).or_default();
                    if jump.counted {
                        e.1 += val;
                    } else {
                        e.0 += val;
                    }
                }
            }
        }
    }
    let mut entries: Vec<_> = acc.into_iter().map(|((r, c), (f, k))| (r, c, f, k)).collect();
    entries.sort_by_key(|&(r, c, _, _)| (c, r));
    TruncatedLiouvillian {
        kind,
        chi,
        cutoffs,
        hilbert_dim: d,
        basis,
        diag,
        entries,
    }
}

fn ladder(n_max: usize) -> RowOp {
    RowOp::from_entries(
        n_max + 1,
        (1..=n_max).map(|n| (n - 1, n, Complex64::new((n as f64).sqrt(), 0.0))),
    )
}

/// Single Bogoliubov mode under the rotating-wave dissipator: cooling at
/// ΓĀ² (ΓḠ² for mode 2) and heating at ΓB̄² (ΓD̄²), both jumps counted.
/// Only the populations form the invariant sector here.
pub fn build_rwa_liouvillian(
    frame: &BogoliubovFrame<f64>,
    mode: RwaMode,
    gamma_loss: f64,
    chi: f64,
    cutoff: usize,
) -> Result<TruncatedLiouvillian> {
    if cutoff < 2 {
        return Err(Error::InvalidParams(format!("cutoff {cutoff} must be >= 2")));
    }
    if !(gamma_loss > 0.0) {
        return Err(Error::InvalidParams(format!("gamma_loss = {gamma_loss} must be > 0")));
    }
    let (down, up) = match mode {
        RwaMode::One => (frame.a * frame.a, frame.b * frame.b),
        RwaMode::Two => (frame.g * frame.g, frame.d * frame.d),
    };
    if down == 0.0 {
        return Err(Error::InvalidParams(format!("{mode:?} does not couple to the cavity")));
    }
    let occupation = up / (down - up);
    if !(occupation.is_finite() && occupation >= 0.0) || occupation > cutoff as f64 / 4.0 {
        return Err(Error::CutoffTooSmall { cutoff, occupation });
    }
    let a = ladder(cutoff);
    let adag = RowOp::from_entries(
        cutoff + 1,
        a.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |&(c, v)| (c, r, v.conj()))),
    );
    let h = RowOp::from_entries(cutoff + 1, std::iter::empty());
    let jumps = [
        Jump {
            op: a,
            rate: gamma_loss * down,
            counted: true,
        },
        Jump {
            op: adag,
            rate: gamma_loss * up,
            counted: true,
        },
    ];
    Ok(assemble(
        OracleKind::RwaSingleMode(mode),
        chi,
        vec![cutoff],
        &h,
        &jumps,
        |i| i,
    ))
}

fn spin_dim(j_atoms: f64) -> usize {
    (2.0 * j_atoms).round() as usize + 1
}

/// Rough steady photon number used to judge the cutoff.
fn photon_estimate(params: &ModelParams<f64>) -> f64 {
    match prepare(params) {
        Ok(p) => occupations(&p).photon_total(),
        Err(_) => {
            let mf = crate::model::solve_displacements(params);
            mf.map(|m| m.alpha_abs(params.j_atoms)).unwrap_or(0.0) + 1.0
        }
    }
}

/// Finite-j Dicke model with cavity loss; only emission a ρ a† is counted.
/// The sector of equal total parity (photons plus spin excitations) holds
/// the steady state.
pub fn build_dicke_liouvillian(params: &ModelParams<f64>, photon_cutoff: usize, chi: f64) -> Result<TruncatedLiouvillian> {
    params.validate()?;
    let j = params.j_atoms;
    let twice = 2.0 * j;
    if (twice - twice.round()).abs() > 1e-12 || !(0.5..=8.0).contains(&j) {
        return Err(Error::InvalidParams(format!("j = {j} must be a half-integer in [1/2, 8]")));
    }
    if !(2..=64).contains(&photon_cutoff) {
        return Err(Error::InvalidParams(format!("photon cutoff {photon_cutoff} must be in [2, 64]")));
    }
    let occupation = photon_estimate(params);
    if occupation > photon_cutoff as f64 / 4.0 {
        return Err(Error::CutoffTooSmall {
            cutoff: photon_cutoff,
            occupation,
        });
    }

    let ds = spin_dim(j);
    let dp = photon_cutoff + 1;
    let d = ds * dp;
    let idx = |n: usize, k: usize| n * ds + k;
    let g = params.lambda / twice.sqrt();
    let re = |x: f64| Complex64::new(x, 0.0);
    let mut h = Vec::new();
    for n in 0..dp {
        for k in 0..ds {
            let m = j - k as f64;
            h.push((idx(n, k), idx(n, k), re(params.omega0 * m + params.omega * n as f64)));
            // (a + a†)(J+ + J−); J+ lowers k.
            let photon_moves = [(n + 1, ((n + 1) as f64).sqrt()), (n.wrapping_sub(1), (n as f64).sqrt())];
            for (n2, amp) in photon_moves {
                if n2 >= dp {
                    continue;
                }
                if k > 0 {
                    let c = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
                    h.push((idx(n2, k - 1), idx(n, k), re(g * amp * c)));
                }
                if k + 1 < ds {
                    let c = (j * (j + 1.0) - m * (m - 1.0)).sqrt();
                    h.push((idx(n2, k + 1), idx(n, k), re(g * amp * c)));
                }
            }
        }
    }
    let h = RowOp::from_entries(d, h);
    let a = RowOp::from_entries(
        d,
        (1..dp).flat_map(|n| (0..ds).map(move |k| (idx(n - 1, k), idx(n, k), re((n as f64).sqrt())))),
    );
    let jumps = [Jump {
        op: a,
        rate: params.gamma_loss,
        counted: true,
    }];
    Ok(assemble(
        OracleKind::FiniteJDicke { j_atoms: j },
        chi,
        vec![photon_cutoff, ds - 1],
        &h,
        &jumps,
        |i| (i / ds + i % ds) % 2,
    ))
}
