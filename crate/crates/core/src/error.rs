use thiserror::Error;

/// Failure modes of the model, frame, dynamics, statistics and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("mean field inconsistent with parameters: {0}")]
    InconsistentMeanField(String),

    /// A squared normal-mode energy is negative: the quadratic form has no
    /// stable Bogoliubov frame (the region between the first and third
    /// critical couplings).
    #[error("unstable quadratic form: squared eigenenergy {eps_sq:e}")]
    UnstableRegion { eps_sq: f64 },

    #[error("soft mode energy {eps_minus:e} below tolerance {tol:e}; frame coefficients diverge")]
    CriticalSingularity { eps_minus: f64, tol: f64 },

    #[error("square-root branch is ambiguous: constant term {re:e}{im:+e}i")]
    BranchAmbiguity { re: f64, im: f64 },

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("coupling lies in the gap between the first and third critical couplings")]
    GapRegion,

    #[error("vanishing denominator (zero first fluctuation cumulant or zero series constant term)")]
    DegenerateDenominator,

    #[error("cutoff {cutoff} too small for estimated occupation {occupation:.3e}")]
    CutoffTooSmall { cutoff: usize, occupation: f64 },

    #[error("eigenvalue branch collision detected at chi = {chi:e}")]
    EigenvalueCrossing { chi: f64 },

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
