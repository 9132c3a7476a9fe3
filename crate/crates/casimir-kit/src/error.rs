use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// The mirror trajectory reached a non-positive cavity length.
    #[error("mirror collision: q({t}) = {q} <= 0")]
    MirrorCollision { t: f64, q: f64 },

    /// Mode indices must be >= 1.
    #[error("invalid mode index {k}: modes are 1-based")]
    InvalidModeIndex { k: usize },

    /// The intermode coupling G_kj is undefined on the diagonal.
    #[error("coupling coefficient undefined for k = j = {k}")]
    EqualModeIndices { k: usize },

    /// A parameter fell outside the domain where an expression is real.
    #[error("domain error: {0}")]
    Domain(String),

    /// The Ermakov scale function crossed zero.
    #[error("ermakov singularity: rho <= 0 at t = {t}")]
    ErmakovSingularity { t: f64 },

    /// An integration failed its step-halving convergence check.
    #[error("integration accuracy failure: {0}")]
    Accuracy(String),

    /// The symplectic defect exceeded its tolerance.
    #[error("symplectic defect {defect:.3e} exceeds tolerance {tol:.3e} at t = {t}")]
    SymplecticDefect { t: f64, defect: f64, tol: f64 },

    /// Velocity outside the two-mode diagonalization bound (Gamma < 0).
    #[error("velocity beta = {beta} violates the diagonalization bound (Gamma < 0)")]
    VelocityBound { beta: f64 },

    /// The plus-branch chi parameter diverges as beta -> 0.
    #[error("branch divergence: chi_+ is singular at beta = 0")]
    BranchDivergence,

    /// A constructed operator matrix failed its hermiticity check.
    #[error("non-hermitian operator: defect {0:.3e}")]
    NonHermitian(f64),

    /// State-vector norm drifted beyond the allowed threshold.
    #[error("norm drift {drift:.3e} exceeds {tol:.3e} at t = {t}")]
    NormDrift { t: f64, drift: f64, tol: f64 },

    /// Population leaked into the top of the truncated basis.
    #[error("truncation leakage {leakage:.3e} exceeds {tol:.3e}; increase the cutoff")]
    Leakage { leakage: f64, tol: f64 },

    /// Mismatched vector/matrix dimensions.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// Expectation value of a hermitian observable came out complex.
    #[error("non-real expectation value: imaginary residue {0:.3e}")]
    NonRealExpectation(f64),

    /// Configuration file problems.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
