//! Exact Gaussian-dynamics propagation.
//!
//! Every Hamiltonian in this toolkit is quadratic, `H = (1/2) z^T M(t) z`
//! with `z = (x_1..x_N, p_1..p_N)`, so the Heisenberg flow is a linear
//! canonical map `z(t) = S(t) z(0)` obeying
//!
//! ```text
//! dS/dt = J M(t) S,    S(t0) = I,    J = [[0, I], [-I, 0]].
//! ```
//!
//! For the uniform-mirror family the matrix `M(t)` is a time-independent
//! `M0` divided by the cavity length, so the flow is an exact matrix
//! exponential in the logarithmic time `tau = ln(1 + beta t)/beta`. A
//! fixed-step RK4 path covers arbitrary `M(t)` and doubles as a cross-check
//! of the exponential path. The symplectic defect `||S^T J S - J||_max` is
//! monitored at every sample.
//!
//! ```
//! use casimir_kit::symplectic::{propagate, HamiltonianSpec, PropagationOptions};
//!
//! let grid: Vec<f64> = (0..51).map(|i| i as f64 * 0.04).collect();
//! let prop = propagate(
//!     &HamiltonianSpec::SingleModeUniform { beta: 0.5 },
//!     &grid,
//!     &PropagationOptions::default(),
//! ).unwrap();
//! assert!(prop.max_defect() < 1e-10);
//! let photons = prop.photon_numbers(&[std::f64::consts::PI]).unwrap();
//! let expect = casimir_kit::analytic::photons_uniform(2.0, 0.5).unwrap();
//! assert!((photons.last().unwrap()[0] - expect).abs() < 1e-8);
//! ```

use nalgebra::DMatrix;

use crate::cavity::{coupling_g, Trajectory};
use crate::error::{Error, Result};
use crate::units::omega_static;

/// Symmetric coefficient matrix of a quadratic Hamiltonian,
/// `H = (1/2) z^T M z` with `z = (x_1..x_N, p_1..p_N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    modes: usize,
    matrix: DMatrix<f64>,
}

impl QuadraticForm {
    /// Wrap a coefficient matrix, symmetrizing round-off and checking shape.
    pub fn new(modes: usize, matrix: DMatrix<f64>) -> Result<Self> {
        let dim = 2 * modes;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: matrix.nrows(),
            });
        }
        let sym = 0.5 * (&matrix + matrix.transpose());
        Ok(QuadraticForm { modes, matrix: sym })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `<H> = (1/2) tr(M V)` for a zero-mean Gaussian state with covariance V.
    pub fn energy(&self, covariance: &DMatrix<f64>) -> f64 {
        0.5 * (&self.matrix * covariance).trace()
    }
}

/// The quadratic Hamiltonians of the moving-mirror problem.
#[derive(Debug, Clone, PartialEq)]
pub enum HamiltonianSpec {
    /// Full multimode effective Hamiltonian in the lab frame: parametric
    /// frequencies `omega_k(t) = k pi / q(t)` plus the `(q_dot/q) G_kj p_k x_j`
    /// couplings, truncated at `n_modes`.
    LabFrame {
        n_modes: usize,
        trajectory: Trajectory,
    },
    /// Squeeze-frame Hamiltonian for uniform motion: `M(t) = M0 / q(t)` with
    /// `M0` time-independent.
    FactorizedUniform { n_modes: usize, beta: f64 },
    /// Principal-mode restriction of the factorized uniform Hamiltonian.
    SingleModeUniform { beta: f64 },
    /// Time-independent two-mode Hamiltonian with the `4 v / 3` intermode
    /// coupling.
    TwoMode { beta: f64 },
}

impl HamiltonianSpec {
    pub fn modes(&self) -> usize {
        match self {
            HamiltonianSpec::LabFrame { n_modes, .. } => *n_modes,
            HamiltonianSpec::FactorizedUniform { n_modes, .. } => *n_modes,
            HamiltonianSpec::SingleModeUniform { .. } => 1,
            HamiltonianSpec::TwoMode { .. } => 2,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            HamiltonianSpec::LabFrame { n_modes, .. }
            | HamiltonianSpec::FactorizedUniform { n_modes, .. } => {
                if *n_modes < 1 {
                    return Err(Error::InvalidModeIndex { k: 0 });
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Time-independent factorized-frame coefficient matrix `M0` for uniform
/// motion at velocity `beta`, truncated at `n_modes`.
fn factorized_m0(n_modes: usize, beta: f64) -> DMatrix<f64> {
    let n = n_modes;
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for k in 1..=n {
        let wk = omega_static(k);
        m[(k - 1, k - 1)] = wk * wk;
        m[(n + k - 1, n + k - 1)] = 1.0;
        // mode-wise squeeze term -(v/2)(x_k p_k + p_k x_k)/2 per mode
        m[(k - 1, n + k - 1)] = -0.5 * beta;
        m[(n + k - 1, k - 1)] = -0.5 * beta;
    }
    for k in 1..=n {
        for j in 1..=n {
            if j == k {
                continue;
            }
            // v G_kj p_k x_j
            let g = beta * coupling_g(k, j).expect("k != j");
            m[(j - 1, n + k - 1)] += g;
            m[(n + k - 1, j - 1)] += g;
        }
    }
    m
}

/// Coefficient matrix of `spec` at time `t`.
pub fn hamiltonian_matrix(spec: &HamiltonianSpec, t: f64) -> Result<QuadraticForm> {
    spec.validate()?;
    let n = spec.modes();
    let m = match spec {
        HamiltonianSpec::LabFrame {
            n_modes,
            trajectory,
        } => {
            let q = trajectory.q(t)?;
            let qd = trajectory.q_dot(t);
            let mut m = DMatrix::zeros(2 * n, 2 * n);
            for k in 1..=*n_modes {
                let wk = omega_static(k) / q;
                m[(k - 1, k - 1)] = wk * wk;
                m[(n + k - 1, n + k - 1)] = 1.0;
            }
            for k in 1..=*n_modes {
                for j in 1..=*n_modes {
                    if j == k {
                        continue;
                    }
                    let g = qd / q * coupling_g(k, j).expect("k != j");
                    m[(j - 1, n + k - 1)] += g;
                    m[(n + k - 1, j - 1)] += g;
                }
            }
            m
        }
        HamiltonianSpec::FactorizedUniform { n_modes, beta } => {
            let q = Trajectory::uniform(*beta).q(t)?;
            factorized_m0(*n_modes, *beta) / q
        }
        HamiltonianSpec::SingleModeUniform { beta } => {
            let q = Trajectory::uniform(*beta).q(t)?;
            factorized_m0(1, *beta) / q
        }
        HamiltonianSpec::TwoMode { beta } => {
            let mut m = factorized_m0(2, 0.0);
            let b = *beta;
            m[(0, 2)] = -0.5 * b;
            m[(2, 0)] = -0.5 * b;
            m[(1, 3)] = -0.5 * b;
            m[(3, 1)] = -0.5 * b;
            // + (4v/3)(x_2 p_1 - x_1 p_2)
            m[(1, 2)] = 4.0 * b / 3.0;
            m[(2, 1)] = 4.0 * b / 3.0;
            m[(0, 3)] = -4.0 * b / 3.0;
            m[(3, 0)] = -4.0 * b / 3.0;
            m
        }
    };
    QuadraticForm::new(n, m)
}

/// `J = [[0, I], [-I, 0]]` in the `(x_1..x_N, p_1..p_N)` ordering.
pub fn j_matrix(modes: usize) -> DMatrix<f64> {
    let n = modes;
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k, n + k)] = 1.0;
        j[(n + k, k)] = -1.0;
    }
    j
}

/// `||S^T J S - J||_max`.
pub fn symplectic_defect(s: &DMatrix<f64>) -> f64 {
    let n = s.nrows() / 2;
    let j = j_matrix(n);
    let d = s.transpose() * &j * s - &j;
    d.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// Integration controls for [`propagate`].
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationOptions {
    /// Maximum allowed symplectic defect at any sample.
    pub defect_tol: f64,
    /// Upper bound on the RK4 step (the step also never exceeds the grid
    /// spacing).
    pub max_step: f64,
    /// Force the RK4 path even where the exact exponential is available.
    pub force_rk4: bool,
}

impl Default for PropagationOptions {
    fn default() -> Self {
        PropagationOptions {
            defect_tol: 1e-10,
            max_step: 2.5e-4,
            force_rk4: false,
        }
    }
}

/// Symplectic flow matrices sampled on a time grid.
#[derive(Debug, Clone)]
pub struct SymplecticPropagation {
    modes: usize,
    times: Vec<f64>,
    matrices: Vec<DMatrix<f64>>,
    defects: Vec<f64>,
}

impl SymplecticPropagation {
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.matrices
    }

    pub fn defects(&self) -> &[f64] {
        &self.defects
    }

    pub fn max_defect(&self) -> f64 {
        self.defects.iter().fold(0.0f64, |a, &d| a.max(d))
    }

    /// Vacuum covariance with respect to per-mode reference frequencies:
    /// `<x_k^2> = 1/(2 w_k)`, `<p_k^2> = w_k/2`, no correlations.
    pub fn vacuum_covariance(omega_ref: &[f64]) -> DMatrix<f64> {
        let n = omega_ref.len();
        let mut v = DMatrix::zeros(2 * n, 2 * n);
        for (k, &w) in omega_ref.iter().enumerate() {
            v[(k, k)] = 0.5 / w;
            v[(n + k, n + k)] = 0.5 * w;
        }
        v
    }

    /// Covariance evolved to every sample, `V(t) = S V0 S^T`.
    pub fn evolve_covariance(&self, v0: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
        self.matrices
            .iter()
            .map(|s| s * v0 * s.transpose())
            .collect()
    }

    /// Per-mode photon numbers over the grid for an initial vacuum state,
    /// counted against `omega_ref`:
    /// `n_k(t) = [w_k <x_k^2>(t) + <p_k^2>(t)/w_k]/2 - 1/2`.
    pub fn photon_numbers(&self, omega_ref: &[f64]) -> Result<Vec<Vec<f64>>> {
        let n = self.modes;
        if omega_ref.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: omega_ref.len(),
            });
        }
        if omega_ref.iter().any(|&w| w <= 0.0) {
            return Err(Error::Domain(
                "reference frequencies must be positive".into(),
            ));
        }
        let v0 = Self::vacuum_covariance(omega_ref);
        let out = self
            .evolve_covariance(&v0)
            .into_iter()
            .map(|v| {
                (0..n)
                    .map(|k| {
                        let w = omega_ref[k];
                        0.5 * (w * v[(k, k)] + v[(n + k, n + k)] / w) - 0.5
                    })
                    .collect()
            })
            .collect();
        Ok(out)
    }

    /// Map a factorized-frame propagation back to the lab frame for uniform
    /// motion: x-rows are scaled by `sigma(t) = sqrt(q(t))` and p-rows by
    /// `1/sigma(t)`.
    pub fn frame_map(&self, beta: f64) -> Result<SymplecticPropagation> {
        let n = self.modes;
        let traj = Trajectory::uniform(beta);
        let mut matrices = Vec::with_capacity(self.matrices.len());
        let mut defects = Vec::with_capacity(self.matrices.len());
        for (s, &t) in self.matrices.iter().zip(&self.times) {
            let sigma = traj.q(t)?.sqrt();
            let mut mapped = s.clone();
            for row in 0..n {
                for col in 0..2 * n {
                    mapped[(row, col)] *= sigma;
                    mapped[(n + row, col)] /= sigma;
                }
            }
            defects.push(symplectic_defect(&mapped));
            matrices.push(mapped);
        }
        Ok(SymplecticPropagation {
            modes: n,
            times: self.times.clone(),
            matrices,
            defects,
        })
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::Config("time grid needs >= 2 samples".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("time grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Propagate the flow of an arbitrary time-dependent coefficient matrix with
/// fixed-step RK4.
pub fn propagate_fn<F>(
    modes: usize,
    m_of_t: F,
    grid: &[f64],
    opts: &PropagationOptions,
) -> Result<SymplecticPropagation>
where
    F: Fn(f64) -> Result<DMatrix<f64>>,
{
    check_grid(grid)?;
    let dim = 2 * modes;
    let j = j_matrix(modes);
    let rhs = |t: f64, s: &DMatrix<f64>| -> Result<DMatrix<f64>> { Ok(&j * m_of_t(t)? * s) };

    let mut s = DMatrix::<f64>::identity(dim, dim);
    let mut matrices = vec![s.clone()];
    let mut defects = vec![0.0];
    for w in grid.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let span = t1 - t0;
        let steps = (span / opts.max_step).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        for i in 0..steps {
            let t = t0 + i as f64 * h;
            let k1 = rhs(t, &s)?;
            let k2 = rhs(t + 0.5 * h, &(&s + 0.5 * h * &k1))?;
            let k3 = rhs(t + 0.5 * h, &(&s + 0.5 * h * &k2))?;
            let k4 = rhs(t + h, &(&s + h * &k3))?;
            s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        let defect = symplectic_defect(&s);
        if defect > opts.defect_tol {
            return Err(Error::SymplecticDefect {
                t: t1,
                defect,
                tol: opts.defect_tol,
            });
        }
        defects.push(defect);
        matrices.push(s.clone());
    }
    Ok(SymplecticPropagation {
        modes,
        times: grid.to_vec(),
        matrices,
        defects,
    })
}

/// Propagate the Heisenberg flow of `spec` on `grid`.
///
/// The uniform-mirror specs evolve through the exact matrix exponential of
/// `J M0` in logarithmic time; `LabFrame` (and any run with `force_rk4`)
/// goes through the RK4 path.
pub fn propagate(
    spec: &HamiltonianSpec,
    grid: &[f64],
    opts: &PropagationOptions,
) -> Result<SymplecticPropagation> {
    spec.validate()?;
    check_grid(grid)?;
    if opts.force_rk4 {
        return propagate_fn(
            spec.modes(),
            |t| Ok(hamiltonian_matrix(spec, t)?.matrix().clone()),
            grid,
            opts,
        );
    }
    match spec {
        HamiltonianSpec::LabFrame { .. } => propagate_fn(
            spec.modes(),
            |t| Ok(hamiltonian_matrix(spec, t)?.matrix().clone()),
            grid,
            opts,
        ),
        HamiltonianSpec::FactorizedUniform { n_modes, beta } => {
            propagate_exact_logtime(*n_modes, *beta, grid, opts)
        }
        HamiltonianSpec::SingleModeUniform { beta } => {
            propagate_exact_logtime(1, *beta, grid, opts)
        }
        HamiltonianSpec::TwoMode { .. } => {
            let m0 = hamiltonian_matrix(spec, 0.0)?.matrix().clone();
            propagate_exact_const(2, &m0, grid, opts)
        }
    }
}

/// Exact flow of `M(t) = M0 / q(t)` for uniform motion: `S(t) = exp(J M0
/// [tau(t) - tau(t0)])` with `tau = ln(1 + beta t)/beta`.
fn propagate_exact_logtime(
    n_modes: usize,
    beta: f64,
    grid: &[f64],
    opts: &PropagationOptions,
) -> Result<SymplecticPropagation> {
    let traj = Trajectory::uniform(beta);
    let tau = |t: f64| -> Result<f64> {
        let q = traj.q(t)?;
        Ok(if beta == 0.0 { t } else { q.ln() / beta })
    };
    let jm0 = j_matrix(n_modes) * factorized_m0(n_modes, beta);
    let tau0 = tau(grid[0])?;
    let mut matrices = Vec::with_capacity(grid.len());
    let mut defects = Vec::with_capacity(grid.len());
    for &t in grid {
        let s = (jm0.clone() * (tau(t)? - tau0)).exp();
        let defect = symplectic_defect(&s);
        if defect > opts.defect_tol {
            return Err(Error::SymplecticDefect {
                t,
                defect,
                tol: opts.defect_tol,
            });
        }
        defects.push(defect);
        matrices.push(s);
    }
    Ok(SymplecticPropagation {
        modes: n_modes,
        times: grid.to_vec(),
        matrices,
        defects,
    })
}

/// Exact flow of a constant coefficient matrix: `S(t) = exp(J M (t - t0))`.
fn propagate_exact_const(
    modes: usize,
    m: &DMatrix<f64>,
    grid: &[f64],
    opts: &PropagationOptions,
) -> Result<SymplecticPropagation> {
    let jm = j_matrix(modes) * m;
    let t0 = grid[0];
    let mut matrices = Vec::with_capacity(grid.len());
    let mut defects = Vec::with_capacity(grid.len());
    for &t in grid {
        let s = (jm.clone() * (t - t0)).exp();
        let defect = symplectic_defect(&s);
        if defect > opts.defect_tol {
            return Err(Error::SymplecticDefect {
                t,
                defect,
                tol: opts.defect_tol,
            });
        }
        defects.push(defect);
        matrices.push(s);
    }
    Ok(SymplecticPropagation {
        modes,
        times: grid.to_vec(),
        matrices,
        defects,
    })
}

/// Conservation check for the linear invariant `A(t) = f(t) . z`.
///
/// The coefficient vector is carried by the inverse-transpose flow,
/// `f(t) = S(t)^{-T} f0`, which keeps `<A(t)>` constant for every evolved
/// Gaussian state. Returns the maximum drift of `<A(t)>` over a fixed family
/// of first-moment vectors (the canonical basis plus two mixed directions).
pub fn linear_invariant_check(
    spec: &HamiltonianSpec,
    f0: &[f64],
    grid: &[f64],
    opts: &PropagationOptions,
) -> Result<f64> {
    let n = spec.modes();
    let dim = 2 * n;
    if f0.len() != dim {
        return Err(Error::Dimension {
            expected: dim,
            got: f0.len(),
        });
    }
    let prop = propagate(spec, grid, opts)?;
    let f0 = DMatrix::from_column_slice(dim, 1, f0);

    let mut moments: Vec<DMatrix<f64>> = (0..dim)
        .map(|i| {
            let mut z = DMatrix::zeros(dim, 1);
            z[(i, 0)] = 1.0;
            z
        })
        .collect();
    moments.push(DMatrix::from_element(dim, 1, 1.0 / (dim as f64).sqrt()));
    moments.push(DMatrix::from_fn(dim, 1, |i, _| {
        if i % 2 == 0 {
            0.5
        } else {
            -0.5
        }
    }));

    let mut max_drift = 0.0f64;
    for s in prop.matrices() {
        // f(t)^T S(t) = f0^T by construction; what remains is numerical residue
        let ft = s
            .transpose()
            .lu()
            .solve(&f0)
            .ok_or_else(|| Error::Accuracy("singular flow matrix".into()))?;
        for z0 in &moments {
            let a_t = (ft.transpose() * s * z0)[(0, 0)];
            let a_0 = (f0.transpose() * z0)[(0, 0)];
            max_drift = max_drift.max((a_t - a_0).abs());
        }
    }
    Ok(max_drift)
}
