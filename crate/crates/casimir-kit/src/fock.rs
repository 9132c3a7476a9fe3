//! Brute-force state-vector evolution in a truncated Fock basis.
//!
//! This module is the slow, assumption-free oracle of the toolkit: quadratic
//! Hamiltonians are assembled as explicit matrices in a number basis
//! truncated at `dim` levels per mode and the Schroedinger equation is
//! integrated directly. Nothing here knows about Gaussian states or
//! symplectic structure, which is exactly what makes the agreement with
//! [`crate::symplectic`] and [`crate::analytic`] meaningful.
//!
//! Truncation is the one systematic error source, so every evolution tracks
//! the norm drift of the state and the population of the highest retained
//! levels ("leakage"); results are only trustworthy while both stay small.
//!
//! ```
//! use casimir_kit::fock;
//!
//! let grid: Vec<f64> = (0..9).map(|i| i as f64 * 0.25).collect();
//! let n = fock::photons_uniform(0.5, &grid, 30).unwrap();
//! let expect = casimir_kit::analytic::photons_uniform(2.0, 0.5).unwrap();
//! assert!((n.last().unwrap() - expect).abs() < 1e-6);
//! ```

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::cavity::Trajectory;
use crate::error::{Error, Result};
use crate::symplectic::{hamiltonian_matrix, HamiltonianSpec, QuadraticForm};
use crate::units::omega_static;

/// Annihilation operator truncated to `dim` levels: `a[n-1, n] = sqrt(n)`.
pub fn ladder(dim: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Tensor-product Fock space with a truncation and a reference frequency per
/// mode. Quadratures are taken with respect to the reference frequencies:
/// `x_k = (a_k + a_k^+) / sqrt(2 w_k)`, `p_k = i sqrt(w_k/2) (a_k^+ - a_k)`.
#[derive(Debug, Clone)]
pub struct FockSpace {
    dims: Vec<usize>,
    omega_ref: Vec<f64>,
}

impl FockSpace {
    pub fn new(dims: Vec<usize>, omega_ref: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.len() != omega_ref.len() {
            return Err(Error::Dimension {
                expected: dims.len(),
                got: omega_ref.len(),
            });
        }
        if dims.iter().any(|&d| d < 2) {
            return Err(Error::Config("each mode needs >= 2 Fock levels".into()));
        }
        if omega_ref.iter().any(|&w| w <= 0.0) {
            return Err(Error::Domain(
                "reference frequencies must be positive".into(),
            ));
        }
        Ok(FockSpace { dims, omega_ref })
    }

    pub fn modes(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Embed a single-mode operator on mode `k` (0-based) via Kronecker
    /// products with identities.
    fn embed(&self, k: usize, op: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut out = DMatrix::identity(1, 1);
        for (i, &d) in self.dims.iter().enumerate() {
            let factor = if i == k {
                op.clone()
            } else {
                DMatrix::identity(d, d)
            };
            out = out.kronecker(&factor);
        }
        out
    }

    pub fn annihilation(&self, k: usize) -> DMatrix<Complex64> {
        self.embed(k, &ladder(self.dims[k]))
    }

    pub fn number(&self, k: usize) -> DMatrix<Complex64> {
        let a = ladder(self.dims[k]);
        self.embed(k, &(a.adjoint() * &a))
    }

    pub fn position(&self, k: usize) -> DMatrix<Complex64> {
        let a = ladder(self.dims[k]);
        let x = (&a + a.adjoint()) / Complex64::new((2.0 * self.omega_ref[k]).sqrt(), 0.0);
        self.embed(k, &x)
    }

    pub fn momentum(&self, k: usize) -> DMatrix<Complex64> {
        let a = ladder(self.dims[k]);
        let p = (a.adjoint() - &a) * Complex64::new(0.0, (self.omega_ref[k] / 2.0).sqrt());
        self.embed(k, &p)
    }

    pub fn vacuum(&self) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.total_dim());
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// Assemble `H = (1/2) sum_ij M_ij Z_i Z_j` with
    /// `Z = (x_1..x_N, p_1..p_N)`. The symmetric coefficient matrix makes the
    /// operator Hermitian; the residual is checked and rejected above 1e-10.
    pub fn hamiltonian(&self, form: &QuadraticForm) -> Result<DMatrix<Complex64>> {
        let n = self.modes();
        if form.modes() != n {
            return Err(Error::Dimension {
                expected: n,
                got: form.modes(),
            });
        }
        let z: Vec<DMatrix<Complex64>> = (0..n)
            .map(|k| self.position(k))
            .chain((0..n).map(|k| self.momentum(k)))
            .collect();
        let m = form.matrix();
        let dim = self.total_dim();
        let mut h = DMatrix::zeros(dim, dim);
        for i in 0..2 * n {
            for j in 0..2 * n {
                let c = m[(i, j)];
                if c != 0.0 {
                    h += (&z[i] * &z[j]) * Complex64::new(0.5 * c, 0.0);
                }
            }
        }
        let dev = (&h - h.adjoint())
            .iter()
            .fold(0.0f64, |acc, x| acc.max(x.norm()));
        if dev > 1e-10 {
            return Err(Error::NonHermitian(dev));
        }
        Ok(h)
    }

    /// Population of the two highest retained levels of mode `k`.
    ///
    /// Two levels rather than one because squeezing-type Hamiltonians only
    /// populate every other level, which would make a single-level probe
    /// blind for half the cutoff choices.
    pub fn leakage(&self, psi: &DVector<Complex64>, k: usize) -> f64 {
        let mut total = 0.0;
        let strides: Vec<usize> = {
            let mut s = vec![1usize; self.dims.len()];
            for i in (0..self.dims.len().saturating_sub(1)).rev() {
                s[i] = s[i + 1] * self.dims[i + 1];
            }
            s
        };
        for (idx, amp) in psi.iter().enumerate() {
            let level = (idx / strides[k]) % self.dims[k];
            if level >= self.dims[k] - 2 {
                total += amp.norm_sqr();
            }
        }
        total
    }
}

/// State samples from a Fock-space evolution.
#[derive(Debug, Clone)]
pub struct FockTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<DVector<Complex64>>,
    /// Max deviation of the state norm from one over the run.
    pub norm_drift: f64,
}

impl FockTrajectory {
    /// `<psi_i| op |psi_i>`, rejected if a non-negligible imaginary part
    /// survives.
    pub fn expectation(&self, op: &DMatrix<Complex64>, i: usize) -> Result<f64> {
        let psi = &self.states[i];
        let val = (psi.adjoint() * op * psi)[(0, 0)];
        if val.im.abs() > 1e-8 * (1.0 + val.re.abs()) {
            return Err(Error::NonRealExpectation(val.im));
        }
        Ok(val.re)
    }

    pub fn expectations(&self, op: &DMatrix<Complex64>) -> Result<Vec<f64>> {
        (0..self.states.len()).map(|i| self.expectation(op, i)).collect()
    }
}

/// Evolve under a constant Hamiltonian by exact diagonalization,
/// `psi(s) = V exp(-i Lambda s) V^+ psi0`, sampled at the evolution
/// parameters `params` (measured from `params[0]`).
pub fn evolve_const(
    h: &DMatrix<Complex64>,
    psi0: &DVector<Complex64>,
    params: &[f64],
) -> Result<Vec<DVector<Complex64>>> {
    if h.nrows() != psi0.len() {
        return Err(Error::Dimension {
            expected: h.nrows(),
            got: psi0.len(),
        });
    }
    let dev = (h - h.adjoint())
        .iter()
        .fold(0.0f64, |acc, x| acc.max(x.norm()));
    if dev > 1e-10 {
        return Err(Error::NonHermitian(dev));
    }
    let eig = h.clone().symmetric_eigen();
    let coeffs = eig.eigenvectors.adjoint() * psi0;
    let s0 = params.first().copied().unwrap_or(0.0);
    let out = params
        .iter()
        .map(|&s| {
            let phased = DVector::from_iterator(
                coeffs.len(),
                coeffs
                    .iter()
                    .zip(eig.eigenvalues.iter())
                    .map(|(c, &lam)| c * Complex64::new(0.0, -lam * (s - s0)).exp()),
            );
            &eig.eigenvectors * phased
        })
        .collect();
    Ok(out)
}

/// Fixed-step RK4 for `i dpsi/ds = H(s) psi` sampled on `grid`, with the
/// internal step capped at `max_step`. The norm drift is monitored against
/// `norm_tol`; exceeding it aborts the run rather than silently
/// renormalizing.
pub fn evolve<F>(
    h_of_s: F,
    psi0: &DVector<Complex64>,
    grid: &[f64],
    max_step: f64,
    norm_tol: f64,
) -> Result<FockTrajectory>
where
    F: Fn(f64) -> Result<DMatrix<Complex64>>,
{
    if grid.len() < 2 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("grid must be strictly increasing".into()));
    }
    let rhs = |s: f64, psi: &DVector<Complex64>| -> Result<DVector<Complex64>> {
        Ok(h_of_s(s)? * psi * Complex64::new(0.0, -1.0))
    };
    let mut psi = psi0.clone();
    let mut states = vec![psi.clone()];
    let mut drift = (psi.norm() - 1.0).abs();
    for w in grid.windows(2) {
        let span = w[1] - w[0];
        let steps = (span / max_step).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        for i in 0..steps {
            let s = w[0] + i as f64 * h;
            let k1 = rhs(s, &psi)?;
            let k2 = rhs(s + 0.5 * h, &(&psi + &k1 * Complex64::new(0.5 * h, 0.0)))?;
            let k3 = rhs(s + 0.5 * h, &(&psi + &k2 * Complex64::new(0.5 * h, 0.0)))?;
            let k4 = rhs(s + h, &(&psi + &k3 * Complex64::new(h, 0.0)))?;
            psi += (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4)
                * Complex64::new(h / 6.0, 0.0);
        }
        let d = (psi.norm() - 1.0).abs();
        drift = drift.max(d);
        if d > norm_tol {
            return Err(Error::NormDrift {
                t: w[1],
                drift: d,
                tol: norm_tol,
            });
        }
        states.push(psi.clone());
    }
    Ok(FockTrajectory {
        times: grid.to_vec(),
        states,
        norm_drift: drift,
    })
}

/// Photon number of the principal mode under uniform mirror motion, from
/// vacuum, sampled on `grid`.
///
/// In logarithmic time `tau = ln(1 + beta t)/beta` the squeeze-frame
/// Hamiltonian is constant, so the evolution is a single exact
/// diagonalization regardless of how fast the mirror moves.
pub fn photons_uniform(beta: f64, grid: &[f64], dim: usize) -> Result<Vec<f64>> {
    let space = FockSpace::new(vec![dim], vec![omega_static(1)])?;
    let form = hamiltonian_matrix(&HamiltonianSpec::FactorizedUniform { n_modes: 1, beta }, 0.0)?;
    let h = space.hamiltonian(&form)?;
    let traj = Trajectory::uniform(beta);
    let taus: Vec<f64> = grid
        .iter()
        .map(|&t| {
            let q = traj.q(t)?;
            Ok(if beta == 0.0 { t } else { q.ln() / beta })
        })
        .collect::<Result<_>>()?;
    let states = evolve_const(&h, &space.vacuum(), &taus)?;
    let number = space.number(0);
    let traj = FockTrajectory {
        times: grid.to_vec(),
        states,
        norm_drift: 0.0,
    };
    traj.expectations(&number)
}

/// Photon numbers of both modes of the two-mode Hamiltonian from vacuum.
/// Returns one `(n_1, n_2)` pair per grid sample.
pub fn photons_two_mode(beta: f64, grid: &[f64], dim_per_mode: usize) -> Result<Vec<(f64, f64)>> {
    let space = FockSpace::new(
        vec![dim_per_mode, dim_per_mode],
        vec![omega_static(1), omega_static(2)],
    )?;
    let form = hamiltonian_matrix(&HamiltonianSpec::TwoMode { beta }, 0.0)?;
    let h = space.hamiltonian(&form)?;
    let states = evolve_const(&h, &space.vacuum(), grid)?;
    let traj = FockTrajectory {
        times: grid.to_vec(),
        states,
        norm_drift: 0.0,
    };
    let n1 = traj.expectations(&space.number(0))?;
    let n2 = traj.expectations(&space.number(1))?;
    Ok(n1.into_iter().zip(n2).collect())
}

/// Photon number of the principal mode under a resonant length modulation
/// `q(t) = 1 + epsilon sin(2 pi t)`, integrated in the instantaneous number
/// basis:
///
/// ```text
/// H(t) = w_1(t) a^+ a + i [w_1_dot / (4 w_1)] (a^+^2 - a^2).
/// ```
pub fn photons_resonance(
    epsilon: f64,
    grid: &[f64],
    dim: usize,
    max_step: f64,
) -> Result<FockResonance> {
    let space = FockSpace::new(vec![dim], vec![omega_static(1)])?;
    let traj = Trajectory::parametric(epsilon)?;
    let a = ladder(dim);
    let number_op = a.adjoint() * &a;
    let squeeze = &a.adjoint() * &a.adjoint() - &a * &a;
    let h_of_t = |t: f64| -> Result<DMatrix<Complex64>> {
        let q = traj.q(t)?;
        let qd = traj.q_dot(t);
        let w = omega_static(1) / q;
        // w_dot / w = -q_dot / q
        let lam = -qd / q / 4.0;
        Ok(number_op.map(|x| x * Complex64::new(w, 0.0))
            + squeeze.map(|x| x * Complex64::new(0.0, lam)))
    };
    let run = evolve(h_of_t, &space.vacuum(), grid, max_step, 1e-8)?;
    let photons = run.expectations(&number_op)?;
    let leakage = run
        .states
        .iter()
        .map(|psi| space.leakage(psi, 0))
        .fold(0.0f64, f64::max);
    Ok(FockResonance {
        times: grid.to_vec(),
        photons,
        norm_drift: run.norm_drift,
        leakage,
    })
}

/// Output of [`photons_resonance`].
#[derive(Debug, Clone)]
pub struct FockResonance {
    pub times: Vec<f64>,
    pub photons: Vec<f64>,
    pub norm_drift: f64,
    pub leakage: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;
    use std::f64::consts::PI;

    fn grid(t0: f64, tf: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| t0 + (tf - t0) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn ladder_commutator() {
        let dim = 8;
        let a = ladder(dim);
        let comm = &a * a.adjoint() - a.adjoint() * &a;
        // [a, a+] = 1 away from the truncation corner
        for n in 0..dim - 1 {
            assert_abs_diff_eq!(comm[(n, n)].re, 1.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(comm[(dim - 1, dim - 1)].re, -(dim as f64 - 1.0), epsilon = 1e-12);
    }

    #[test]
    fn static_hamiltonian_is_diagonal_oscillator() {
        let space = FockSpace::new(vec![12], vec![PI]).unwrap();
        let form = QuadraticForm::new(
            1,
            DMatrix::from_row_slice(2, 2, &[PI * PI, 0.0, 0.0, 1.0]),
        )
        .unwrap();
        let h = space.hamiltonian(&form).unwrap();
        // the top diagonal entry feels the truncation (a a^+ loses its
        // n + 1 term), all others are exact
        for n in 0..11 {
            assert_abs_diff_eq!(h[(n, n)].re, PI * (n as f64 + 0.5), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(h[(11, 11)].re, 11.0 * PI / 2.0, epsilon = 1e-11);
        for i in 0..12 {
            for j in 0..12 {
                if i != j {
                    assert_abs_diff_eq!(h[(i, j)].norm(), 0.0, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn hermiticity_of_mixed_terms() {
        // a coefficient matrix with x-p cross terms still builds Hermitian
        let space = FockSpace::new(vec![6, 6], vec![PI, 2.0 * PI]).unwrap();
        let form = hamiltonian_matrix(&HamiltonianSpec::TwoMode { beta: 0.9 }, 0.0).unwrap();
        let h = space.hamiltonian(&form).unwrap();
        let dev = (&h - h.adjoint())
            .iter()
            .fold(0.0f64, |acc, x| acc.max(x.norm()));
        assert!(dev < 1e-12);
    }

    #[test]
    fn vacuum_is_stationary_for_static_cavity() {
        let g = grid(0.0, 3.0, 13);
        let n = photons_uniform(0.0, &g, 10).unwrap();
        for v in n {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
        }
        let pairs = photons_two_mode(0.0, &g, 6).unwrap();
        for (n1, n2) in pairs {
            assert_abs_diff_eq!(n1, 0.0, epsilon = 1e-11);
            assert_abs_diff_eq!(n2, 0.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn uniform_motion_matches_closed_form() {
        let g = grid(0.0, 2.0, 9);
        let n = photons_uniform(0.5, &g, 30).unwrap();
        let expect = crate::analytic::photons_uniform(2.0, 0.5).unwrap();
        assert_abs_diff_eq!(*n.last().unwrap(), expect, epsilon = 1e-6);
    }

    #[test]
    fn evolve_const_preserves_norm() {
        let space = FockSpace::new(vec![10], vec![PI]).unwrap();
        let form =
            hamiltonian_matrix(&HamiltonianSpec::SingleModeUniform { beta: 0.9 }, 0.0).unwrap();
        let h = space.hamiltonian(&form).unwrap();
        let states = evolve_const(&h, &space.vacuum(), &grid(0.0, 4.0, 17)).unwrap();
        for psi in states {
            assert_abs_diff_eq!(psi.norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rk4_agrees_with_exact_diagonalization() {
        let space = FockSpace::new(vec![16], vec![PI]).unwrap();
        let form =
            hamiltonian_matrix(&HamiltonianSpec::SingleModeUniform { beta: 0.5 }, 0.0).unwrap();
        let h = space.hamiltonian(&form).unwrap();
        let g = grid(0.0, 1.0, 5);
        let exact = evolve_const(&h, &space.vacuum(), &g).unwrap();
        let rk4 = evolve(|_| Ok(h.clone()), &space.vacuum(), &g, 1e-3, 1e-8).unwrap();
        for (a, b) in exact.iter().zip(&rk4.states) {
            for (x, y) in a.iter().zip(b.iter()) {
                assert_abs_diff_eq!(x.re, y.re, epsilon = 1e-8);
                assert_abs_diff_eq!(x.im, y.im, epsilon = 1e-8);
            }
        }
        assert!(rk4.norm_drift < 1e-10);
    }

    #[test]
    fn resonance_growth_tracks_hyperbolic_law() {
        let g = grid(0.0, 3.0, 13);
        let run = photons_resonance(0.15, &g, 40, 5e-4).unwrap();
        for (&t, &n) in g.iter().zip(&run.photons).skip(4) {
            let expect = crate::analytic::photons_resonance(t, 0.15).unwrap();
            let rel = (n - expect).abs() / expect;
            assert!(rel < 0.1, "t = {t}: n = {n}, expect = {expect}, rel = {rel}");
        }
        assert!(run.norm_drift < 1e-8);
        assert!(run.leakage < 1e-6, "leakage = {:e}", run.leakage);
    }

    #[test]
    fn leakage_detects_small_truncation() {
        let g = grid(0.0, 3.0, 7);
        // with only a handful of levels the resonant run must show leakage
        let tight = photons_resonance(0.15, &g, 6, 5e-4).unwrap();
        let roomy = photons_resonance(0.15, &g, 40, 5e-4).unwrap();
        assert!(tight.leakage > roomy.leakage * 100.0);
    }

    #[test]
    fn expectation_rejects_complex_values() {
        let space = FockSpace::new(vec![4], vec![PI]).unwrap();
        let mut psi = space.vacuum();
        psi[1] = Complex64::new(0.5, 0.0);
        let psi = psi.normalize();
        let traj = FockTrajectory {
            times: vec![0.0],
            states: vec![psi],
            norm_drift: 0.0,
        };
        // x has a real expectation here, a (non-Hermitian) need not
        let a = space.annihilation(0);
        let x = space.position(0);
        assert!(traj.expectation(&x, 0).is_ok());
        assert!(traj.expectation(&a, 0).is_ok()); // <a> real for real amplitudes
        let skew = &a * Complex64::new(0.0, 1.0);
        assert!(traj.expectation(&skew, 0).is_err());
    }
}
