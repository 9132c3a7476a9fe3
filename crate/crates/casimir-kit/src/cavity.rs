//! Mirror trajectories, instantaneous mode frequencies, and the intermode
//! coupling coefficients shared by all other modules.
//!
//! ```
//! use casimir_kit::cavity::{coupling_g, omega_k, Trajectory};
//!
//! let traj = Trajectory::uniform(0.5);
//! // after t = 2 the cavity is twice as long and the mode has halved
//! assert_eq!(traj.q(2.0).unwrap(), 2.0);
//! assert!((omega_k(1, 2.0, &traj).unwrap() - std::f64::consts::PI / 2.0).abs() < 1e-12);
//! // couplings are antisymmetric
//! assert_eq!(coupling_g(1, 2).unwrap(), -coupling_g(2, 1).unwrap());
//! ```

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Mirror trajectory `q(t)` of the moving cavity wall (the other wall sits at
/// the origin). Lengths are in units of the initial cavity size, so
/// `q(0) = 1` for every variant.
#[derive(Debug, Clone, PartialEq)]
pub enum Trajectory {
    /// Uniform motion `q(t) = 1 + beta t` with `beta = v/c`.
    Uniform { beta: f64 },
    /// Small-amplitude oscillation `q(t) = 1 + eps sin(drive * t)`.
    ///
    /// The default drive frequency is `2 pi = 2 omega_1(0)`, the parametric
    /// resonance of the principal mode.
    Parametric { epsilon: f64, drive: f64 },
    /// Sampled trajectory, interpolated with a monotone cubic rule.
    Custom(MonotoneCubic),
}

impl Trajectory {
    pub fn uniform(beta: f64) -> Self {
        Trajectory::Uniform { beta }
    }

    /// Parametric trajectory at the principal-mode resonance drive `2 pi`.
    pub fn parametric(epsilon: f64) -> Result<Self> {
        Self::parametric_with_drive(epsilon, 2.0 * PI)
    }

    pub fn parametric_with_drive(epsilon: f64, drive: f64) -> Result<Self> {
        if !(0.0 < epsilon && epsilon < 1.0) {
            return Err(Error::Domain(format!(
                "parametric amplitude must satisfy 0 < eps < 1, got {epsilon}"
            )));
        }
        Ok(Trajectory::Parametric { epsilon, drive })
    }

    pub fn custom(ts: Vec<f64>, qs: Vec<f64>) -> Result<Self> {
        MonotoneCubic::new(ts, qs).map(Trajectory::Custom)
    }

    /// Cavity length `q(t)`. Errors if the mirrors collide (`q <= 0`).
    pub fn q(&self, t: f64) -> Result<f64> {
        let q = match self {
            Trajectory::Uniform { beta } => 1.0 + beta * t,
            Trajectory::Parametric { epsilon, drive } => 1.0 + epsilon * (drive * t).sin(),
            Trajectory::Custom(interp) => interp.value(t),
        };
        if q <= 0.0 {
            Err(Error::MirrorCollision { t, q })
        } else {
            Ok(q)
        }
    }

    /// Mirror velocity `dq/dt`.
    pub fn q_dot(&self, t: f64) -> f64 {
        match self {
            Trajectory::Uniform { beta } => *beta,
            Trajectory::Parametric { epsilon, drive } => epsilon * drive * (drive * t).cos(),
            Trajectory::Custom(interp) => interp.derivative(t),
        }
    }
}

/// Instantaneous frequency of the k-th mode, `omega_k(t) = k pi / q(t)`
/// (modes are 1-based).
pub fn omega_k(k: usize, t: f64, traj: &Trajectory) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidModeIndex { k });
    }
    Ok(k as f64 * PI / traj.q(t)?)
}

/// Antisymmetric intermode coupling `G_kj = (-1)^{k+j} 2kj / (j^2 - k^2)`.
///
/// Undefined for `k = j`; the diagonal term is excluded from the interaction
/// sum.
pub fn coupling_g(k: usize, j: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidModeIndex { k });
    }
    if j == 0 {
        return Err(Error::InvalidModeIndex { k: j });
    }
    if k == j {
        return Err(Error::EqualModeIndices { k });
    }
    let (kf, jf) = (k as f64, j as f64);
    let sign = if (k + j) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * 2.0 * kf * jf / (jf * jf - kf * kf))
}

/// Numerical tolerances shared across the solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Target local accuracy of the fixed-step ODE integrators.
    pub ode_tol: f64,
    /// Maximum allowed `||S^T J S - J||_max` along a propagation.
    pub symplectic_defect: f64,
    /// Fock basis cutoff.
    pub fock_cutoff: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            ode_tol: 1e-10,
            symplectic_defect: 1e-10,
            fock_cutoff: 40,
        }
    }
}

/// Full description of a simulation run: trajectory, mode count, time window,
/// and tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityConfig {
    pub trajectory: Trajectory,
    pub n_modes: usize,
    pub t0: f64,
    pub tf: f64,
    pub samples: usize,
    pub tolerances: Tolerances,
}

impl CavityConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_modes < 1 {
            return Err(Error::Config("n_modes must be >= 1".into()));
        }
        if !(self.tf > self.t0 && self.t0 >= 0.0) {
            return Err(Error::Config(format!(
                "time window must satisfy tf > t0 >= 0, got [{}, {}]",
                self.t0, self.tf
            )));
        }
        if self.samples < 2 {
            return Err(Error::Config("samples must be >= 2".into()));
        }
        let tol = &self.tolerances;
        if tol.ode_tol <= 0.0 || tol.symplectic_defect <= 0.0 || tol.fock_cutoff == 0 {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        Ok(())
    }

    /// Uniformly spaced sample times over `[t0, tf]`.
    pub fn time_grid(&self) -> Vec<f64> {
        let n = self.samples;
        let dt = (self.tf - self.t0) / (n - 1) as f64;
        (0..n).map(|i| self.t0 + i as f64 * dt).collect()
    }
}

impl Default for CavityConfig {
    fn default() -> Self {
        CavityConfig {
            trajectory: Trajectory::uniform(0.5),
            n_modes: 1,
            t0: 0.0,
            tf: 10.0,
            samples: 200,
            tolerances: Tolerances::default(),
        }
    }
}

/// Monotone (Fritsch-Carlson) cubic Hermite interpolant on a sampled table.
///
/// The limiter keeps the interpolant free of overshoot between samples, which
/// matters here because `q_dot/q` feeds the coupling terms of the effective
/// Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    ts: Vec<f64>,
    qs: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(ts: Vec<f64>, qs: Vec<f64>) -> Result<Self> {
        if ts.len() != qs.len() {
            return Err(Error::Dimension {
                expected: ts.len(),
                got: qs.len(),
            });
        }
        if ts.len() < 2 {
            return Err(Error::Config("custom trajectory needs >= 2 samples".into()));
        }
        if ts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("custom trajectory times must increase".into()));
        }
        let n = ts.len();
        let deltas: Vec<f64> = (0..n - 1)
            .map(|i| (qs[i + 1] - qs[i]) / (ts[i + 1] - ts[i]))
            .collect();
        let mut slopes = vec![0.0; n];
        slopes[0] = deltas[0];
        slopes[n - 1] = deltas[n - 2];
        for i in 1..n - 1 {
            if deltas[i - 1] * deltas[i] <= 0.0 {
                slopes[i] = 0.0;
            } else {
                slopes[i] = 0.5 * (deltas[i - 1] + deltas[i]);
            }
        }
        // Fritsch-Carlson limiter
        for i in 0..n - 1 {
            if deltas[i] == 0.0 {
                slopes[i] = 0.0;
                slopes[i + 1] = 0.0;
                continue;
            }
            let alpha = slopes[i] / deltas[i];
            let beta = slopes[i + 1] / deltas[i];
            let r = alpha * alpha + beta * beta;
            if r > 9.0 {
                let tau = 3.0 / r.sqrt();
                slopes[i] = tau * alpha * deltas[i];
                slopes[i + 1] = tau * beta * deltas[i];
            }
        }
        Ok(MonotoneCubic { ts, qs, slopes })
    }

    fn segment(&self, t: f64) -> usize {
        match self.ts.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(self.ts.len() - 2),
            Err(i) => i.clamp(1, self.ts.len() - 1) - 1,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let h = self.ts[i + 1] - self.ts[i];
        let s = (t - self.ts[i]) / h;
        let (h00, h10, h01, h11) = hermite_basis(s);
        h00 * self.qs[i]
            + h10 * h * self.slopes[i]
            + h01 * self.qs[i + 1]
            + h11 * h * self.slopes[i + 1]
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let h = self.ts[i + 1] - self.ts[i];
        let s = (t - self.ts[i]) / h;
        let d00 = (6.0 * s * s - 6.0 * s) / h;
        let d10 = 3.0 * s * s - 4.0 * s + 1.0;
        let d01 = -d00;
        let d11 = 3.0 * s * s - 2.0 * s;
        d00 * self.qs[i]
            + d10 * self.slopes[i]
            + d01 * self.qs[i + 1]
            + d11 * self.slopes[i + 1]
    }
}

fn hermite_basis(s: f64) -> (f64, f64, f64, f64) {
    let s2 = s * s;
    let s3 = s2 * s;
    (
        2.0 * s3 - 3.0 * s2 + 1.0,
        s3 - 2.0 * s2 + s,
        -2.0 * s3 + 3.0 * s2,
        s3 - s2,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_q() {
        assert_eq!(Trajectory::uniform(0.0).q(5.0).unwrap(), 1.0);
        assert_eq!(Trajectory::uniform(0.5).q(2.0).unwrap(), 2.0);
    }

    #[test]
    fn parametric_q_at_origin() {
        let traj = Trajectory::parametric(0.15).unwrap();
        assert_eq!(traj.q(0.0).unwrap(), 1.0);
    }

    #[test]
    fn parametric_rejects_bad_amplitude() {
        assert!(Trajectory::parametric(0.0).is_err());
        assert!(Trajectory::parametric(1.0).is_err());
    }

    #[test]
    fn mirror_collision_is_an_error() {
        let traj = Trajectory::uniform(-0.5);
        assert!(matches!(
            traj.q(3.0),
            Err(Error::MirrorCollision { .. })
        ));
    }

    #[test]
    fn omega_examples() {
        let traj = Trajectory::uniform(0.5);
        assert_abs_diff_eq!(omega_k(1, 0.0, &traj).unwrap(), PI, epsilon = 1e-14);
        assert_abs_diff_eq!(omega_k(2, 0.0, &traj).unwrap(), 2.0 * PI, epsilon = 1e-14);
        // q(2) = 2 for beta = 0.5
        assert_abs_diff_eq!(omega_k(1, 2.0, &traj).unwrap(), PI / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn coupling_examples() {
        assert_abs_diff_eq!(coupling_g(1, 2).unwrap(), -4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(coupling_g(2, 1).unwrap(), 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(coupling_g(1, 3).unwrap(), 3.0 / 4.0, epsilon = 1e-15);
        assert!(coupling_g(2, 2).is_err());
        assert!(coupling_g(0, 1).is_err());
    }

    #[test]
    fn coupling_antisymmetry() {
        for k in 1..=10usize {
            for j in 1..=10usize {
                if k == j {
                    continue;
                }
                let g = coupling_g(k, j).unwrap();
                let gt = coupling_g(j, k).unwrap();
                assert_eq!(g, -gt, "G_{k}{j} != -G_{j}{k}");
            }
        }
    }

    #[test]
    fn omega_q_product_is_k_pi() {
        let trajs = [
            Trajectory::uniform(0.7),
            Trajectory::parametric(0.3).unwrap(),
        ];
        for traj in &trajs {
            for i in 0..50 {
                let t = 0.2 * i as f64;
                for k in 1..=4 {
                    let w = omega_k(k, t, traj).unwrap();
                    let q = traj.q(t).unwrap();
                    assert_abs_diff_eq!(w * q, k as f64 * PI, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn uniform_trajectory_is_affine() {
        let traj = Trajectory::uniform(0.31);
        for i in 0..20 {
            let t1 = 0.5 * i as f64;
            let t2 = 0.37;
            let lhs = traj.q(t1 + t2).unwrap() - traj.q(t1).unwrap();
            assert_abs_diff_eq!(lhs, 0.31 * t2, epsilon = 1e-14);
        }
    }

    #[test]
    fn custom_interpolation_hits_samples() {
        let ts = vec![0.0, 1.0, 2.0, 3.0];
        let qs = vec![1.0, 1.2, 1.1, 1.4];
        let traj = Trajectory::custom(ts.clone(), qs.clone()).unwrap();
        for (t, q) in ts.iter().zip(&qs) {
            assert_abs_diff_eq!(traj.q(*t).unwrap(), *q, epsilon = 1e-14);
        }
    }

    #[test]
    fn custom_interpolation_is_monotone_on_monotone_data() {
        let ts: Vec<f64> = (0..11).map(|i| i as f64).collect();
        let qs: Vec<f64> = ts.iter().map(|t| 1.0 + 0.1 * t * t).collect();
        let traj = Trajectory::custom(ts, qs).unwrap();
        let mut prev = traj.q(0.0).unwrap();
        for i in 1..200 {
            let t = 10.0 * i as f64 / 199.0;
            let q = traj.q(t).unwrap();
            assert!(q >= prev - 1e-12, "overshoot at t = {t}");
            prev = q;
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = CavityConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.n_modes = 0;
        assert!(cfg.validate().is_err());
        cfg.n_modes = 1;
        cfg.tf = -1.0;
        assert!(cfg.validate().is_err());
    }
}
