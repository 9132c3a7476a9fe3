//! Time-dependent harmonic oscillator machinery.
//!
//! The oscillator `H = [p^2 + w^2(t) x^2]/2` admits the Lewis invariant
//!
//! ```text
//! I(t) = [rho p - rho_dot x]^2 / 2 + w0^2 x^2 / (2 rho^2),
//! ```
//!
//! where the scale function solves the Ermakov equation
//! `rho_dd + w^2(t) rho = w0^2 / rho^3`. Choosing the squeeze parameter of a
//! time-dependent frame change equal to `rho` factorizes the transformed
//! Hamiltonian into `rho^{-2}(t)` times a time-independent operator; choosing
//! it as a classical-oscillator solution maps the system to a free particle
//! instead.
//!
//! A quintic ramp satisfying the stationary boundary conditions
//! (`rho = 1, rho_dot = rho_dd = 0` at `t = 0`; `rho = sqrt(w0/wf)`,
//! `rho_dot = rho_dd = 0` at `t = tf`) inverse-engineers a frequency profile
//! that reaches the adiabatic energy ratio `wf/w0` in finite time — a
//! shortcut to adiabaticity.
//!
//! ```
//! use casimir_kit::ermakov::{design_sta, sta_energy_check};
//! use casimir_kit::symplectic::SymplecticPropagation;
//! use std::f64::consts::PI;
//!
//! let ramp = design_sta(PI, PI / 2.0, 5.0).unwrap();
//! let vacuum = SymplecticPropagation::vacuum_covariance(&[PI]);
//! let check = sta_energy_check(&ramp, &vacuum).unwrap();
//! assert!((check.energy_ratio - 0.5).abs() < 1e-3);
//! assert!(check.lewis_drift < 1e-6);
//! ```

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::symplectic::{propagate_fn, PropagationOptions, QuadraticForm, SymplecticPropagation};

/// Time-dependent frequency profile `w(t)` on a window `[t0, tf]`.
///
/// The profile is carried as `w^2(t)`: shortcut ramps may drive the squared
/// frequency negative (a transiently inverted potential), which the
/// propagators handle transparently.
#[derive(Clone)]
pub enum FrequencyProfile {
    Constant { omega: f64, t0: f64, tf: f64 },
    Sta(StaRamp),
    Func {
        omega_sq: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        t0: f64,
        tf: f64,
    },
}

impl std::fmt::Debug for FrequencyProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FrequencyProfile::Constant { omega, t0, tf } => f
                .debug_struct("Constant")
                .field("omega", omega)
                .field("t0", t0)
                .field("tf", tf)
                .finish(),
            FrequencyProfile::Sta(ramp) => f.debug_tuple("Sta").field(ramp).finish(),
            FrequencyProfile::Func { t0, tf, .. } => f
                .debug_struct("Func")
                .field("t0", t0)
                .field("tf", tf)
                .finish(),
        }
    }
}

impl FrequencyProfile {
    pub fn constant(omega: f64, t0: f64, tf: f64) -> Result<Self> {
        if omega <= 0.0 {
            return Err(Error::Domain(format!(
                "frequency must be positive, got {omega}"
            )));
        }
        Ok(FrequencyProfile::Constant { omega, t0, tf })
    }

    pub fn window(&self) -> (f64, f64) {
        match self {
            FrequencyProfile::Constant { t0, tf, .. } => (*t0, *tf),
            FrequencyProfile::Sta(ramp) => (0.0, ramp.t_f),
            FrequencyProfile::Func { t0, tf, .. } => (*t0, *tf),
        }
    }

    pub fn omega_sq(&self, t: f64) -> f64 {
        match self {
            FrequencyProfile::Constant { omega, .. } => omega * omega,
            FrequencyProfile::Sta(ramp) => ramp.omega_sq(t),
            FrequencyProfile::Func { omega_sq, .. } => omega_sq(t),
        }
    }

    /// `w(t0)`, the reference frequency used in the Ermakov equation.
    pub fn omega0(&self) -> f64 {
        let (t0, _) = self.window();
        self.omega_sq(t0).max(0.0).sqrt()
    }
}

/// Solution samples of the Ermakov equation on a grid.
#[derive(Debug, Clone)]
pub struct ErmakovSolution {
    pub times: Vec<f64>,
    pub rho: Vec<f64>,
    pub rho_dot: Vec<f64>,
    /// Reference frequency `w0 = w(t0)` entering the nonlinearity.
    pub omega0: f64,
    /// Max finite-difference residual of the Ermakov equation on the grid.
    pub residual: f64,
}

/// Fixed-step RK4 for `y' = f(t, y)` on `[t0, t1]`, returning `y(t1)`.
fn rk4_span<F>(f: &F, t0: f64, t1: f64, y0: [f64; 2], steps: usize) -> Result<[f64; 2]>
where
    F: Fn(f64, [f64; 2]) -> Result<[f64; 2]>,
{
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let k1 = f(t, y)?;
        let k2 = f(t + 0.5 * h, add(y, scale(k1, 0.5 * h)))?;
        let k3 = f(t + 0.5 * h, add(y, scale(k2, 0.5 * h)))?;
        let k4 = f(t + h, add(y, scale(k3, h)))?;
        y = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
    }
    Ok(y)
}

fn add(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

fn scale(a: [f64; 2], s: f64) -> [f64; 2] {
    [a[0] * s, a[1] * s]
}

fn solve_on_grid<F>(f: &F, grid: &[f64], y0: [f64; 2], base_step: f64) -> Result<Vec<[f64; 2]>>
where
    F: Fn(f64, [f64; 2]) -> Result<[f64; 2]>,
{
    let mut out = vec![y0];
    let mut y = y0;
    for w in grid.windows(2) {
        let steps = ((w[1] - w[0]) / base_step).ceil().max(1.0) as usize;
        y = rk4_span(f, w[0], w[1], y, steps)?;
        out.push(y);
    }
    Ok(out)
}

/// Integrate the Ermakov equation with `w0 = w(t0)` fixed by the profile.
///
/// Fixed-step RK4 with a step-halving (Richardson) convergence check; the
/// step never exceeds one fiftieth of the shortest oscillation period on the
/// grid. Fails if `rho` crosses zero or the halved-step answer does not
/// agree to `tol`.
pub fn solve_ermakov(
    profile: &FrequencyProfile,
    rho0: f64,
    rho_dot0: f64,
    grid: &[f64],
    tol: f64,
) -> Result<ErmakovSolution> {
    if rho0 <= 0.0 {
        return Err(Error::Domain(format!("rho0 must be positive, got {rho0}")));
    }
    if grid.len() < 2 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("grid must be strictly increasing".into()));
    }
    let omega0 = profile.omega0();
    if omega0 <= 0.0 {
        return Err(Error::Domain("profile must start at positive frequency".into()));
    }
    let rhs = |t: f64, y: [f64; 2]| -> Result<[f64; 2]> {
        let rho = y[0];
        if rho <= 0.0 {
            return Err(Error::ErmakovSingularity { t });
        }
        Ok([y[1], omega0 * omega0 / (rho * rho * rho) - profile.omega_sq(t) * rho])
    };

    // shortest period on the grid bounds the base step
    let omega_max = grid
        .iter()
        .map(|&t| profile.omega_sq(t).abs().sqrt())
        .fold(omega0, f64::max);
    let mut step = (2.0 * std::f64::consts::PI / omega_max) / 50.0;

    let mut coarse = solve_on_grid(&rhs, grid, [rho0, rho_dot0], step)?;
    let mut result = None;
    for _ in 0..16 {
        let fine = solve_on_grid(&rhs, grid, [rho0, rho_dot0], step / 2.0)?;
        let diff = coarse
            .iter()
            .zip(&fine)
            .map(|(a, b)| (a[0] - b[0]).abs())
            .fold(0.0f64, f64::max);
        if diff < tol {
            result = Some(fine);
            break;
        }
        coarse = fine;
        step /= 2.0;
    }
    let samples =
        result.ok_or_else(|| Error::Accuracy("ermakov step-halving did not converge".into()))?;

    let rho: Vec<f64> = samples.iter().map(|y| y[0]).collect();
    let rho_dot: Vec<f64> = samples.iter().map(|y| y[1]).collect();
    if let Some(i) = rho.iter().position(|&r| r <= 0.0) {
        return Err(Error::ErmakovSingularity { t: grid[i] });
    }

    // centered finite-difference residual of the second-order form
    let mut residual = 0.0f64;
    for i in 1..grid.len() - 1 {
        let h = grid[i + 1] - grid[i - 1];
        let dd = (rho_dot[i + 1] - rho_dot[i - 1]) / h;
        let target = omega0 * omega0 / rho[i].powi(3) - profile.omega_sq(grid[i]) * rho[i];
        residual = residual.max((dd - target).abs());
    }

    Ok(ErmakovSolution {
        times: grid.to_vec(),
        rho,
        rho_dot,
        omega0,
        residual,
    })
}

/// Quintic shortcut ramp between trap frequencies `w0` and `wf` over `[0, tf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaRamp {
    pub omega0: f64,
    pub omega_f: f64,
    pub t_f: f64,
    /// Final scale factor `rho(tf) = sqrt(w0/wf)`.
    pub rho_f: f64,
}

/// Design the minimal-degree (quintic) scale function meeting the six
/// stationary boundary conditions, together with the frequency profile it
/// inverse-engineers, `w^2(t) = w0^2/rho^4 - rho_dd/rho`.
pub fn design_sta(omega0: f64, omega_f: f64, t_f: f64) -> Result<StaRamp> {
    if omega0 <= 0.0 || omega_f <= 0.0 {
        return Err(Error::Domain(
            "ramp endpoint frequencies must be positive".into(),
        ));
    }
    if t_f <= 0.0 {
        return Err(Error::Domain(format!("ramp duration must be > 0, got {t_f}")));
    }
    Ok(StaRamp {
        omega0,
        omega_f,
        t_f,
        rho_f: (omega0 / omega_f).sqrt(),
    })
}

impl StaRamp {
    pub fn rho(&self, t: f64) -> f64 {
        let s = (t / self.t_f).clamp(0.0, 1.0);
        let poly = 10.0 * s.powi(3) - 15.0 * s.powi(4) + 6.0 * s.powi(5);
        1.0 + (self.rho_f - 1.0) * poly
    }

    pub fn rho_dot(&self, t: f64) -> f64 {
        let s = t / self.t_f;
        if !(0.0..=1.0).contains(&s) {
            return 0.0;
        }
        let dpoly = 30.0 * s.powi(2) - 60.0 * s.powi(3) + 30.0 * s.powi(4);
        (self.rho_f - 1.0) * dpoly / self.t_f
    }

    pub fn rho_ddot(&self, t: f64) -> f64 {
        let s = t / self.t_f;
        if !(0.0..=1.0).contains(&s) {
            return 0.0;
        }
        let ddpoly = 60.0 * s - 180.0 * s.powi(2) + 120.0 * s.powi(3);
        (self.rho_f - 1.0) * ddpoly / (self.t_f * self.t_f)
    }

    /// Inverse-engineered squared frequency; may be negative during
    /// aggressive ramps (reported, not rejected).
    pub fn omega_sq(&self, t: f64) -> f64 {
        let rho = self.rho(t);
        self.omega0 * self.omega0 / rho.powi(4) - self.rho_ddot(t) / rho
    }

    pub fn profile(&self) -> FrequencyProfile {
        FrequencyProfile::Sta(*self)
    }

    /// Intervals (sampled at `n_scan` points) where `w^2(t) < 0`.
    pub fn inverted_intervals(&self, n_scan: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut start: Option<f64> = None;
        for i in 0..=n_scan {
            let t = self.t_f * i as f64 / n_scan as f64;
            if self.omega_sq(t) < 0.0 {
                start.get_or_insert(t);
            } else if let Some(s) = start.take() {
                out.push((s, t));
            }
        }
        if let Some(s) = start {
            out.push((s, self.t_f));
        }
        out
    }
}

/// Coefficient matrix of the Lewis invariant in `(x, p)`:
///
/// ```text
/// I = (1/2) z^T M z,
/// M = [[rho_dot^2 + w0^2/rho^2, -rho rho_dot], [-rho rho_dot, rho^2]].
/// ```
pub fn lewis_invariant_form(rho: f64, rho_dot: f64, omega0: f64) -> Result<QuadraticForm> {
    if rho <= 0.0 {
        return Err(Error::Domain(format!("rho must be positive, got {rho}")));
    }
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            rho_dot * rho_dot + omega0 * omega0 / (rho * rho),
            -rho * rho_dot,
            -rho * rho_dot,
            rho * rho,
        ],
    );
    QuadraticForm::new(1, m)
}

/// Which equation the squeeze parameter `sigma(t)` satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaRule {
    /// Ermakov equation: the transformed Hamiltonian factorizes into
    /// `rho^{-2}(t) (p^2 + w0^2 x^2)/2`.
    Ermakov,
    /// Classical oscillator equation `sigma_dd + w^2 sigma = 0`: the
    /// transformed Hamiltonian is the free particle `p^2 / (2 sigma^2)`.
    Classical,
}

/// Coefficient matrix of the transformed Hamiltonian
/// `H = p^2/(2 sigma^2) + [w^2 sigma^2 + sigma_dd sigma] x^2 / 2`
/// at time `t`, with `sigma` integrated from the window start under `rule`
/// (stationary initial data `sigma = 1`, `sigma_dot = 0`).
pub fn transform_hamiltonian(
    profile: &FrequencyProfile,
    rule: SigmaRule,
    t: f64,
) -> Result<QuadraticForm> {
    let (t0, _) = self_window_check(profile, t)?;
    let omega0 = profile.omega0();
    let rhs = |tt: f64, y: [f64; 2]| -> Result<[f64; 2]> {
        let sdd = match rule {
            SigmaRule::Ermakov => {
                if y[0] <= 0.0 {
                    return Err(Error::ErmakovSingularity { t: tt });
                }
                omega0 * omega0 / y[0].powi(3) - profile.omega_sq(tt) * y[0]
            }
            SigmaRule::Classical => -profile.omega_sq(tt) * y[0],
        };
        Ok([y[1], sdd])
    };
    let sigma = if t == t0 {
        [1.0, 0.0]
    } else {
        let omega_ref = omega0.max(profile.omega_sq(t).abs().sqrt());
        let steps = (((t - t0) * omega_ref * 50.0).ceil() as usize).max(200);
        rk4_span(&rhs, t0, t, [1.0, 0.0], steps)?
    };
    let s = sigma[0];
    if s.abs() < 1e-9 {
        return Err(Error::Domain(format!("sigma(t) singular at t = {t}")));
    }
    let sdd = match rule {
        SigmaRule::Ermakov => omega0 * omega0 / s.powi(3) - profile.omega_sq(t) * s,
        SigmaRule::Classical => -profile.omega_sq(t) * s,
    };
    let x2 = profile.omega_sq(t) * s * s + sdd * s;
    let m = DMatrix::from_row_slice(2, 2, &[x2, 0.0, 0.0, 1.0 / (s * s)]);
    QuadraticForm::new(1, m)
}

fn self_window_check(profile: &FrequencyProfile, t: f64) -> Result<(f64, f64)> {
    let (t0, tf) = profile.window();
    if t < t0 || t > tf {
        return Err(Error::Domain(format!(
            "t = {t} outside profile window [{t0}, {tf}]"
        )));
    }
    Ok((t0, tf))
}

/// Outcome of evolving a Gaussian state through a shortcut ramp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaCheck {
    /// `<H(tf)> / <H(t0)>`; equals `wf/w0` for a valid shortcut.
    pub energy_ratio: f64,
    /// `<x^2>(tf) / <x^2>(t0)`; equals `w0/wf`.
    pub variance_ratio: f64,
    /// Max drift of the Lewis-invariant expectation along the ramp.
    pub lewis_drift: f64,
}

/// Evolve an initial Gaussian covariance through the ramp's induced
/// frequency profile and report the shortcut diagnostics.
pub fn sta_energy_check(ramp: &StaRamp, covariance: &DMatrix<f64>) -> Result<StaCheck> {
    let samples = 401;
    let grid: Vec<f64> = (0..samples)
        .map(|i| ramp.t_f * i as f64 / (samples - 1) as f64)
        .collect();
    let opts = PropagationOptions {
        defect_tol: 1e-8,
        ..Default::default()
    };
    let prop = propagate_fn(
        1,
        |t| {
            Ok(DMatrix::from_row_slice(
                2,
                2,
                &[ramp.omega_sq(t), 0.0, 0.0, 1.0],
            ))
        },
        &grid,
        &opts,
    )?;
    let covs = prop.evolve_covariance(covariance);

    let h_of = |t: f64, v: &DMatrix<f64>| 0.5 * (ramp.omega_sq(t) * v[(0, 0)] + v[(1, 1)]);
    let energy_ratio = h_of(ramp.t_f, covs.last().unwrap()) / h_of(0.0, &covs[0]);
    let variance_ratio = covs.last().unwrap()[(0, 0)] / covs[0][(0, 0)];

    let lewis_drift = lewis_expectation_drift(ramp, &prop, &covs)?;

    Ok(StaCheck {
        energy_ratio,
        variance_ratio,
        lewis_drift,
    })
}

fn lewis_expectation_drift(
    ramp: &StaRamp,
    prop: &SymplecticPropagation,
    covs: &[DMatrix<f64>],
) -> Result<f64> {
    let mut drift = 0.0f64;
    let mut reference = None;
    for (&t, v) in prop.times().iter().zip(covs) {
        let form = lewis_invariant_form(ramp.rho(t), ramp.rho_dot(t), ramp.omega0)?;
        let val = form.energy(v);
        let r = *reference.get_or_insert(val);
        drift = drift.max((val - r).abs());
    }
    Ok(drift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn grid(t0: f64, tf: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| t0 + (tf - t0) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn constant_frequency_static_solution() {
        let profile = FrequencyProfile::constant(PI, 0.0, 5.0).unwrap();
        let sol = solve_ermakov(&profile, 1.0, 0.0, &grid(0.0, 5.0, 51), 1e-10).unwrap();
        for r in &sol.rho {
            assert_abs_diff_eq!(*r, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn constant_frequency_breathing_solution() {
        // rho0 = 2, rho_dot0 = 0 gives the periodic breathing solution
        // rho^2(t) = rho0^2 cos^2(w0 t) + sin^2(w0 t)/rho0^2
        // (the A B = 1 case of the general rho^2 = A cos^2 + B sin^2 family)
        let w0 = PI;
        let profile = FrequencyProfile::constant(w0, 0.0, 4.0).unwrap();
        let g = grid(0.0, 4.0, 81);
        let sol = solve_ermakov(&profile, 2.0, 0.0, &g, 1e-10).unwrap();
        for (&t, r) in g.iter().zip(&sol.rho) {
            let c = (w0 * t).cos();
            let s = (w0 * t).sin();
            let exact = (4.0 * c * c + s * s / 4.0).sqrt();
            assert_abs_diff_eq!(*r, exact, epsilon = 1e-7);
            assert!(*r > 0.0);
        }
    }

    #[test]
    fn sta_boundary_conditions() {
        let ramp = design_sta(PI, PI / 2.0, 5.0).unwrap();
        assert_abs_diff_eq!(ramp.rho(0.0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ramp.rho_dot(0.0), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ramp.rho_ddot(0.0), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ramp.rho(5.0), 2.0f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(ramp.rho_dot(5.0), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ramp.rho_ddot(5.0), 0.0, epsilon = 1e-12);

        let flat = design_sta(PI, PI, 3.0).unwrap();
        for i in 0..=10 {
            assert_abs_diff_eq!(flat.rho(0.3 * i as f64), 1.0, epsilon = 1e-13);
        }

        let compress = design_sta(PI, 2.0 * PI, 3.0).unwrap();
        assert_abs_diff_eq!(compress.rho(3.0), 1.0 / 2.0f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn sta_round_trip() {
        let ramp = design_sta(PI, PI / 2.0, 5.0).unwrap();
        let g = grid(0.0, 5.0, 201);
        let sol = solve_ermakov(&ramp.profile(), 1.0, 0.0, &g, 1e-10).unwrap();
        for (&t, r) in g.iter().zip(&sol.rho) {
            assert_abs_diff_eq!(*r, ramp.rho(t), epsilon = 1e-8);
        }
    }

    #[test]
    fn aggressive_ramp_reports_inverted_windows() {
        let ramp = design_sta(PI, PI / 2.0, 0.5).unwrap();
        assert!(!ramp.inverted_intervals(1000).is_empty());
        // the gentle ramp stays regular
        let gentle = design_sta(PI, PI / 2.0, 5.0).unwrap();
        assert!(gentle.inverted_intervals(1000).is_empty());
    }

    #[test]
    fn lewis_form_examples() {
        let form = lewis_invariant_form(1.0, 0.0, PI).unwrap();
        let m = form.matrix();
        assert_abs_diff_eq!(m[(0, 0)], PI * PI, epsilon = 1e-14);
        assert_abs_diff_eq!(m[(1, 1)], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m[(0, 1)], 0.0, epsilon = 1e-14);

        let form = lewis_invariant_form(2.0, 0.0, PI).unwrap();
        let m = form.matrix();
        assert_abs_diff_eq!(m[(0, 0)], PI * PI / 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m[(1, 1)], 4.0, epsilon = 1e-14);

        // symmetric positive-definite for generic arguments
        let form = lewis_invariant_form(1.3, -0.7, PI).unwrap();
        let m = form.matrix();
        assert!(m[(0, 0)] > 0.0 && m.determinant() > 0.0);
        assert!(lewis_invariant_form(-1.0, 0.0, PI).is_err());
    }

    #[test]
    fn ermakov_rule_factorizes() {
        let ramp = design_sta(PI, PI / 2.0, 5.0).unwrap();
        let profile = ramp.profile();
        for &t in &[0.0, 1.3, 2.5, 4.0, 5.0] {
            let form = transform_hamiltonian(&profile, SigmaRule::Ermakov, t).unwrap();
            let m = form.matrix();
            // proportional to diag(w0^2, 1) with factor rho^{-2}
            let rho_sq = 1.0 / m[(1, 1)];
            assert_abs_diff_eq!(m[(0, 0)] * rho_sq, PI * PI, epsilon = 1e-8);
            assert_abs_diff_eq!(m[(0, 1)], 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(rho_sq.sqrt(), ramp.rho(t), epsilon = 1e-6);
        }
    }

    #[test]
    fn ermakov_rule_constant_frequency() {
        let profile = FrequencyProfile::constant(PI, 0.0, 3.0).unwrap();
        for &t in &[0.0, 0.8, 2.9] {
            let m = transform_hamiltonian(&profile, SigmaRule::Ermakov, t)
                .unwrap()
                .matrix()
                .clone();
            assert_abs_diff_eq!(m[(0, 0)], PI * PI, epsilon = 1e-8);
            assert_abs_diff_eq!(m[(1, 1)], 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn classical_rule_gives_free_particle() {
        let ramp = design_sta(PI, PI / 2.0, 5.0).unwrap();
        let profile = ramp.profile();
        for &t in &[0.0, 0.2, 0.4] {
            let m = transform_hamiltonian(&profile, SigmaRule::Classical, t)
                .unwrap()
                .matrix()
                .clone();
            assert_abs_diff_eq!(m[(0, 0)], 0.0, epsilon = 1e-10);
            assert_abs_diff_eq!(m[(0, 1)], 0.0, epsilon = 1e-14);
            assert!(m[(1, 1)] > 0.0);
        }
        // classical sigma crosses zero near the quarter period
        let profile = FrequencyProfile::constant(PI, 0.0, 3.0).unwrap();
        assert!(transform_hamiltonian(&profile, SigmaRule::Classical, 0.5).is_err());
    }

    #[test]
    fn factorized_forms_commute() {
        // J M(t1) and J M(t2) are scalar multiples under the Ermakov rule
        let ramp = design_sta(PI, PI / 2.0, 5.0).unwrap();
        let profile = ramp.profile();
        let j = crate::symplectic::j_matrix(1);
        let k1 = &j * transform_hamiltonian(&profile, SigmaRule::Ermakov, 1.0)
            .unwrap()
            .matrix()
            .clone();
        let k2 = &j * transform_hamiltonian(&profile, SigmaRule::Ermakov, 3.5)
            .unwrap()
            .matrix()
            .clone();
        let comm = &k1 * &k2 - &k2 * &k1;
        for x in comm.iter() {
            assert_abs_diff_eq!(*x, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn sta_stroke_expansion() {
        let ramp = design_sta(PI, PI / 2.0, 5.0).unwrap();
        let v0 = SymplecticPropagation::vacuum_covariance(&[PI]);
        let check = sta_energy_check(&ramp, &v0).unwrap();
        assert_abs_diff_eq!(check.energy_ratio, 0.5, epsilon = 1e-3);
        assert_abs_diff_eq!(check.variance_ratio, 2.0, epsilon = 1e-2);
        assert!(check.lewis_drift < 1e-6, "drift = {:e}", check.lewis_drift);
    }

    #[test]
    fn sta_stroke_flat_and_compression() {
        let flat = design_sta(PI, PI, 2.0).unwrap();
        let v0 = SymplecticPropagation::vacuum_covariance(&[PI]);
        let check = sta_energy_check(&flat, &v0).unwrap();
        assert_abs_diff_eq!(check.energy_ratio, 1.0, epsilon = 1e-6);

        let compress = design_sta(PI, 2.0 * PI, 3.0).unwrap();
        let check = sta_energy_check(&compress, &v0).unwrap();
        assert_abs_diff_eq!(check.energy_ratio, 2.0, epsilon = 1e-3);
        assert_abs_diff_eq!(check.variance_ratio, 0.5, epsilon = 1e-2);
    }
}
