//! Closed-form results for the uniformly moving mirror.
//!
//! With one mirror fixed and the other moving at constant velocity
//! `beta = v/c`, the single-mode dynamics can be solved exactly. This module
//! collects every closed form of that solution: the velocity-dependent
//! eigenfrequency, the Heisenberg coefficients tau_jk, the vacuum photon
//! number, its Planck-factor rewriting with an effective temperature, the
//! parametric-resonance growth law, and the Unruh temperature it is
//! contrasted with.
//!
//! All quantities are in program units (`c = q0 = hbar = k_B = 1`), so
//! `omega_1(0) = pi`.
//!
//! ```
//! use casimir_kit::analytic::{photons_uniform, thermal_descriptor, tau_coeffs, photons_from_tau};
//!
//! let n = photons_uniform(2.0, 0.5).unwrap();
//! // same number through the monodromy coefficients
//! let tau = tau_coeffs(2.0, 0.5).unwrap();
//! assert!((photons_from_tau(&tau) - n).abs() < 1e-12);
//! // oscillation ceiling = Planck factor of the effective temperature
//! let planck = thermal_descriptor(0.5).unwrap().planck_factor;
//! assert!(n <= planck);
//! ```

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::units::omega_static;

/// Coefficients of the Heisenberg-picture flow of the principal mode,
/// `x(t) = t11 x + t12 p`, `p(t) = t21 x + t22 p`.
///
/// The matrix is a linear canonical transformation: its determinant is 1 for
/// every `(t, beta)`, and it reduces to the identity at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauMatrix {
    pub t: f64,
    pub beta: f64,
    pub t11: f64,
    pub t12: f64,
    pub t21: f64,
    pub t22: f64,
}

impl TauMatrix {
    pub fn determinant(&self) -> f64 {
        self.t11 * self.t22 - self.t12 * self.t21
    }
}

/// Velocity-dependent effective temperature and the Planck factor it induces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalDescriptor {
    pub beta: f64,
    /// Effective temperature `T_v = omega_1(0) / (2 ln(2 pi / beta))`.
    pub temperature: f64,
    /// Planck factor `n_v = 1 / ((2 pi / beta)^2 - 1)`.
    pub planck_factor: f64,
}

/// Eigenfrequency of the k-th mode seen by the uniformly moving mirror,
/// `Omega_k(beta) = k pi sqrt(1 - (beta / 2 k pi)^2)`.
pub fn eigenfrequency(k: usize, beta: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidModeIndex { k });
    }
    let wk = omega_static(k);
    let ratio = beta / (2.0 * wk);
    if ratio.abs() >= 1.0 {
        return Err(Error::Domain(format!(
            "eigenfrequency requires |beta| < 2 k pi, got beta = {beta} for k = {k}"
        )));
    }
    Ok(wk * (1.0 - ratio * ratio).sqrt())
}

/// Logarithmic time `f(t) = ln(1 + beta t) / beta`, with the continuous
/// limit `f(t) = t` at `beta = 0`.
pub fn log_time(t: f64, beta: f64) -> Result<f64> {
    if beta == 0.0 {
        return Ok(t);
    }
    let q = 1.0 + beta * t;
    if q <= 0.0 {
        return Err(Error::MirrorCollision { t, q });
    }
    Ok(q.ln() / beta)
}

/// The four Heisenberg coefficients of the principal mode at time `t`.
pub fn tau_coeffs(t: f64, beta: f64) -> Result<TauMatrix> {
    let omega = eigenfrequency(1, beta)?;
    let phase = omega * log_time(t, beta)?;
    let (s, c) = phase.sin_cos();
    Ok(TauMatrix {
        t,
        beta,
        t11: c - beta * s / (2.0 * omega),
        t12: s / omega,
        t21: -(omega + beta * beta / (4.0 * omega)) * s,
        t22: c + beta * s / (2.0 * omega),
    })
}

/// Average photon number of the principal mode computed from its Heisenberg
/// coefficients, counted against the static-cavity ladder at `omega_1(0) = pi`.
pub fn photons_from_tau(tau: &TauMatrix) -> f64 {
    let w = omega_static(1);
    0.25 * (tau.t11 * tau.t11 + tau.t21 * tau.t21 / (w * w))
        + 0.25 * (tau.t22 * tau.t22 + tau.t12 * tau.t12 * w * w)
        + 0.5 * (tau.t12 * tau.t21 - tau.t11 * tau.t22)
}

fn check_uniform_domain(beta: f64) -> Result<()> {
    if beta.abs() >= 2.0 * PI {
        return Err(Error::Domain(format!(
            "closed-form photon number requires |beta| < 2 pi, got {beta}"
        )));
    }
    Ok(())
}

/// Closed-form vacuum photon number for uniform mirror motion:
///
/// ```text
/// n(t) = [(2 pi / beta)^2 - 1]^{-1} sin^2[ ln(1 + beta t) sqrt((2 pi / beta)^2 - 1) / 2 ]
/// ```
///
/// `beta = 0` is handled as the analytic limit (a static cavity produces no
/// photons). Physical runs keep `|beta| < 1`; the expression stays real up to
/// `|beta| < 2 pi`.
pub fn photons_uniform(t: f64, beta: f64) -> Result<f64> {
    check_uniform_domain(beta)?;
    if beta == 0.0 {
        return Ok(0.0);
    }
    let q = 1.0 + beta * t;
    if q <= 0.0 {
        return Err(Error::MirrorCollision { t, q });
    }
    let a = (2.0 * PI / beta).powi(2) - 1.0;
    let s = (0.5 * q.ln() * a.sqrt()).sin();
    Ok(s * s / a)
}

/// Effective temperature `T_v` and Planck factor `n_v` for uniform motion.
///
/// Only defined for `0 < beta < 2 pi`; the `beta -> 0` limit of both
/// quantities is zero.
pub fn thermal_descriptor(beta: f64) -> Result<ThermalDescriptor> {
    if beta <= 0.0 {
        return Err(Error::Domain(format!(
            "effective temperature requires beta > 0, got {beta}"
        )));
    }
    check_uniform_domain(beta)?;
    let temperature = omega_static(1) / (2.0 * (2.0 * PI / beta).ln());
    let planck_factor = 1.0 / ((2.0 * PI / beta).powi(2) - 1.0);
    Ok(ThermalDescriptor {
        beta,
        temperature,
        planck_factor,
    })
}

/// The photon number rewritten through the Planck factor,
/// `n(t) = n_v sin^2[ ln(1 + beta t) / (2 sqrt(n_v)) ]`.
///
/// Algebraically identical to [`photons_uniform`]; both are exposed so the
/// identity can be asserted numerically.
pub fn photons_planck_form(t: f64, beta: f64) -> Result<f64> {
    check_uniform_domain(beta)?;
    if beta == 0.0 {
        return Ok(0.0);
    }
    let q = 1.0 + beta * t;
    if q <= 0.0 {
        return Err(Error::MirrorCollision { t, q });
    }
    let nv = thermal_descriptor(beta.abs())?.planck_factor;
    let s = (0.5 * q.ln() / nv.sqrt()).sin();
    Ok(nv * s * s)
}

/// Exponential photon growth under parametric resonance (mirror oscillating
/// at `2 omega_1(0)`): `n(t) = sinh^2(eps pi t / 2)`.
pub fn photons_resonance(t: f64, epsilon: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain(format!("resonance law needs t >= 0, got {t}")));
    }
    if !(0.0 < epsilon && epsilon < 1.0) {
        return Err(Error::Domain(format!(
            "resonance law needs 0 < eps < 1, got {epsilon}"
        )));
    }
    let s = (0.5 * epsilon * PI * t).sinh();
    Ok(s * s)
}

/// Unruh temperature `T_U = a / (2 pi)` of an observer with constant proper
/// acceleration `a`, for comparison with the velocity-dependent `T_v`.
pub fn unruh_temperature(accel: f64) -> Result<f64> {
    if accel < 0.0 {
        return Err(Error::Domain(format!(
            "proper acceleration must be >= 0, got {accel}"
        )));
    }
    Ok(accel / (2.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn eigenfrequency_limits() {
        assert_abs_diff_eq!(eigenfrequency(1, 0.0).unwrap(), PI, epsilon = 1e-15);
        // exact value sqrt(1 - 1/(4 pi^2))
        let exact = (1.0 - 1.0 / (4.0 * PI * PI)).sqrt();
        assert_abs_diff_eq!(
            eigenfrequency(1, 1.0).unwrap() / PI,
            exact,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(exact, 0.9872536169036887, epsilon = 1e-12);
        // k = 2 flattens: sqrt(1 - 1/(16 pi^2))
        let exact2 = (1.0 - 1.0 / (16.0 * PI * PI)).sqrt();
        assert_abs_diff_eq!(
            eigenfrequency(2, 1.0).unwrap() / (2.0 * PI),
            exact2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(exact2, 0.99683, epsilon = 5e-6);
        assert!(eigenfrequency(1, 2.0 * PI).is_err());
        assert!(eigenfrequency(0, 0.1).is_err());
    }

    #[test]
    fn log_time_examples() {
        assert_eq!(log_time(7.0, 0.0).unwrap(), 7.0);
        assert_abs_diff_eq!(
            log_time(2.0, 0.5).unwrap(),
            2.0 * std::f64::consts::LN_2,
            epsilon = 1e-14
        );
        assert_eq!(log_time(0.0, 0.9).unwrap(), 0.0);
        assert!(log_time(3.0, -0.5).is_err());
    }

    #[test]
    fn tau_identity_at_t0() {
        let tau = tau_coeffs(0.0, 0.7).unwrap();
        assert_abs_diff_eq!(tau.t11, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(tau.t12, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(tau.t21, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(tau.t22, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn tau_static_is_a_rotation() {
        let t = 0.37;
        let tau = tau_coeffs(t, 0.0).unwrap();
        assert_abs_diff_eq!(tau.t11, (PI * t).cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(tau.t12, (PI * t).sin() / PI, epsilon = 1e-14);
        assert_abs_diff_eq!(tau.t21, -PI * (PI * t).sin(), epsilon = 1e-14);
        assert_abs_diff_eq!(tau.t22, (PI * t).cos(), epsilon = 1e-14);
    }

    #[test]
    fn tau_determinant_is_one() {
        for &beta in &[0.0, 0.1, 0.5, 0.9, -0.3] {
            for i in 0..40 {
                let t = 0.25 * i as f64;
                if 1.0 + beta * t <= 0.0 {
                    continue;
                }
                let tau = tau_coeffs(t, beta).unwrap();
                assert_abs_diff_eq!(tau.determinant(), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn vacuum_stays_vacuum_for_rotations() {
        let id = tau_coeffs(0.0, 0.4).unwrap();
        assert_abs_diff_eq!(photons_from_tau(&id), 0.0, epsilon = 1e-14);
        for i in 0..20 {
            let tau = tau_coeffs(0.3 * i as f64, 0.0).unwrap();
            assert_abs_diff_eq!(photons_from_tau(&tau), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn photons_uniform_frozen_value() {
        // direct evaluation of the closed form at (t, beta) = (2, 0.5)
        assert_abs_diff_eq!(
            photons_uniform(2.0, 0.5).unwrap(),
            5.535145801821205e-3,
            epsilon = 1e-15
        );
        assert_eq!(photons_uniform(13.0, 0.0).unwrap(), 0.0);
        assert_eq!(photons_uniform(0.0, 0.9).unwrap(), 0.0);
    }

    #[test]
    fn tau_route_matches_closed_form() {
        for &beta in &[0.1, 0.3, 0.5, 0.9] {
            for i in 0..=50 {
                let t = 0.4 * i as f64;
                let via_tau = photons_from_tau(&tau_coeffs(t, beta).unwrap());
                let direct = photons_uniform(t, beta).unwrap();
                assert_abs_diff_eq!(via_tau, direct, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn thermal_descriptor_examples() {
        let th = thermal_descriptor(1.0).unwrap();
        assert_abs_diff_eq!(th.planck_factor, 1.0 / (4.0 * PI * PI - 1.0), epsilon = 1e-15);
        assert_abs_diff_eq!(th.planck_factor, 0.02599, epsilon = 1e-5);
        assert_abs_diff_eq!(th.temperature, PI / (2.0 * (2.0 * PI).ln()), epsilon = 1e-15);
        assert_abs_diff_eq!(th.temperature, 0.8546797582407165, epsilon = 1e-12);
        // consistency with the Planck law at omega_1(0) = pi
        let recomputed = 1.0 / ((PI / th.temperature).exp() - 1.0);
        assert_abs_diff_eq!(th.planck_factor, recomputed, epsilon = 1e-12);
        assert!(thermal_descriptor(0.0).is_err());
        assert!(thermal_descriptor(-0.5).is_err());
    }

    #[test]
    fn thermal_descriptor_vanishes_at_small_beta() {
        let th = thermal_descriptor(1e-6).unwrap();
        assert!(th.temperature < 0.11);
        assert!(th.planck_factor < 1e-12);
    }

    #[test]
    fn planck_form_identity() {
        for &beta in &[0.1, 0.2, 0.5, 0.9, 0.99] {
            for i in 0..=100 {
                let t = 0.2 * i as f64;
                let a = photons_uniform(t, beta).unwrap();
                let b = photons_planck_form(t, beta).unwrap();
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            }
        }
        assert_eq!(photons_planck_form(0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn amplitude_bound() {
        for &beta in &[0.3, 0.6, 1.0] {
            let nv = thermal_descriptor(beta).unwrap().planck_factor;
            for i in 0..=400 {
                let t = 0.05 * i as f64;
                assert!(photons_uniform(t, beta).unwrap() <= nv + 1e-15);
            }
        }
    }

    #[test]
    fn photons_vanish_as_beta_to_zero() {
        for i in 0..=40 {
            let t = 0.5 * i as f64;
            assert!(photons_uniform(t, 1e-6).unwrap() < 1e-10);
        }
    }

    #[test]
    fn resonance_examples() {
        assert_eq!(photons_resonance(0.0, 0.15).unwrap(), 0.0);
        assert_abs_diff_eq!(
            photons_resonance(4.0, 0.15).unwrap(),
            (0.3 * PI).sinh().powi(2),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            photons_resonance(4.0, 0.15).unwrap(),
            1.184474441168843,
            epsilon = 1e-12
        );
        // monotone increasing envelope
        let mut prev = -1.0;
        for i in 0..=100 {
            let n = photons_resonance(0.1 * i as f64, 0.15).unwrap();
            assert!(n >= prev);
            prev = n;
        }
        assert!(photons_resonance(-1.0, 0.15).is_err());
        assert!(photons_resonance(1.0, 1.5).is_err());
    }

    #[test]
    fn unruh_examples() {
        assert_eq!(unruh_temperature(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(unruh_temperature(2.0 * PI).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            unruh_temperature(1.0).unwrap(),
            0.15915494309189535,
            epsilon = 1e-15
        );
        assert!(unruh_temperature(-1.0).is_err());
    }
}
