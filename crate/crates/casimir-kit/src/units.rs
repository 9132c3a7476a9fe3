//! Program units.
//!
//! Everything in this crate is nondimensionalized with
//!
//! * `c = 1` (speed of light),
//! * `q0 = 1` (initial cavity length),
//! * `hbar = 1`,
//! * `k_B = 1`.
//!
//! Times are measured in `q0/c`, frequencies in `c/q0`, and temperatures in
//! `hbar c / (k_B q0)`. In these units the static mode frequencies are exactly
//! `omega_k(0) = k * pi`.

use std::f64::consts::PI;

/// Speed of light in program units.
pub const C: f64 = 1.0;
/// Initial cavity length in program units.
pub const Q0: f64 = 1.0;
/// Reduced Planck constant in program units.
pub const HBAR: f64 = 1.0;
/// Boltzmann constant in program units.
pub const K_B: f64 = 1.0;

/// Static frequency of the k-th mode, `omega_k(0) = k pi` (modes are 1-based).
pub fn omega_static(k: usize) -> f64 {
    k as f64 * PI
}
