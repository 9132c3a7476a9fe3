//! Numerical toolkit for photon production in a cavity with a moving mirror.
//!
//! A one-dimensional cavity with one fixed and one moving mirror supports
//! field modes whose frequencies and couplings follow the mirror trajectory.
//! For uniform mirror motion the dynamics can be solved in closed form; this
//! crate implements that solution and cross-validates it three independent
//! ways:
//!
//! * [`analytic`] — closed-form photon number, effective temperature, and
//!   eigenfrequencies for the uniformly moving mirror;
//! * [`symplectic`] — exact linear-canonical (Gaussian) propagation of every
//!   quadratic Hamiltonian in the problem;
//! * [`fock`] — a brute-force truncated Fock-space integrator used as an
//!   independent oracle.
//!
//! The supporting modules are [`cavity`] (trajectories, mode frequencies,
//! intermode couplings), [`ermakov`] (time-dependent oscillator machinery and
//! shortcut-to-adiabaticity ramp design), [`twomode`] (diagonalization of the
//! two-mode Hamiltonian and its spectrum), and [`config`] (run
//! configuration).
//!
//! Everything is expressed in program units `c = q0 = hbar = k_B = 1`; see
//! [`units`].
//!
//! ```
//! use casimir_kit::analytic;
//!
//! // photons produced from vacuum after t = 2 at half light speed
//! let n = analytic::photons_uniform(2.0, 0.5).unwrap();
//! assert!((n - 5.535e-3).abs() < 1e-6);
//!
//! // production is bounded by the Planck factor of the effective temperature
//! let bound = analytic::thermal_descriptor(0.5).unwrap().planck_factor;
//! assert!(n <= bound);
//! ```

pub mod analytic;
pub mod cavity;
pub mod config;
pub mod ermakov;
pub mod error;
pub mod fock;
pub mod symplectic;
pub mod twomode;
pub mod units;

pub use error::{Error, Result};
