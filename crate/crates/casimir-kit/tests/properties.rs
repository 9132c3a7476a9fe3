//! Property-based checks of the algebraic identities the solvers rely on.

use casimir_kit::{analytic, cavity, twomode};
use proptest::prelude::*;

proptest! {
    /// The monodromy coefficients have unit determinant for any reachable
    /// (t, beta): the flow is symplectic.
    #[test]
    fn tau_determinant_is_one(t in 0.0f64..50.0, beta in 0.01f64..1.5) {
        let tau = analytic::tau_coeffs(t, beta).unwrap();
        prop_assert!((tau.determinant() - 1.0).abs() < 1e-9);
    }

    /// Photon production never exceeds the Planck factor of the effective
    /// temperature.
    #[test]
    fn photons_bounded_by_planck_factor(t in 0.0f64..100.0, beta in 0.01f64..1.5) {
        let n = analytic::photons_uniform(t, beta).unwrap();
        let bound = analytic::thermal_descriptor(beta).unwrap().planck_factor;
        prop_assert!(n >= 0.0);
        prop_assert!(n <= bound * (1.0 + 1e-12));
    }

    /// The two closed forms for the photon number are the same function.
    #[test]
    fn planck_form_matches_direct(t in 0.0f64..50.0, beta in 0.01f64..1.5) {
        let a = analytic::photons_uniform(t, beta).unwrap();
        let b = analytic::photons_planck_form(t, beta).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    /// Intermode couplings are antisymmetric in the mode labels.
    #[test]
    fn coupling_is_antisymmetric(k in 1usize..30, j in 1usize..30) {
        prop_assume!(k != j);
        let g = cavity::coupling_g(k, j).unwrap();
        let gt = cavity::coupling_g(j, k).unwrap();
        prop_assert_eq!(g, -gt);
    }

    /// Both root branches decouple the two-mode Hamiltonian and agree on the
    /// sorted normal frequencies.
    #[test]
    fn branches_decouple_and_agree(beta in -0.99f64..0.99) {
        prop_assume!(beta.abs() > 1e-3);
        let mut sorted = Vec::new();
        for branch in [twomode::Branch::Plus, twomode::Branch::Minus] {
            let c = twomode::coefficients(beta, branch).unwrap();
            prop_assert!(c.eta12.abs() < 1e-9);
            prop_assert!(c.eta21.abs() < 1e-9);
            let (w1, w2) = twomode::diagonal_closed_form(beta, branch)
                .unwrap()
                .normal_frequencies();
            sorted.push(if w1 < w2 { (w1, w2) } else { (w2, w1) });
        }
        prop_assert!((sorted[0].0 - sorted[1].0).abs() < 1e-9);
        prop_assert!((sorted[0].1 - sorted[1].1).abs() < 1e-9);
    }

    /// The spectrum is sorted and its ground state is (0, 0).
    #[test]
    fn spectrum_is_sorted(beta in -0.99f64..0.99) {
        let levels = twomode::spectrum(beta, 10).unwrap();
        prop_assert_eq!((levels[0].m, levels[0].n), (0, 0));
        for w in levels.windows(2) {
            prop_assert!(w[1].coupled >= w[0].coupled);
        }
    }
}
