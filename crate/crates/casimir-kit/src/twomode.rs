//! Exact diagonalization of the two-mode Hamiltonian.
//!
//! For uniform mirror motion the lowest two cavity modes close on themselves
//! under the intermode coupling `(4 v / 3)(x_2 p_1 - x_1 p_2)`. A linear point
//! transformation
//!
//! ```text
//! x_1' = x_1 + chi x_2,    x_2' = x_2 + xi x_1   (and contragradiently for p)
//! ```
//!
//! removes the coupling when `chi` and `xi` solve a quadratic consistency
//! condition with discriminant
//!
//! ```text
//! Gamma = (8 v^2 + pi^2)(81 pi^2 - 8 v^2),
//! ```
//!
//! giving two branches `chi_pm = (9 pi^2 pm sqrt(Gamma)) / (16 v)`,
//! `xi_pm = pm 8 v / sqrt(Gamma)`. Either branch leaves two uncoupled
//! oscillators `H_i = mu_i p_i^2 + nu_i x_i^2` with normal frequencies
//! `2 sqrt(mu_i nu_i)`; the branches differ only in which normal mode carries
//! which label. `Gamma > 0` requires `|v| < 9 pi / (2 sqrt 2)`, far above any
//! physical mirror speed.
//!
//! ```
//! use casimir_kit::twomode::{normal_frequencies, normal_frequencies_numeric, spectrum};
//!
//! let (w1, w2) = normal_frequencies(0.9).unwrap();
//! let (n1, n2) = normal_frequencies_numeric(0.9).unwrap();
//! assert!((w1 - n1).abs() < 1e-8 && (w2 - n2).abs() < 1e-8);
//! let levels = spectrum(0.9, 10).unwrap();
//! assert_eq!(levels[0].rank, 1);
//! assert_eq!((levels[0].m, levels[0].n), (0, 0));
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::symplectic::{hamiltonian_matrix, j_matrix, HamiltonianSpec};

/// Largest speed for which the decoupling transformation exists,
/// `9 pi / (2 sqrt 2)`.
pub fn velocity_bound() -> f64 {
    9.0 * std::f64::consts::PI / (2.0 * 2.0f64.sqrt())
}

/// Discriminant `Gamma = (8 v^2 + pi^2)(81 pi^2 - 8 v^2)` of the decoupling
/// condition. Fails beyond the [`velocity_bound`].
pub fn gamma(beta: f64) -> Result<f64> {
    if beta.abs() >= velocity_bound() {
        return Err(Error::VelocityBound { beta });
    }
    let p2 = std::f64::consts::PI * std::f64::consts::PI;
    Ok((8.0 * beta * beta + p2) * (81.0 * p2 - 8.0 * beta * beta))
}

/// Root branch of the decoupling condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Transformation parameters `(chi, xi)` for the given branch.
///
/// Both diverge as `v -> 0` (`chi ~ 1/v` on the plus branch); the static
/// limit needs no transformation and is rejected.
pub fn chi_xi(beta: f64, branch: Branch) -> Result<(f64, f64)> {
    if beta == 0.0 {
        return Err(Error::Domain(
            "decoupling transformation undefined at beta = 0".into(),
        ));
    }
    gamma(beta)?;
    let s = branch.sign();
    let p2 = std::f64::consts::PI * std::f64::consts::PI;
    let (u, r) = gamma_parts(beta);
    // chi = (9 pi^2 + s sqrt(Gamma)) / (16 v) = 9 pi^2 (1 + s r) / (16 v),
    // with 1 - r rewritten as -u / (1 + r) to survive small v
    let chi = if s > 0.0 {
        9.0 * p2 * (1.0 + r) / (16.0 * beta)
    } else {
        -9.0 * p2 * u / ((1.0 + r) * 16.0 * beta)
    };
    let xi = s * 8.0 * beta / (9.0 * p2 * r);
    Ok((chi, xi))
}

/// `(u, sqrt(1 + u))` with `Gamma = 81 pi^4 (1 + u)`,
/// `u = 64 v^2 (10 pi^2 - v^2) / (81 pi^4)`.
///
/// Every small-`v` cancellation in the closed forms reduces to `sqrt(1+u) - 1`,
/// which is evaluated as `u / (sqrt(1+u) + 1)`.
fn gamma_parts(beta: f64) -> (f64, f64) {
    let p2 = std::f64::consts::PI * std::f64::consts::PI;
    let v2 = beta * beta;
    let u = 64.0 * v2 * (10.0 * p2 - v2) / (81.0 * p2 * p2);
    (u, (1.0 + u).sqrt())
}

/// Coefficients of the transformed Hamiltonian
/// `H = mu_1 p_1^2 + nu_1 x_1^2 + mu_2 p_2^2 + nu_2 x_2^2
///    + eta_12 x_2 p_1 + eta_21 x_1 p_2`,
/// obtained by substituting the point transformation into the two-mode
/// Hamiltonian. On either root branch the residual couplings `eta_12`,
/// `eta_21` vanish identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedCoefficients {
    pub mu1: f64,
    pub mu2: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub eta12: f64,
    pub eta21: f64,
}

/// Transformed coefficients by direct substitution of `(chi, xi)`.
pub fn coefficients(beta: f64, branch: Branch) -> Result<TransformedCoefficients> {
    let (chi, xi) = chi_xi(beta, branch)?;
    let v = beta;
    let p2 = std::f64::consts::PI * std::f64::consts::PI;
    let mu1 = chi * chi * xi * xi / 2.0 - 4.0 * chi * v * xi * xi / 3.0 - chi * xi
        - v * v * xi * xi / 8.0
        + 4.0 * v * xi / 3.0
        + 2.0 * p2 * xi * xi
        + 0.5;
    let mu2 = chi * chi * xi * xi / 2.0 + 4.0 * chi * v * xi * xi / 3.0 - chi * xi
        - v * v * xi * xi / 8.0
        - 4.0 * v * xi / 3.0
        + p2 * xi * xi / 2.0
        + 0.5;
    let nu1 = chi * chi / 2.0 + 4.0 * chi * v / 3.0 - v * v / 8.0 + p2 / 2.0;
    let nu2 = chi * chi / 2.0 - 4.0 * chi * v / 3.0 - v * v / 8.0 + 2.0 * p2;
    let eta12 =
        chi * chi * xi + 8.0 * chi * v * xi / 3.0 - chi - v * v * xi / 4.0 - 4.0 * v / 3.0
            + p2 * xi;
    let eta21 =
        chi * chi * xi - 8.0 * chi * v * xi / 3.0 - chi - v * v * xi / 4.0 + 4.0 * v / 3.0
            + 4.0 * p2 * xi;
    Ok(TransformedCoefficients {
        mu1,
        mu2,
        nu1,
        nu2,
        eta12,
        eta21,
    })
}

/// Diagonal coefficients of the decoupled Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalCoefficients {
    pub mu1: f64,
    pub mu2: f64,
    pub nu1: f64,
    pub nu2: f64,
}

impl DiagonalCoefficients {
    /// Normal frequencies `(2 sqrt(mu_1 nu_1), 2 sqrt(mu_2 nu_2))` in the
    /// branch's own mode labels.
    pub fn normal_frequencies(&self) -> (f64, f64) {
        (
            2.0 * (self.mu1 * self.nu1).sqrt(),
            2.0 * (self.mu2 * self.nu2).sqrt(),
        )
    }
}

/// Closed forms of the diagonal coefficients,
///
/// ```text
/// mu_1 = 1/4 + s (64 v^2 - 27 pi^2) / (12 sqrt Gamma),
/// mu_2 = 1/4 - s (64 v^2 + 27 pi^2) / (12 sqrt Gamma),
/// nu_1 = [3 Gamma + s sqrt(Gamma) (64 v^2 + 27 pi^2)] / (768 v^2),
/// nu_2 = [3 Gamma + s sqrt(Gamma) (27 pi^2 - 64 v^2)] / (768 v^2),
/// ```
///
/// with `s = +-1` the branch sign. These are the substitution results of
/// [`coefficients`] after eliminating `(chi, xi)`.
pub fn diagonal_closed_form(beta: f64, branch: Branch) -> Result<DiagonalCoefficients> {
    if beta == 0.0 {
        return Err(Error::Domain(
            "decoupling transformation undefined at beta = 0".into(),
        ));
    }
    gamma(beta)?;
    let s = branch.sign();
    let v2 = beta * beta;
    let p2 = std::f64::consts::PI * std::f64::consts::PI;
    let (u, r) = gamma_parts(beta);
    let sg = 9.0 * p2 * r;
    // 1/4 - s / (4 r), with the s = +1 cancellation at small v rewritten
    // through r - 1 = u / (r + 1)
    let quarter_term = if s > 0.0 {
        u / (4.0 * r * (r + 1.0))
    } else {
        0.25 + 1.0 / (4.0 * r)
    };
    // 3 sqrt(Gamma) + s 27 pi^2 = 27 pi^2 (r + s), same rewrite for s = -1
    let sum27 = if s > 0.0 {
        27.0 * p2 * (r + 1.0)
    } else {
        27.0 * p2 * u / (r + 1.0)
    };
    Ok(DiagonalCoefficients {
        mu1: quarter_term + s * 64.0 * v2 / (12.0 * sg),
        mu2: quarter_term - s * 64.0 * v2 / (12.0 * sg),
        nu1: sg * (sum27 + s * 64.0 * v2) / (768.0 * v2),
        nu2: sg * (sum27 - s * 64.0 * v2) / (768.0 * v2),
    })
}

/// Normal frequencies sorted ascending, independent of branch labeling.
pub fn normal_frequencies(beta: f64) -> Result<(f64, f64)> {
    if beta == 0.0 {
        return Ok((std::f64::consts::PI, 2.0 * std::f64::consts::PI));
    }
    let (w1, w2) = diagonal_closed_form(beta, Branch::Minus)?.normal_frequencies();
    Ok(if w1 <= w2 { (w1, w2) } else { (w2, w1) })
}

/// Normal frequencies from the eigenvalues of `J M`: for a stable quadratic
/// Hamiltonian these come in pairs `+- i w`. Sorted ascending.
pub fn normal_frequencies_numeric(beta: f64) -> Result<(f64, f64)> {
    let m = hamiltonian_matrix(&HamiltonianSpec::TwoMode { beta }, 0.0)?;
    let jm = j_matrix(2) * m.matrix();
    let eigs = jm.complex_eigenvalues();
    let mut pos: Vec<f64> = eigs
        .iter()
        .map(|e: &Complex64| e.im)
        .filter(|&w| w > 1e-9)
        .collect();
    if pos.len() != 2 {
        return Err(Error::Accuracy(format!(
            "expected 2 positive-frequency eigenvalues, found {}",
            pos.len()
        )));
    }
    pos.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok((pos[0], pos[1]))
}

/// One level of the two-mode spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumLevel {
    /// 1-based rank in ascending energy order.
    pub rank: usize,
    /// Occupation of the lower normal mode.
    pub m: usize,
    /// Occupation of the upper normal mode.
    pub n: usize,
    /// Energy with the coupling, `w_1 (m + 1/2) + w_2 (n + 1/2)`.
    pub coupled: f64,
    /// Energy of the same occupations at `v = 0`,
    /// `pi (m + 1/2) + 2 pi (n + 1/2)`.
    pub uncoupled: f64,
}

/// Lowest `count` levels of the two-mode spectrum, sorted by coupled energy
/// with lexicographic `(m, n)` tie-breaking.
pub fn spectrum(beta: f64, count: usize) -> Result<Vec<SpectrumLevel>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let (w1, w2) = normal_frequencies(beta)?;
    let pi = std::f64::consts::PI;
    // the box m, n <= count + 5 safely contains the lowest `count` levels
    let cap = count + 5;
    let mut levels: Vec<(f64, usize, usize)> = Vec::with_capacity((cap + 1) * (cap + 1));
    for m in 0..=cap {
        for n in 0..=cap {
            let e = w1 * (m as f64 + 0.5) + w2 * (n as f64 + 0.5);
            levels.push((e, m, n));
        }
    }
    levels.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    Ok(levels
        .into_iter()
        .take(count)
        .enumerate()
        .map(|(i, (e, m, n))| SpectrumLevel {
            rank: i + 1,
            m,
            n,
            coupled: e,
            uncoupled: pi * (m as f64 + 0.5) + 2.0 * pi * (n as f64 + 0.5),
        })
        .collect())
}

/// Number of distinct values among `energies` after clustering at `tol`.
pub fn distinct_count(energies: &[f64], tol: f64) -> usize {
    let mut sorted: Vec<f64> = energies.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut count = 0;
    let mut last = f64::NEG_INFINITY;
    for &e in &sorted {
        if e - last > tol {
            count += 1;
            last = e;
        }
    }
    count
}
