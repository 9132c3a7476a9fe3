//! TOML run configuration.
//!
//! A run file looks like
//!
//! ```toml
//! modes = 1
//! t0 = 0.0
//! tf = 10.0
//! samples = 200
//!
//! [trajectory]
//! kind = "uniform"
//! beta = 0.5
//!
//! [fock]
//! cutoff = 40
//!
//! [ode]
//! tol = 1e-10
//! ```
//!
//! and maps onto [`crate::cavity::CavityConfig`]. Serialization round-trips:
//!
//! ```
//! use casimir_kit::config::RunConfig;
//!
//! let cfg = RunConfig::default();
//! let text = cfg.to_toml().unwrap();
//! assert_eq!(RunConfig::from_toml(&text).unwrap(), cfg);
//! ```

use serde::{Deserialize, Serialize};

use crate::cavity::{CavityConfig, Tolerances, Trajectory};
use crate::error::{Error, Result};

/// Top-level run file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub modes: usize,
    pub t0: f64,
    pub tf: f64,
    pub samples: usize,
    pub trajectory: TrajectorySection,
    #[serde(default)]
    pub fock: FockSection,
    #[serde(default)]
    pub ode: OdeSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectorySection {
    pub kind: TrajectoryKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrajectoryKind {
    Uniform,
    Parametric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FockSection {
    pub cutoff: usize,
}

impl Default for FockSection {
    fn default() -> Self {
        FockSection { cutoff: 40 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdeSection {
    pub tol: f64,
}

impl Default for OdeSection {
    fn default() -> Self {
        OdeSection { tol: 1e-10 }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// The trajectory described by the `[trajectory]` table.
    pub fn trajectory(&self) -> Result<Trajectory> {
        match self.trajectory.kind {
            TrajectoryKind::Uniform => {
                let beta = self.trajectory.beta.ok_or_else(|| {
                    Error::Config("uniform trajectory requires `beta`".into())
                })?;
                Ok(Trajectory::uniform(beta))
            }
            TrajectoryKind::Parametric => {
                let epsilon = self.trajectory.epsilon.ok_or_else(|| {
                    Error::Config("parametric trajectory requires `epsilon`".into())
                })?;
                Trajectory::parametric(epsilon)
            }
        }
    }

    /// Validated conversion into the solver-facing configuration.
    pub fn to_cavity_config(&self) -> Result<CavityConfig> {
        let cfg = CavityConfig {
            trajectory: self.trajectory()?,
            n_modes: self.modes,
            t0: self.t0,
            tf: self.tf,
            samples: self.samples,
            tolerances: Tolerances {
                ode_tol: self.ode.tol,
                symplectic_defect: 1e-10,
                fock_cutoff: self.fock.cutoff,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            modes: 1,
            t0: 0.0,
            tf: 10.0,
            samples: 200,
            trajectory: TrajectorySection {
                kind: TrajectoryKind::Uniform,
                beta: Some(0.5),
                epsilon: None,
            },
            fock: FockSection::default(),
            ode: OdeSection::default(),
        }
    }
}
