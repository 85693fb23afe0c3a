//! Physical model builders: spin-j, truncated Fock space, Gaussian packets
//! on a grid, and the two-particle EPR-like Gaussian.

pub mod epr;
pub mod fock;
pub mod gaussian;
pub mod grid;
pub mod spin;

pub use epr::{EprGaussian, EprGridMoments, EprMoments};
pub use fock::FockSystem;
pub use gaussian::{
    annihilated_gaussian, gaussian_moments, pq_gaussian_solution, GaussianPacket,
};
pub use grid::Grid1D;
pub use spin::{spin_no_saturation_check, spin_variances, SpinNoSaturationReport, SpinSystem};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

fn default_hbar() -> f64 {
    1.0
}

fn default_one() -> f64 {
    1.0
}

fn default_grid_points() -> usize {
    512
}

/// Which discrete momentum operator a grid model uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivativeScheme {
    /// Fourth-order centered differences (periodic wrap).
    #[default]
    Fd4,
    /// Periodic spectral differentiation matrix; requires even n.
    Spectral,
}

/// Grid block of an EPR model description.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(default = "default_grid_points")]
    pub n: usize,
    /// Overrides the model's default extent when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_extent: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n: default_grid_points(),
            half_extent: None,
        }
    }
}

/// JSON-facing description of a model, e.g.
/// `{"type":"spin","j2":2}`, `{"type":"fock","cutoff":60}`,
/// `{"type":"epr","sigma":1.0,"omega":0.25,"grid":{"n":512}}`, or
/// `{"type":"grid","min":-8.0,"max":8.0,"n":256}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ModelSpec {
    Spin {
        j2: u32,
        #[serde(default = "default_hbar")]
        hbar: f64,
    },
    Fock {
        cutoff: usize,
        #[serde(default = "default_one")]
        mass: f64,
        #[serde(default = "default_one")]
        omega: f64,
        #[serde(default = "default_hbar")]
        hbar: f64,
    },
    Epr {
        sigma: f64,
        omega: f64,
        #[serde(default = "default_hbar")]
        hbar: f64,
        #[serde(default)]
        grid: GridSpec,
    },
    Grid {
        min: f64,
        max: f64,
        n: usize,
        #[serde(default = "default_hbar")]
        hbar: f64,
        #[serde(default)]
        scheme: DerivativeScheme,
    },
}

impl ModelSpec {
    pub fn hbar(&self) -> f64 {
        match self {
            ModelSpec::Spin { hbar, .. }
            | ModelSpec::Fock { hbar, .. }
            | ModelSpec::Epr { hbar, .. }
            | ModelSpec::Grid { hbar, .. } => *hbar,
        }
    }

    /// The canonical noncommuting pair this model supplies as (X, Y):
    /// (Jx, Jy) for spin, (X, P) for Fock, (Q, P) for a bare grid. The EPR
    /// model is bipartite and has no single-system pair here.
    pub fn observables(&self) -> Result<(ComplexMatrix, ComplexMatrix)> {
        match self {
            ModelSpec::Spin { j2, hbar } => {
                let s = SpinSystem::new(*j2, *hbar)?;
                Ok((s.jx(), s.jy()))
            }
            ModelSpec::Fock {
                cutoff,
                mass,
                omega,
                hbar,
            } => {
                let f = FockSystem::new(*cutoff, *mass, *omega, *hbar)?;
                Ok((f.position(), f.momentum()))
            }
            ModelSpec::Grid {
                min,
                max,
                n,
                hbar,
                scheme,
            } => {
                let g = Grid1D::new(*min, *max, *n)?;
                let p = match scheme {
                    DerivativeScheme::Fd4 => g.momentum_fd(*hbar)?,
                    DerivativeScheme::Spectral => g.momentum_spectral(*hbar)?,
                };
                Ok((g.position_matrix(), p))
            }
            ModelSpec::Epr { .. } => Err(Error::DomainError(
                "the EPR model is bipartite; it has no single-system observable pair".into(),
            )),
        }
    }
}
