//! Harmonic oscillator in a truncated Fock basis {|0⟩, …, |N⟩}.
//!
//! X and P are exact on states supported away from the cutoff; the
//! commutator picks up its only truncation artifact in the (N, N) corner,
//! where aa† is missing the |N+1⟩ channel.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, StateVector};
use crate::{c, ci};

#[derive(Clone, Copy, Debug)]
pub struct FockSystem {
    cutoff: usize,
    mass: f64,
    omega: f64,
    hbar: f64,
}

impl FockSystem {
    pub fn new(cutoff: usize, mass: f64, omega: f64, hbar: f64) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::DomainError(format!(
                "Fock cutoff must be at least 2, got {cutoff}"
            )));
        }
        for (name, v) in [("mass", mass), ("omega", omega), ("hbar", hbar)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::DomainError(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self {
            cutoff,
            mass,
            omega,
            hbar,
        })
    }

    /// ħ = m = ω = 1.
    pub fn unit(cutoff: usize) -> Result<Self> {
        Self::new(cutoff, 1.0, 1.0, 1.0)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// a|n⟩ = √n |n-1⟩.
    pub fn annihilation(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), self.dim(), |r, col| {
            if col >= 1 && r == col - 1 {
                c((col as f64).sqrt())
            } else {
                c(0.0)
            }
        })
    }

    pub fn creation(&self) -> ComplexMatrix {
        self.annihilation().adjoint()
    }

    /// X = √(ħ/2mω)(a + a†).
    pub fn position(&self) -> ComplexMatrix {
        let s = (self.hbar / (2.0 * self.mass * self.omega)).sqrt();
        self.annihilation()
            .add(&self.creation())
            .expect("same dims")
            .scale(c(s))
    }

    /// P = i√(ħmω/2)(a† - a).
    pub fn momentum(&self) -> ComplexMatrix {
        let s = (self.hbar * self.mass * self.omega / 2.0).sqrt();
        self.creation()
            .sub(&self.annihilation())
            .expect("same dims")
            .scale(ci(s))
    }

    /// H = ħω(n + ½), exact diagonal form (not the truncated X,P quadratic).
    pub fn hamiltonian(&self) -> ComplexMatrix {
        let diag: Vec<f64> = (0..self.dim())
            .map(|n| self.hbar * self.omega * (n as f64 + 0.5))
            .collect();
        ComplexMatrix::diagonal(&diag)
    }

    pub fn number_state(&self, n: usize) -> Result<StateVector> {
        if n >= self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "|{n}⟩ exceeds cutoff {}",
                self.cutoff
            )));
        }
        StateVector::basis_state(self.dim(), n)
    }

    /// Gibbs-weight mixture p_n ∝ e^{-βn}, truncated and renormalized.
    pub fn gibbs_state(&self, beta: f64) -> Result<DensityMatrix> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::DomainError(format!(
                "inverse temperature must be positive, got {beta}"
            )));
        }
        let q = (-beta).exp();
        let z: f64 = (0..self.dim()).map(|n| q.powi(n as i32)).sum();
        let weights: Vec<f64> = (0..self.dim()).map(|n| q.powi(n as i32) / z).collect();
        DensityMatrix::new(ComplexMatrix::diagonal(&weights))
    }

    /// Purity of the untruncated Gibbs family: μ = tanh(β/2).
    pub fn gibbs_purity(beta: f64) -> f64 {
        (beta / 2.0).tanh()
    }
}
