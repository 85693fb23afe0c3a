//! Density matrices with validated invariants.

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::state::StateVector;
use crate::C64;

/// Hermiticity tolerance accepted by the constructors.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// |tr ρ - 1| accepted by the constructors.
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue accepted by the constructors.
pub const POSITIVITY_TOL: f64 = -1e-10;

/// A density matrix ρ: Hermitian, unit trace, positive semidefinite.
///
/// Every constructor checks all three invariants (positivity via a full
/// eigendecomposition, which is kept around for entropy and minimum-state
/// queries). Eigenvalues are stored in descending order with tiny negative
/// values clamped to zero.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    m: ComplexMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<StateVector>,
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidDensity(format!(
                "expected a square matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        m.require_hermitian(HERMITICITY_TOL)?;
        let tr = m.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!(
                "trace is {:.16e} + {:.3e}i, expected 1",
                tr.re, tr.im
            )));
        }

        // Symmetrize before factorizing so the eigensolver sees an exactly
        // Hermitian matrix regardless of last-bit asymmetry.
        let sym = m.add(&m.adjoint())?.scale(C64::new(0.5, 0.0));
        let eig = sym.as_dmatrix().clone().symmetric_eigen();

        let dim = m.rows();
        let mut pairs: Vec<(f64, StateVector)> = (0..dim)
            .map(|k| {
                let val = eig.eigenvalues[k];
                let vec = StateVector::from_dvector(eig.eigenvectors.column(k).into_owned())
                    .expect("eigenvector of a Hermitian matrix cannot be zero");
                (val, vec)
            })
            .collect();
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("eigenvalues are finite"));

        if let Some((worst, _)) = pairs.last() {
            if *worst < POSITIVITY_TOL {
                return Err(Error::InvalidDensity(format!(
                    "negative eigenvalue {worst:.3e}"
                )));
            }
        }

        let (eigenvalues, eigenvectors): (Vec<f64>, Vec<StateVector>) = pairs
            .into_iter()
            .map(|(v, s)| (v.max(0.0), s))
            .unzip();

        Ok(Self {
            m,
            eigenvalues,
            eigenvectors,
        })
    }

    /// ρ = |ψ⟩⟨ψ|.
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        let d = psi.dim();
        let m = ComplexMatrix::from_fn(d, d, |i, j| psi.at(i) * psi.at(j).conj());
        Self::new(m)
    }

    /// Convex mixture Σ pᵢ |ψᵢ⟩⟨ψᵢ|. Weights must be nonnegative and sum to 1
    /// within the trace tolerance.
    pub fn from_mixture(parts: &[(f64, StateVector)]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidDensity("mixture of zero states".into()));
        }
        let d = parts[0].1.dim();
        if parts.iter().any(|(p, _)| *p < 0.0) {
            return Err(Error::InvalidDensity("negative mixture weight".into()));
        }
        if parts.iter().any(|(_, s)| s.dim() != d) {
            return Err(Error::DimensionMismatch(
                "mixture components have different dimensions".into(),
            ));
        }
        let m = ComplexMatrix::from_fn(d, d, |i, j| {
            parts
                .iter()
                .map(|(p, s)| s.at(i) * s.at(j).conj() * C64::new(*p, 0.0))
                .sum()
        });
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    /// Eigenvalues in descending order (clamped to ≥ 0).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvectors matching [`Self::eigenvalues`] order.
    pub fn eigenvectors(&self) -> &[StateVector] {
        &self.eigenvectors
    }
}

/// Purity μ = tr ρ².
pub fn purity(rho: &DensityMatrix) -> f64 {
    // tr ρ² = Σ_ij ρ_ij ρ_ji = Σ_ij |ρ_ij|² for Hermitian ρ.
    let m = rho.matrix();
    let mut acc = 0.0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            acc += m.at(i, j).norm_sqr();
        }
    }
    acc
}

/// Von Neumann entropy S(ρ) = -Σ λᵢ ln λᵢ (natural log, 0·ln 0 = 0).
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| {
            let l = l.min(1.0);
            -l * l.ln()
        })
        .sum()
}
