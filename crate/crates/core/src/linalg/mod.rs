//! Complex linear algebra substrate: matrices, states, Schmidt structure,
//! density matrices, and the moment primitives (⟨O⟩, ΔO²) everything else
//! reduces to.

mod bipartite;
mod density;
mod matrix;
mod state;

pub use bipartite::{partial_trace_b, schmidt, BipartiteState, SchmidtDecomposition,
                    DEFAULT_RANK_TOL};
pub use density::{purity, von_neumann_entropy, DensityMatrix, HERMITICITY_TOL};
pub use matrix::{anticommutator, commutator, tensor, ComplexMatrix};
pub use state::StateVector;

use crate::error::{Error, Result};
use crate::C64;

/// Hermiticity tolerance applied to observables entering expectation values.
pub const OBSERVABLE_HERMITICITY_TOL: f64 = 1e-12;
/// Largest imaginary residual tolerated (then discarded) in a real
/// expectation value.
pub const IMAGINARY_RESIDUAL_TOL: f64 = 1e-10;
/// Variances may come out this far below zero before it is an error; anything
/// in (-VARIANCE_FLOOR, 0) is clamped to 0.
pub const VARIANCE_FLOOR: f64 = 1e-10;

/// Anything that yields expectation values: pure states, density matrices,
/// and bipartite states probed with A-side observables.
pub trait QuantumState {
    /// Hilbert-space dimension the observables must match (for a bipartite
    /// state this is dim_A: observables are implicitly O ⊗ 1_B).
    fn observable_dim(&self) -> usize;

    /// ⟨M⟩ for an arbitrary (not necessarily Hermitian) matrix M.
    fn matrix_mean(&self, m: &ComplexMatrix) -> Result<C64>;

    /// ⟨X Y⟩ without materializing the product matrix.
    fn pair_mean(&self, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<C64>;
}

fn check_op_dim<S: QuantumState + ?Sized>(state: &S, m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() || m.rows() != state.observable_dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{} but the state expects dimension {}",
            m.rows(),
            m.cols(),
            state.observable_dim()
        )));
    }
    Ok(())
}

impl QuantumState for StateVector {
    fn observable_dim(&self) -> usize {
        self.dim()
    }

    fn matrix_mean(&self, m: &ComplexMatrix) -> Result<C64> {
        check_op_dim(self, m)?;
        let mv = m.apply(self.as_dvector());
        Ok(self.as_dvector().dotc(&mv))
    }

    fn pair_mean(&self, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<C64> {
        check_op_dim(self, x)?;
        check_op_dim(self, y)?;
        // ⟨ψ|XY|ψ⟩ = (X†ψ)†(Yψ); callers pass Hermitian X so X† = X.
        let xv = x.adjoint().apply(self.as_dvector());
        let yv = y.apply(self.as_dvector());
        Ok(xv.dotc(&yv))
    }
}

impl QuantumState for DensityMatrix {
    fn observable_dim(&self) -> usize {
        self.dim()
    }

    fn matrix_mean(&self, m: &ComplexMatrix) -> Result<C64> {
        check_op_dim(self, m)?;
        // tr(ρ M) = Σ_ij ρ_ij M_ji
        let rho = self.matrix();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..rho.rows() {
            for j in 0..rho.cols() {
                acc += rho.at(i, j) * m.at(j, i);
            }
        }
        Ok(acc)
    }

    fn pair_mean(&self, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<C64> {
        check_op_dim(self, x)?;
        check_op_dim(self, y)?;
        let xy = x.matmul(y)?;
        self.matrix_mean(&xy)
    }
}

impl QuantumState for BipartiteState {
    fn observable_dim(&self) -> usize {
        self.dim_a()
    }

    /// ⟨Ψ|(M ⊗ 1)|Ψ⟩ = tr(d† M d), computed on the amplitude matrix without
    /// ever forming the joint-space operator.
    fn matrix_mean(&self, m: &ComplexMatrix) -> Result<C64> {
        check_op_dim(self, m)?;
        let d = self.amplitude_dmatrix();
        let md = m.as_dmatrix() * d;
        Ok(d.dotc(&md))
    }

    fn pair_mean(&self, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<C64> {
        check_op_dim(self, x)?;
        check_op_dim(self, y)?;
        let d = self.amplitude_dmatrix();
        let xd = x.adjoint().as_dmatrix() * d;
        let yd = y.as_dmatrix() * d;
        Ok(xd.dotc(&yd))
    }
}

/// ⟨O⟩ for a Hermitian observable; the imaginary residual must be below
/// [`IMAGINARY_RESIDUAL_TOL`] and is then discarded.
pub fn expectation<S: QuantumState + ?Sized>(o: &ComplexMatrix, state: &S) -> Result<f64> {
    o.require_hermitian(OBSERVABLE_HERMITICITY_TOL)?;
    let z = state.matrix_mean(o)?;
    if z.im.abs() > IMAGINARY_RESIDUAL_TOL {
        return Err(Error::NonHermitian {
            defect: z.im.abs(),
            tol: IMAGINARY_RESIDUAL_TOL,
        });
    }
    Ok(z.re)
}

/// (ΔO)² = ⟨O²⟩ - ⟨O⟩² for a Hermitian observable, clamped into [0, ∞);
/// values below -[`VARIANCE_FLOOR`] are an error rather than silently fixed.
pub fn variance<S: QuantumState + ?Sized>(o: &ComplexMatrix, state: &S) -> Result<f64> {
    o.require_hermitian(OBSERVABLE_HERMITICITY_TOL)?;
    let mean = expectation(o, state)?;
    let second = state.pair_mean(o, o)?;
    if second.im.abs() > IMAGINARY_RESIDUAL_TOL {
        return Err(Error::NonHermitian {
            defect: second.im.abs(),
            tol: IMAGINARY_RESIDUAL_TOL,
        });
    }
    let var = second.re - mean * mean;
    if var < -VARIANCE_FLOOR {
        return Err(Error::DomainError(format!(
            "variance came out {var:.3e}, below the -1e-10 floor"
        )));
    }
    Ok(var.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![c(0.0), c(1.0), c(1.0), c(0.0)]).unwrap()
    }

    fn sigma_y() -> ComplexMatrix {
        ComplexMatrix::new(
            2,
            2,
            vec![c(0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), c(0.0)],
        )
        .unwrap()
    }

    #[test]
    fn qubit_moments() {
        let up = StateVector::basis_state(2, 0).unwrap();
        assert!(expectation(&sigma_x(), &up).unwrap().abs() < 1e-15);
        assert!((variance(&sigma_x(), &up).unwrap() - 1.0).abs() < 1e-15);
        let plus = StateVector::new(vec![c(1.0), c(1.0)]).unwrap();
        assert!((expectation(&sigma_x(), &plus).unwrap() - 1.0).abs() < 1e-15);
        assert!(variance(&sigma_x(), &plus).unwrap() < 1e-15);
    }

    #[test]
    fn pair_mean_routes_agree() {
        // ⟨σx σy⟩ on a generic state: pure, density, and joint routes.
        let psi = StateVector::new(vec![C64::new(0.8, 0.1), C64::new(-0.3, 0.5)]).unwrap();
        let pure = psi.pair_mean(&sigma_x(), &sigma_y()).unwrap();
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        let mixed = rho.pair_mean(&sigma_x(), &sigma_y()).unwrap();
        assert!((pure - mixed).norm() < 1e-12);

        // Same state as a trivially-bipartite one (dim_b = 1).
        let bip = BipartiteState::new(2, 1, psi.amplitudes().to_vec()).unwrap();
        let joint = bip.pair_mean(&sigma_x(), &sigma_y()).unwrap();
        assert!((pure - joint).norm() < 1e-12);
    }

    #[test]
    fn non_hermitian_observable_rejected() {
        let mut m = sigma_x();
        m.set(0, 1, c(2.0));
        let up = StateVector::basis_state(2, 0).unwrap();
        assert!(matches!(
            expectation(&m, &up),
            Err(Error::NonHermitian { .. })
        ));
    }

    #[test]
    fn bipartite_mean_matches_joint_space_route() {
        let s = BipartiteState::new(2, 2, vec![c(0.6), c(0.1), C64::new(0.0, 0.3), c(0.9)])
            .unwrap();
        let direct = expectation(&sigma_x(), &s).unwrap();
        let lifted = tensor(&sigma_x(), &ComplexMatrix::identity(2));
        let via_joint = expectation(&lifted, &s.joint_vector()).unwrap();
        assert!((direct - via_joint).abs() < 1e-12);
    }
}
