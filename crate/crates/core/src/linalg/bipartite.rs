//! Bipartite pure states |Ψ⟩ ∈ H_A ⊗ H_B and their Schmidt structure.
//!
//! A state is stored as its amplitude matrix d with Ψ = Σ_ij d_ij |i⟩_A|j⟩_B,
//! so the Schmidt decomposition is exactly the SVD d = Σ_k c_k |a_k⟩⟨b_k*|
//! and the reduced state on A is ρ_A = d d†.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::density::DensityMatrix;
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::state::StateVector;
use crate::C64;

/// Default absolute threshold below which a Schmidt coefficient does not
/// count toward the rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Normalized bipartite pure state, amplitudes row-major over (i_A, i_B).
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    d: DMatrix<C64>, // dim_a x dim_b, Frobenius norm 1
}

impl BipartiteState {
    /// `amplitudes` is row-major: index = i_A * dim_b + i_B.
    pub fn new(dim_a: usize, dim_b: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::DimensionMismatch(
                "bipartite dimensions must be positive".into(),
            ));
        }
        if amplitudes.len() != dim_a * dim_b {
            return Err(Error::DimensionMismatch(format!(
                "dimA * dimB = {} but got {} amplitudes",
                dim_a * dim_b,
                amplitudes.len()
            )));
        }
        let d = DMatrix::from_row_slice(dim_a, dim_b, &amplitudes);
        let n: f64 = d.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            d: d / C64::new(n, 0.0),
        })
    }

    /// Reinterpret a joint-space state vector (index i_A * dim_b + i_B).
    pub fn from_joint(psi: &StateVector, dim_a: usize, dim_b: usize) -> Result<Self> {
        if psi.dim() != dim_a * dim_b {
            return Err(Error::DimensionMismatch(format!(
                "joint dimension {} is not {dim_a} * {dim_b}",
                psi.dim()
            )));
        }
        Self::new(dim_a, dim_b, psi.amplitudes().to_vec())
    }

    /// Assemble Σ_k c_k |a_k⟩|b_k⟩ from Schmidt data. The c_k must be
    /// nonnegative and the {a_k}, {b_k} orthonormal for this to be a Schmidt
    /// form, but any nonzero combination produces a valid normalized state.
    pub fn from_schmidt(
        coefficients: &[f64],
        basis_a: &[StateVector],
        basis_b: &[StateVector],
    ) -> Result<Self> {
        if coefficients.len() != basis_a.len() || coefficients.len() != basis_b.len() {
            return Err(Error::DimensionMismatch(
                "schmidt data length mismatch".into(),
            ));
        }
        if coefficients.is_empty() {
            return Err(Error::DimensionMismatch("empty schmidt data".into()));
        }
        let dim_a = basis_a[0].dim();
        let dim_b = basis_b[0].dim();
        let mut d = DMatrix::zeros(dim_a, dim_b);
        for ((ck, ak), bk) in coefficients.iter().zip(basis_a).zip(basis_b) {
            if ak.dim() != dim_a || bk.dim() != dim_b {
                return Err(Error::DimensionMismatch(
                    "schmidt vectors have inconsistent dimensions".into(),
                ));
            }
            for i in 0..dim_a {
                for j in 0..dim_b {
                    d[(i, j)] += C64::new(*ck, 0.0) * ak.at(i) * bk.at(j);
                }
            }
        }
        let n: f64 = d.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            d: d / C64::new(n, 0.0),
        })
    }

    pub(crate) fn amplitude_dmatrix(&self) -> &DMatrix<C64> {
        &self.d
    }

    pub fn dim_a(&self) -> usize {
        self.d.nrows()
    }

    pub fn dim_b(&self) -> usize {
        self.d.ncols()
    }

    pub fn amplitude(&self, i_a: usize, i_b: usize) -> C64 {
        self.d[(i_a, i_b)]
    }

    /// Flatten to the joint Hilbert space (index i_A * dim_b + i_B), matching
    /// the [`crate::linalg::tensor`] convention.
    pub fn joint_vector(&self) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim_a() * self.dim_b());
        for i in 0..self.dim_a() {
            for j in 0..self.dim_b() {
                amps.push(self.d[(i, j)]);
            }
        }
        StateVector::new(amps).expect("normalized state cannot have zero norm")
    }
}

// JSON form: {"dimA": .., "dimB": .., "amplitudes": [[re,im], ...]} row-major.
#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct BipartiteStateRepr {
    dim_a: usize,
    dim_b: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for BipartiteState {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut amplitudes = Vec::with_capacity(self.dim_a() * self.dim_b());
        for i in 0..self.dim_a() {
            for j in 0..self.dim_b() {
                let z = self.d[(i, j)];
                amplitudes.push([z.re, z.im]);
            }
        }
        BipartiteStateRepr {
            dim_a: self.dim_a(),
            dim_b: self.dim_b(),
            amplitudes,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for BipartiteState {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = BipartiteStateRepr::deserialize(de)?;
        let amps: Vec<C64> = repr
            .amplitudes
            .iter()
            .map(|&[re, im]| C64::new(re, im))
            .collect();
        BipartiteState::new(repr.dim_a, repr.dim_b, amps).map_err(serde::de::Error::custom)
    }
}

/// Result of a Schmidt decomposition: coefficients are descending and the
/// full list of min(dim_a, dim_b) singular values is kept; `rank` counts the
/// ones above `rank_tolerance`.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub basis_a: Vec<StateVector>,
    pub basis_b: Vec<StateVector>,
    pub rank: usize,
    pub rank_tolerance: f64,
}

impl SchmidtDecomposition {
    /// Rebuild the amplitude matrix Σ_k c_k |a_k⟩⟨b_k*| and report the largest
    /// entry-wise deviation from `state`. Used to verify the factorization.
    pub fn reconstruction_error(&self, state: &BipartiteState) -> f64 {
        let (na, nb) = (state.dim_a(), state.dim_b());
        let mut worst = 0.0f64;
        for i in 0..na {
            for j in 0..nb {
                let mut z = C64::new(0.0, 0.0);
                for k in 0..self.coefficients.len() {
                    z += C64::new(self.coefficients[k], 0.0)
                        * self.basis_a[k].at(i)
                        * self.basis_b[k].at(j);
                }
                worst = worst.max((z - state.amplitude(i, j)).norm());
            }
        }
        worst
    }
}

/// Schmidt decomposition via SVD of the amplitude matrix.
pub fn schmidt(state: &BipartiteState, rank_tolerance: f64) -> Result<SchmidtDecomposition> {
    if !(rank_tolerance >= 0.0) {
        return Err(Error::DomainError(format!(
            "rank tolerance must be nonnegative, got {rank_tolerance}"
        )));
    }
    let svd = state
        .d
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or(Error::FactorizationError("SVD did not converge"))?;
    let u = svd.u.ok_or(Error::FactorizationError("SVD returned no U"))?;
    let v_t = svd
        .v_t
        .ok_or(Error::FactorizationError("SVD returned no V"))?;

    // d = U Σ V†, so d_ij = Σ_k σ_k U_ik conj(V_jk): the A vectors are the
    // columns of U and the B vectors are the rows of V† read directly.
    let k_max = svd.singular_values.len();
    let mut triples: Vec<(f64, StateVector, StateVector)> = (0..k_max)
        .map(|k| {
            let a = StateVector::from_dvector(u.column(k).into_owned())
                .expect("singular vector cannot be zero");
            let b = StateVector::from_dvector(v_t.row(k).transpose())
                .expect("singular vector cannot be zero");
            (svd.singular_values[k], a, b)
        })
        .collect();
    triples.sort_by(|x, y| y.0.partial_cmp(&x.0).expect("singular values are finite"));

    let mut coefficients = Vec::with_capacity(k_max);
    let mut basis_a = Vec::with_capacity(k_max);
    let mut basis_b = Vec::with_capacity(k_max);
    for (c, a, b) in triples {
        coefficients.push(c.max(0.0));
        basis_a.push(a);
        basis_b.push(b);
    }
    let rank = coefficients.iter().filter(|&&c| c > rank_tolerance).count();

    Ok(SchmidtDecomposition {
        coefficients,
        basis_a,
        basis_b,
        rank,
        rank_tolerance,
    })
}

/// Reduced state on A: ρ_A = tr_B |Ψ⟩⟨Ψ| = d d†.
pub fn partial_trace_b(state: &BipartiteState) -> Result<DensityMatrix> {
    let gram = &state.d * state.d.adjoint();
    // Enforce exact Hermiticity of the product before validation.
    let m = ComplexMatrix::from_fn(state.dim_a(), state.dim_a(), |i, j| {
        (gram[(i, j)] + gram[(j, i)].conj()) * C64::new(0.5, 0.0)
    });
    DensityMatrix::new(m)
}
