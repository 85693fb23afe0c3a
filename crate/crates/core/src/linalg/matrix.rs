//! Dense complex matrices and the handful of operator-algebra primitives the
//! rest of the crate is built on.

use nalgebra::{DMatrix, DVector};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::C64;

/// Dense complex matrix, row-major construction API, `nalgebra` storage.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    m: DMatrix<C64>,
}

impl ComplexMatrix {
    /// Build from a row-major entry list. Errors unless `entries.len() == rows * cols`.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self {
            m: DMatrix::from_row_slice(rows, cols, &entries),
        })
    }

    /// Build entry-wise from a closure over `(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self {
            m: DMatrix::from_fn(rows, cols, f),
        }
    }

    /// Real diagonal matrix.
    pub fn diagonal(entries: &[f64]) -> Self {
        Self::from_fn(entries.len(), entries.len(), |i, j| {
            if i == j {
                C64::new(entries[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            m: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: DMatrix::identity(n, n),
        }
    }

    pub(crate) fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn rows(&self) -> usize {
        self.m.nrows()
    }

    pub fn cols(&self) -> usize {
        self.m.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.m[(i, j)] = v;
    }

    /// Row-major copy of the entries.
    pub fn entries_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.m[(i, j)]);
            }
        }
        out
    }

    /// Conjugate transpose M†.
    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max_ij |M_ij - conj(M_ji)|, i.e. how far from Hermitian the matrix is.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows() {
            for j in i..self.cols() {
                let d = (self.m[(i, j)] - self.m[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn require_hermitian(&self, tol: f64) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect <= tol {
            Ok(())
        } else {
            Err(Error::NonHermitian { defect, tol })
        }
    }

    /// Matrix product with a dimension check.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(Self {
            m: &self.m * &rhs.m,
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        Ok(Self {
            m: &self.m + &rhs.m,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        Ok(Self {
            m: &self.m - &rhs.m,
        })
    }

    pub fn scale(&self, z: C64) -> Self {
        Self { m: &self.m * z }
    }

    /// `self - z * I`; used for centering observables, X̃ = X - ⟨X⟩ I.
    pub fn shift_identity(&self, z: C64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "identity shift needs a square matrix".into(),
            ));
        }
        let mut m = self.m.clone();
        for i in 0..m.nrows() {
            m[(i, i)] -= z;
        }
        Ok(Self { m })
    }

    pub(crate) fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.m * v
    }

    fn same_shape(&self, rhs: &Self) -> Result<()> {
        if self.rows() != rhs.rows() || self.cols() != rhs.cols() {
            return Err(Error::DimensionMismatch(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(())
    }
}

/// Kronecker product a ⊗ b (index convention: (i_a, i_b) ↦ i_a * dim_b + i_b).
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix {
        m: a.m.kronecker(&b.m),
    }
}

/// [x, y] = xy - yx.
pub fn commutator(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    let xy = x.matmul(y)?;
    let yx = y.matmul(x)?;
    xy.sub(&yx)
}

/// {x, y} = xy + yx.
pub fn anticommutator(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    let xy = x.matmul(y)?;
    let yx = y.matmul(x)?;
    xy.add(&yx)
}

// JSON form: nested row arrays, each entry a [re, im] pair.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.rows())
            .map(|i| {
                (0..self.cols())
                    .map(|j| {
                        let z = self.m[(i, j)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        rows.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(de)?;
        if rows.is_empty() {
            return Err(D::Error::custom("matrix must have at least one row"));
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(D::Error::custom("matrix must have at least one column"));
        }
        if rows.iter().any(|r| r.len() != cols) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        let entries: Vec<C64> = rows
            .iter()
            .flat_map(|r| r.iter().map(|&[re, im]| C64::new(re, im)))
            .collect();
        ComplexMatrix::new(rows.len(), cols, entries).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn tensor_index_convention() {
        // (a ⊗ b)[(i_a * nb + i_b), (j_a * nb + j_b)] = a[i_a, j_a] * b[i_b, j_b]
        let a = ComplexMatrix::new(2, 2, vec![c(1.0), c(2.0), c(3.0), c(4.0)]).unwrap();
        let b = ComplexMatrix::new(2, 2, vec![c(0.0), c(1.0), c(1.0), c(0.0)]).unwrap();
        let t = tensor(&a, &b);
        assert_eq!(t.rows(), 4);
        assert_eq!(t.at(0, 1), c(1.0)); // a00 * b01
        assert_eq!(t.at(2, 3), c(4.0)); // a11 * b01
        assert_eq!(t.at(2, 1), c(3.0)); // a10 * b01
        assert_eq!(t.at(0, 0), c(0.0));
    }

    #[test]
    fn pauli_commutator() {
        let sx = ComplexMatrix::new(2, 2, vec![c(0.0), c(1.0), c(1.0), c(0.0)]).unwrap();
        let sy = ComplexMatrix::new(
            2,
            2,
            vec![c(0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), c(0.0)],
        )
        .unwrap();
        // [σx, σy] = 2i σz
        let comm = commutator(&sx, &sy).unwrap();
        assert!((comm.at(0, 0) - C64::new(0.0, 2.0)).norm() < 1e-15);
        assert!((comm.at(1, 1) - C64::new(0.0, -2.0)).norm() < 1e-15);
        assert!(comm.at(0, 1).norm() < 1e-15);
        // {σx, σy} = 0
        let anti = anticommutator(&sx, &sy).unwrap();
        assert!(anti.max_abs() < 1e-15);
    }

    #[test]
    fn hermiticity_defect_detects_asymmetry() {
        let mut m = ComplexMatrix::identity(2);
        assert!(m.is_hermitian(1e-12));
        m.set(0, 1, c(1e-6));
        assert!(!m.is_hermitian(1e-12));
        assert!((m.hermiticity_defect() - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn serde_round_trip() {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0), C64::new(0.0, -0.5), C64::new(0.0, 0.5), c(2.0)],
        )
        .unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "[[[1.0,0.0],[0.0,-0.5]],[[0.0,0.5],[2.0,0.0]]]");
        let back: ComplexMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn ragged_rows_rejected() {
        let bad = "[[[1.0,0.0]],[[0.0,0.0],[1.0,0.0]]]";
        assert!(serde_json::from_str::<ComplexMatrix>(bad).is_err());
    }
}
