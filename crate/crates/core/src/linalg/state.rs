//! Normalized pure states.

use nalgebra::DVector;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::C64;

/// A pure state: complex amplitudes, kept normalized (‖ψ‖₂ = 1) by every
/// constructor. Construction from a zero vector is an error, never a NaN.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    v: DVector<C64>,
}

impl StateVector {
    /// Normalize `amplitudes` into a state.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionMismatch(
                "state vector must have at least one amplitude".into(),
            ));
        }
        let v = DVector::from_vec(amplitudes);
        let n = v.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(Self { v: v / C64::new(n, 0.0) })
    }

    /// Computational basis state |k⟩ in `dim` dimensions.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::DimensionMismatch(format!(
                "basis index {k} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[k] = C64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub(crate) fn from_dvector(v: DVector<C64>) -> Result<Self> {
        Self::new(v.data.into())
    }

    pub(crate) fn as_dvector(&self) -> &DVector<C64> {
        &self.v
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.v.as_slice()
    }

    pub fn at(&self, i: usize) -> C64 {
        self.v[i]
    }

    /// ⟨self|other⟩ (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "inner product between dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self.v.dotc(&other.v))
    }

    pub fn norm(&self) -> f64 {
        self.v.norm()
    }
}

// JSON form: list of [re, im] pairs.
impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(de)?;
        let amps: Vec<C64> = pairs.iter().map(|&[re, im]| C64::new(re, im)).collect();
        StateVector::new(amps).map_err(D::Error::custom)
    }
}
