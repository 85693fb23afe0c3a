//! Uniform 1-D grids with discrete position and momentum operators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector};
use crate::{c, ci, C64};

/// Half-open uniform grid: x_k = min + k·h for k = 0..n, h = (max - min)/n.
///
/// The half-open convention identifies x_n with x_0 + L, so the same grid
/// serves both the finite-difference and the periodic spectral derivative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    min: f64,
    max: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() || !(max > min) {
            return Err(Error::DomainError(format!(
                "invalid grid range [{min}, {max})"
            )));
        }
        if n < 8 {
            return Err(Error::GridTooCoarse(format!(
                "{n} points is below the minimum of 8"
            )));
        }
        Ok(Self { min, max, n })
    }

    /// Symmetric grid on [-half_extent, half_extent).
    pub fn centered(half_extent: f64, n: usize) -> Result<Self> {
        if !(half_extent > 0.0) {
            return Err(Error::DomainError(format!(
                "half extent must be positive, got {half_extent}"
            )));
        }
        Self::new(-half_extent, half_extent, n)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / self.n as f64
    }

    /// Periodic length n·h.
    pub fn period(&self) -> f64 {
        self.max - self.min
    }

    pub fn point(&self, k: usize) -> f64 {
        self.min + k as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.point(k)).collect()
    }

    /// Diagonal position operator in the grid basis.
    pub fn position_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::diagonal(&self.points())
    }

    /// Momentum P = -iħ D with D the fourth-order centered difference
    /// (-f₊₂ + 8f₊₁ - 8f₋₁ + f₋₂)/(12h), wrapped periodically. D is exactly
    /// antisymmetric, so P is exactly Hermitian.
    pub fn momentum_fd(&self, hbar: f64) -> Result<ComplexMatrix> {
        if !(hbar > 0.0) {
            return Err(Error::DomainError(format!("hbar must be positive, got {hbar}")));
        }
        let n = self.n;
        let h = self.spacing();
        let w1 = 8.0 / (12.0 * h);
        let w2 = -1.0 / (12.0 * h);
        let mut m = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            // row j of D: +w at forward neighbours, -w at backward ones.
            let set = |m: &mut ComplexMatrix, col: usize, w: f64| {
                let cur = m.at(j, col);
                m.set(j, col, cur + ci(-hbar * w));
            };
            set(&mut m, (j + 1) % n, w1);
            set(&mut m, (j + 2) % n, w2);
            set(&mut m, (j + n - 1) % n, -w1);
            set(&mut m, (j + n - 2) % n, -w2);
        }
        Ok(m)
    }

    /// Momentum P = -iħ D with D the periodic spectral differentiation
    /// matrix D_jk = (π/L)(-1)^(j-k) cot(π(j-k)/n) (zero diagonal), exact on
    /// the grid's band limit. Requires even n.
    pub fn momentum_spectral(&self, hbar: f64) -> Result<ComplexMatrix> {
        if !(hbar > 0.0) {
            return Err(Error::DomainError(format!("hbar must be positive, got {hbar}")));
        }
        if self.n % 2 != 0 {
            return Err(Error::DomainError(format!(
                "spectral derivative requires an even grid, got n = {}",
                self.n
            )));
        }
        let n = self.n as i64;
        let pref = std::f64::consts::PI / self.period();
        Ok(ComplexMatrix::from_fn(self.n, self.n, |j, k| {
            if j == k {
                return c(0.0);
            }
            let d = j as i64 - k as i64;
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            let arg = std::f64::consts::PI * d as f64 / n as f64;
            ci(-hbar * pref * sign / arg.tan())
        }))
    }

    /// Sample ψ(x_k) and normalize in ℓ².
    pub fn state_from_fn<F: Fn(f64) -> C64>(&self, f: F) -> Result<StateVector> {
        StateVector::new((0..self.n).map(|k| f(self.point(k))).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expectation, QuantumState};

    #[test]
    fn momentum_operators_are_hermitian() {
        let g = Grid1D::centered(5.0, 64).unwrap();
        assert!(g.momentum_fd(1.0).unwrap().hermiticity_defect() < 1e-12);
        assert!(g.momentum_spectral(1.0).unwrap().hermiticity_defect() < 1e-12);
    }

    #[test]
    fn spectral_momentum_is_exact_on_plane_waves() {
        let g = Grid1D::centered(4.0, 32).unwrap();
        let k0 = 2.0 * std::f64::consts::PI * 5.0 / g.period();
        let psi = g
            .state_from_fn(|x| (ci(k0 * x)).exp())
            .unwrap();
        let p = g.momentum_spectral(1.0).unwrap();
        let mean = expectation(&p, &psi).unwrap();
        assert!((mean - k0).abs() < 1e-10 * k0);
        // Second moment as well: ⟨P²⟩ = k₀² for an exact eigenvector.
        let p2 = psi.pair_mean(&p, &p).unwrap();
        assert!((p2.re - k0 * k0).abs() < 1e-9 * k0 * k0);
    }

    #[test]
    fn fd_momentum_has_fourth_order_dispersion() {
        let g = Grid1D::centered(4.0, 64).unwrap();
        let h = g.spacing();
        let k0 = 2.0 * std::f64::consts::PI * 4.0 / g.period();
        let psi = g.state_from_fn(|x| (ci(k0 * x)).exp()).unwrap();
        let p = g.momentum_fd(1.0).unwrap();
        let mean = expectation(&p, &psi).unwrap();
        // Plane waves are eigenvectors of the wrapped stencil with
        // k_eff = (8 sin(kh) - sin(2kh)) / (6h).
        let k_eff = (8.0 * (k0 * h).sin() - (2.0 * k0 * h).sin()) / (6.0 * h);
        assert!((mean - k_eff).abs() < 1e-12);
        let rel = (k_eff - k0).abs() / k0;
        assert!(rel < (k0 * h).powi(4) / 25.0, "dispersion error {rel:.3e}");
    }

    #[test]
    fn odd_spectral_grid_is_rejected() {
        let g = Grid1D::new(0.0, 1.0, 9).unwrap();
        assert!(g.momentum_spectral(1.0).is_err());
    }
}
