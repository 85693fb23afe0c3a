//! Two-particle Gaussian state on ℝ²:
//!
//! Ψ(x_A, x_B) ∝ exp(-σ²(x_A - x_B)²) · exp(-(x_A + x_B)²/(16Ω²)),
//!
//! with single-particle marginal uncertainties
//! ΔX_A = √(Ω² + 1/(16σ²)) and ΔP_A = ħ√(σ² + 1/(16Ω²)). At Ω = 1/(4σ)
//! the product reaches ħ/2 and the state factorizes; anywhere else it is
//! entangled with geometric Schmidt spectrum of ratio
//! λ = |σ - 1/(4Ω)| / (σ + 1/(4Ω)).

use super::grid::Grid1D;
use crate::error::{Error, Result};
use crate::linalg::BipartiteState;
use crate::{c, C64};

#[derive(Clone, Copy, Debug)]
pub struct EprGaussian {
    sigma: f64,
    omega: f64,
    hbar: f64,
}

/// Grid-quadrature moments of particle A.
#[derive(Clone, Copy, Debug, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EprGridMoments {
    pub mean_x: f64,
    pub mean_p: f64,
    pub delta_x: f64,
    pub delta_p: f64,
    pub product: f64,
}

/// Closed-form and grid-numeric moments side by side.
#[derive(Clone, Copy, Debug, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EprMoments {
    pub closed_delta_x: f64,
    pub closed_delta_p: f64,
    pub closed_product: f64,
    pub grid: EprGridMoments,
    /// |grid product - closed product| / closed product.
    pub relative_error: f64,
}

impl EprGaussian {
    pub fn new(sigma: f64, omega: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("sigma", sigma), ("omega", omega), ("hbar", hbar)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::DomainError(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self { sigma, omega, hbar })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// The saturation-and-factorization locus Ω* = 1/(4σ).
    pub fn omega_star(sigma: f64) -> f64 {
        1.0 / (4.0 * sigma)
    }

    pub fn delta_x_closed(&self) -> f64 {
        (self.omega * self.omega + 1.0 / (16.0 * self.sigma * self.sigma)).sqrt()
    }

    pub fn delta_p_closed(&self) -> f64 {
        self.hbar
            * (self.sigma * self.sigma + 1.0 / (16.0 * self.omega * self.omega)).sqrt()
    }

    pub fn product_closed(&self) -> f64 {
        self.delta_x_closed() * self.delta_p_closed()
    }

    /// Ratio of consecutive Schmidt coefficients (geometric spectrum).
    pub fn schmidt_ratio(&self) -> f64 {
        let a = self.sigma;
        let b = 1.0 / (4.0 * self.omega);
        ((a - b) / (a + b)).abs()
    }

    /// Symmetric grid covering ±8·max(Ω, 1/(4σ)) — at least six standard
    /// deviations of both quadratures.
    pub fn default_grid(&self, n: usize) -> Result<Grid1D> {
        let scale = self.omega.max(1.0 / (4.0 * self.sigma));
        Grid1D::centered(8.0 * scale, n)
    }

    /// Normalized real amplitudes ψ_ij = Ψ(x_i, x_j), row-major.
    fn amplitudes(&self, grid: &Grid1D) -> Vec<f64> {
        let xs = grid.points();
        let n = xs.len();
        let mut amps = vec![0.0f64; n * n];
        let cu = self.sigma * self.sigma;
        let cv = 1.0 / (16.0 * self.omega * self.omega);
        for (i, &xa) in xs.iter().enumerate() {
            for (j, &xb) in xs.iter().enumerate() {
                let u = xa - xb;
                let v = xa + xb;
                amps[i * n + j] = (-cu * u * u - cv * v * v).exp();
            }
        }
        let norm: f64 = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        amps
    }

    pub fn discretize(&self, grid: &Grid1D) -> Result<BipartiteState> {
        let n = grid.len();
        let amps: Vec<C64> = self.amplitudes(grid).into_iter().map(c).collect();
        BipartiteState::new(n, n, amps)
    }

    /// Particle-A moments by direct quadrature; the momentum second moment
    /// uses the fourth-order periodic difference applied along the A axis.
    /// The amplitudes are real, so ⟨P_A⟩ vanishes identically.
    pub fn grid_moments(&self, grid: &Grid1D) -> Result<EprGridMoments> {
        let psi = self.amplitudes(grid);
        let xs = grid.points();
        let n = xs.len();
        let h = grid.spacing();

        let mut mean_x = 0.0f64;
        let mut x2 = 0.0f64;
        for i in 0..n {
            let mut row_weight = 0.0;
            for j in 0..n {
                let w = psi[i * n + j] * psi[i * n + j];
                row_weight += w;
            }
            mean_x += xs[i] * row_weight;
            x2 += xs[i] * xs[i] * row_weight;
        }
        let var_x = x2 - mean_x * mean_x;

        // (Dψ)_ij along the A index, wrapped; ⟨P²⟩ = ħ²‖Dψ‖².
        let mut dpsi_sq = 0.0f64;
        let w1 = 8.0 / (12.0 * h);
        let w2 = 1.0 / (12.0 * h);
        for i in 0..n {
            let ip1 = (i + 1) % n;
            let ip2 = (i + 2) % n;
            let im1 = (i + n - 1) % n;
            let im2 = (i + n - 2) % n;
            for j in 0..n {
                let d = w1 * (psi[ip1 * n + j] - psi[im1 * n + j])
                    - w2 * (psi[ip2 * n + j] - psi[im2 * n + j]);
                dpsi_sq += d * d;
            }
        }
        let var_p = self.hbar * self.hbar * dpsi_sq;

        let delta_x = var_x.max(0.0).sqrt();
        let delta_p = var_p.sqrt();
        Ok(EprGridMoments {
            mean_x,
            mean_p: 0.0,
            delta_x,
            delta_p,
            product: delta_x * delta_p,
        })
    }

    /// Grid moments with a discretization-convergence check: the same
    /// quadrature at half resolution must agree to 5e-4 relative, otherwise
    /// the grid is declared too coarse.
    pub fn grid_moments_checked(&self, grid: &Grid1D) -> Result<EprGridMoments> {
        let fine = self.grid_moments(grid)?;
        let half = Grid1D::new(grid.min(), grid.max(), grid.len() / 2)?;
        let coarse = self.grid_moments(&half)?;
        let rel = (fine.product - coarse.product).abs() / fine.product;
        if rel > 5e-4 {
            return Err(Error::GridTooCoarse(format!(
                "product moved {rel:.2e} between n = {} and n = {}",
                grid.len() / 2,
                grid.len()
            )));
        }
        Ok(fine)
    }

    /// Closed-form and checked grid moments together.
    pub fn moments(&self, grid: &Grid1D) -> Result<EprMoments> {
        let g = self.grid_moments_checked(grid)?;
        let closed = self.product_closed();
        Ok(EprMoments {
            closed_delta_x: self.delta_x_closed(),
            closed_delta_p: self.delta_p_closed(),
            closed_product: closed,
            grid: g,
            relative_error: (g.product - closed).abs() / closed,
        })
    }
}
