//! Gaussian wavepackets: closed-form moments and grid realizations obtained
//! by solving the annihilation equation (Q̃ + Γ P̃)ψ = 0 directly.

use super::grid::Grid1D;
use crate::error::{Error, Result};
use crate::linalg::StateVector;
use crate::C64;

/// A packet with mean position `center`, mean momentum `momentum`, and
/// position spread `width` = ΔX.
#[derive(Clone, Copy, Debug)]
pub struct GaussianPacket {
    pub center: f64,
    pub momentum: f64,
    pub width: f64,
    pub hbar: f64,
}

impl GaussianPacket {
    pub fn new(center: f64, momentum: f64, width: f64, hbar: f64) -> Result<Self> {
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::DomainError(format!(
                "packet width must be positive, got {width}"
            )));
        }
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::DomainError(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        if !center.is_finite() || !momentum.is_finite() {
            return Err(Error::DomainError("packet means must be finite".into()));
        }
        Ok(Self {
            center,
            momentum,
            width,
            hbar,
        })
    }

    pub fn delta_x(&self) -> f64 {
        self.width
    }

    /// Every real-width Gaussian is minimum-uncertainty: ΔP = ħ/(2ΔX).
    pub fn delta_p(&self) -> f64 {
        self.hbar / (2.0 * self.width)
    }

    /// The Γ annihilating this packet: purely imaginary with
    /// γ_I = 2ΔX²/ħ (so that ΔX² = ħγ_I/2).
    pub fn gamma(&self) -> C64 {
        C64::new(0.0, 2.0 * self.width * self.width / self.hbar)
    }

    /// A grid wide enough for quadrature at this packet's scale.
    pub fn default_grid(&self, n: usize) -> Result<Grid1D> {
        Grid1D::new(
            self.center - 10.0 * self.width,
            self.center + 10.0 * self.width,
            n,
        )
    }

    pub fn discretize(&self, grid: &Grid1D) -> Result<StateVector> {
        annihilated_gaussian(self.center, self.momentum, self.gamma(), grid, self.hbar)
    }
}

/// Closed-form (⟨X⟩, ⟨P⟩, ΔX, ΔP).
pub fn gaussian_moments(p: &GaussianPacket) -> (f64, f64, f64, f64) {
    (p.center, p.momentum, p.delta_x(), p.delta_p())
}

/// Solve (Q - q₀ + Γ(P - p₀))ψ = 0 on the grid for Γ = γ_R + iγ_I with
/// γ_I > 0:
///
/// ψ(q) ∝ exp(i p₀ q/ħ) · exp(-(γ_I + i γ_R)(q - q₀)²/(2ħ|Γ|²)),
///
/// a Gaussian of position variance ΔQ² = ħ|Γ|²/(2γ_I). It saturates SR at
/// this Γ, and HUR too when γ_R = 0.
pub fn annihilated_gaussian(
    mean_q: f64,
    mean_p: f64,
    gamma: C64,
    grid: &Grid1D,
    hbar: f64,
) -> Result<StateVector> {
    if !(hbar > 0.0) || !hbar.is_finite() {
        return Err(Error::DomainError(format!(
            "hbar must be positive, got {hbar}"
        )));
    }
    if !(gamma.im > 0.0) || !gamma.im.is_finite() || !gamma.re.is_finite() {
        return Err(Error::DomainError(format!(
            "normalizable solutions need Im Γ > 0, got Γ = {gamma}"
        )));
    }
    let width = (hbar * gamma.norm_sqr() / (2.0 * gamma.im)).sqrt();
    let h = grid.spacing();
    if width < 3.0 * h {
        return Err(Error::GridTooCoarse(format!(
            "packet width {width:.3e} is under-resolved at spacing {h:.3e}"
        )));
    }
    if mean_q - 6.0 * width < grid.min() || mean_q + 6.0 * width > grid.max() {
        return Err(Error::GridTooCoarse(format!(
            "grid [{:.3}, {:.3}) does not cover ±6 widths around q₀ = {mean_q}",
            grid.min(),
            grid.max()
        )));
    }
    // Highest wavenumber content ~ p₀/ħ + a few inverse widths must stay
    // under the grid's Nyquist limit π/h.
    if (mean_p.abs() / hbar + 3.0 / width) > 0.9 * std::f64::consts::PI / h {
        return Err(Error::GridTooCoarse(format!(
            "momentum content of p₀ = {mean_p} exceeds the grid Nyquist limit"
        )));
    }

    let decay = C64::new(gamma.im, gamma.re) / (2.0 * hbar * gamma.norm_sqr());
    grid.state_from_fn(|q| {
        let dq = q - mean_q;
        (C64::new(0.0, mean_p * q / hbar) - decay * dq * dq).exp()
    })
}

/// The named solver for the purely imaginary family Γ = iγ_I (argument
/// order: means first, momentum before position).
pub fn pq_gaussian_solution(
    mean_p: f64,
    mean_q: f64,
    gamma_i: f64,
    grid: &Grid1D,
    hbar: f64,
) -> Result<StateVector> {
    annihilated_gaussian(mean_q, mean_p, C64::new(0.0, gamma_i), grid, hbar)
}
