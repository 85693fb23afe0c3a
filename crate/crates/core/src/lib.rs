//! minunc — when do entangled and mixed quantum states saturate the
//! Heisenberg and Schrödinger–Robertson uncertainty bounds?
//!
//! The crate answers that question numerically:
//!
//! - [`linalg`]: complex matrices, normalized states, Schmidt decomposition,
//!   density matrices, expectation/variance primitives;
//! - [`uncertainty`]: the two bounds, two-branch superposition identities,
//!   saturation conditions, and the annihilation-equation analysis
//!   (X̃ + Γ Ỹ)|a_k⟩ = 0 over Schmidt vectors;
//! - [`models`]: concrete systems — spin-j, truncated Fock oscillator,
//!   Gaussian packets on 1D grids, and the two-mode EPR Gaussian;
//! - [`mixedstate`]: the variational curve D(Γ) = tr ρ (X̃+ΓỸ)†(X̃+ΓỸ),
//!   saturator operators, and purity/entropy-corrected lower bounds;
//! - [`search`]: derivative-free minimization of the uncertainty gap over
//!   (rank-restricted) bipartite states.
//!
//! Units: ħ is an explicit parameter of the models (default 1); nothing in
//! the crate assumes a unit system beyond that.

pub mod error;
pub mod linalg;
pub mod mixedstate;
pub mod models;
pub mod search;
pub mod uncertainty;

pub use error::{Error, Result};

/// Complex double — the scalar type of the whole crate.
pub type C64 = num_complex::Complex<f64>;

/// Shorthand for a real complex number.
#[inline]
pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Shorthand for a purely imaginary complex number.
#[inline]
pub fn ci(im: f64) -> C64 {
    C64::new(0.0, im)
}
