//! Spin-j angular momentum matrices in the |j, m⟩ basis.
//!
//! j is stored doubled (`j2 = 2j`) so half-integer spins stay exact. Basis
//! index k runs from the highest weight down: k ↔ m2 = j2 - 2k, so k = 0 is
//! |j, j⟩ and k = j2 is |j, -j⟩.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector};
use crate::uncertainty::annihilation_residual;
use crate::{c, ci};

#[derive(Clone, Copy, Debug)]
pub struct SpinSystem {
    j2: u32,
    hbar: f64,
}

impl SpinSystem {
    pub fn new(j2: u32, hbar: f64) -> Result<Self> {
        if j2 == 0 {
            return Err(Error::DomainError(
                "spin-0 carries no angular momentum algebra".into(),
            ));
        }
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::DomainError(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        Ok(Self { j2, hbar })
    }

    pub fn j(&self) -> f64 {
        self.j2 as f64 / 2.0
    }

    pub fn j2(&self) -> u32 {
        self.j2
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim(&self) -> usize {
        self.j2 as usize + 1
    }

    /// J₊|j,m⟩ = ħ√(j(j+1) - m(m+1)) |j,m+1⟩; in doubled-integer form the
    /// entry (k-1, k) is ħ√(k(j2 - k + 1)).
    pub fn jplus(&self) -> ComplexMatrix {
        let j2 = self.j2 as usize;
        ComplexMatrix::from_fn(j2 + 1, j2 + 1, |r, col| {
            if col >= 1 && r == col - 1 {
                c(self.hbar * ((col * (j2 - col + 1)) as f64).sqrt())
            } else {
                c(0.0)
            }
        })
    }

    pub fn jminus(&self) -> ComplexMatrix {
        self.jplus().adjoint()
    }

    pub fn jx(&self) -> ComplexMatrix {
        self.jplus()
            .add(&self.jminus())
            .expect("same dims")
            .scale(c(0.5))
    }

    pub fn jy(&self) -> ComplexMatrix {
        self.jplus()
            .sub(&self.jminus())
            .expect("same dims")
            .scale(ci(-0.5))
    }

    pub fn jz(&self) -> ComplexMatrix {
        let j2 = self.j2;
        let diag: Vec<f64> = (0..=j2)
            .map(|k| self.hbar * (j2 as f64 - 2.0 * k as f64) / 2.0)
            .collect();
        ComplexMatrix::diagonal(&diag)
    }

    /// |j, m⟩ with m passed doubled. Rejects m2 of the wrong parity or out
    /// of range.
    pub fn state(&self, m2: i32) -> Result<StateVector> {
        let j2 = self.j2 as i32;
        if m2.abs() > j2 || (j2 - m2) % 2 != 0 {
            return Err(Error::InvalidM { j2: self.j2, m2 });
        }
        let k = ((j2 - m2) / 2) as usize;
        StateVector::basis_state(self.dim(), k)
    }

    /// |j, j⟩.
    pub fn highest(&self) -> StateVector {
        StateVector::basis_state(self.dim(), 0).expect("dim ≥ 2")
    }

    /// |j, -j⟩.
    pub fn lowest(&self) -> StateVector {
        StateVector::basis_state(self.dim(), self.dim() - 1).expect("dim ≥ 2")
    }
}

/// Closed-form variances in |j, m⟩:
/// (ΔJx)² = (ΔJy)² = ħ²(j(j+1) - m²)/2.
pub fn spin_variances(sys: &SpinSystem, m2: i32) -> Result<(f64, f64)> {
    let j2 = sys.j2 as i32;
    if m2.abs() > j2 || (j2 - m2) % 2 != 0 {
        return Err(Error::InvalidM { j2: sys.j2, m2 });
    }
    let j = sys.j();
    let m = m2 as f64 / 2.0;
    let v = sys.hbar * sys.hbar * (j * (j + 1.0) - m * m) / 2.0;
    Ok((v, v))
}

/// Outcome of scanning Γ = ia for the smallest worst-case annihilation
/// residual over the two extremal-weight vectors |j, ±j⟩.
#[derive(Clone, Copy, Debug, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpinNoSaturationReport {
    /// min over scanned Γ of max(r₊, r₋).
    pub min_max_residual: f64,
    /// Imaginary part of the scanned Γ achieving it.
    pub gamma_im_at_min: f64,
    /// Analytic value of the min-max: ħ√(2j)/2, reached at Γ = 0.
    pub closed_form: f64,
    /// (r₊, r₋) at the scanned minimizer.
    pub anchor_residuals_at_min: [f64; 2],
}

/// Scan the HUR family Γ = ia for the best simultaneous annihilation of
/// |j, j⟩ and |j, -j⟩ under (J̃x + Γ J̃y).
///
/// Both residuals are independent of the superposition weights: for any
/// c₁|j,j⟩ + c₂|j,-j⟩ (on orthogonal pointer states) the means ⟨Jx⟩ and
/// ⟨Jy⟩ vanish, and
/// (Jx + ΓJy)|j,±j⟩ = (ħ√(2j)/2)(1 ± iΓ)|j, ±(j-1)⟩,
/// so max(r₊, r₋) = (ħ√(2j)/2)·max(|1 - a|, |1 + a|) ≥ ħ√(2j)/2 > 0: no Γ
/// annihilates both, hence no such state reaches the bound nontrivially.
/// (An SR real part only increases both residuals, so the imaginary-axis
/// scan covers SR too.)
pub fn spin_no_saturation_check(sys: &SpinSystem) -> Result<SpinNoSaturationReport> {
    let jx = sys.jx();
    let jy = sys.jy();
    let top = sys.highest();
    let bot = sys.lowest();

    let mut best = (f64::INFINITY, 0.0, [0.0, 0.0]);
    let half_width = 3.0;
    let steps = 1200usize; // even count ⇒ a = 0 lands on the grid exactly
    for i in 0..=steps {
        let a = -half_width + 2.0 * half_width * i as f64 / steps as f64;
        let gamma = ci(a);
        let r_plus = annihilation_residual(&jx, &jy, gamma, 0.0, 0.0, &top)?;
        let r_minus = annihilation_residual(&jx, &jy, gamma, 0.0, 0.0, &bot)?;
        let worst = r_plus.max(r_minus);
        if worst < best.0 {
            best = (worst, a, [r_plus, r_minus]);
        }
    }

    Ok(SpinNoSaturationReport {
        min_max_residual: best.0,
        gamma_im_at_min: best.1,
        closed_form: sys.hbar * (2.0 * sys.j()).sqrt() / 2.0,
        anchor_residuals_at_min: best.2,
    })
}
