//! Density-matrix machinery: the variational curve whose minimum measures
//! the distance from saturation, the operator C that must annihilate every
//! populated eigenvector, and the purity- and entropy-indexed lower bounds
//! for position/momentum pairs.
//!
//! For a state ρ and Hermitian X, Y define
//! D(Γ) = tr ρ (X̃ + ΓỸ)†(X̃ + ΓỸ) = varX + |Γ|²varY + Γ_I⟨i[X,Y]⟩ + Γ_R⟨{X̃,Ỹ}⟩.
//!
//! D is a nonnegative quadratic with Hessian 2·varY in both real directions.
//! Restricted to the imaginary axis (Γ = ia) its minimum value is the HUR
//! gap divided by varY; over all of ℂ it is the SR gap divided by varY. So
//! "gap = 0" is exactly "min D = 0", and the minimizing Γ is the one the
//! saturation analysis uses.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{
    partial_trace_b, purity, von_neumann_entropy, BipartiteState, ComplexMatrix, DensityMatrix,
    QuantumState,
};
use crate::uncertainty::{
    evaluate, gamma_from_moments, BoundKind, Moments, UncertaintyReport, ZERO_VARIANCE_TOL,
};
use crate::{c, C64};

/// The quadratic D(Γ) for one (X, Y, state, bound) combination.
#[derive(Clone, Copy, Debug)]
pub struct VariationalCurve {
    kind: BoundKind,
    moments: Moments,
    gamma_min: C64,
}

impl VariationalCurve {
    pub fn kind(&self) -> BoundKind {
        self.kind
    }

    pub fn moments(&self) -> &Moments {
        &self.moments
    }

    /// D along the HUR direction Γ = ia.
    pub fn eval_hur(&self, a: f64) -> f64 {
        let m = &self.moments;
        m.var_x + a * a * m.var_y + a * m.comm_mean
    }

    /// D at a general complex Γ.
    pub fn eval_sr(&self, gamma: C64) -> f64 {
        let m = &self.moments;
        m.var_x + gamma.norm_sqr() * m.var_y + gamma.im * m.comm_mean + gamma.re * m.anti_mean
    }

    /// The minimizing Γ (imaginary for HUR).
    pub fn minimizer_point(&self) -> C64 {
        self.gamma_min
    }

    /// D at the minimizer, in closed form:
    /// varX - ⟨i[X,Y]⟩²/(4 varY)  [- ⟨{X̃,Ỹ}⟩²/(4 varY) for SR].
    pub fn minimizer_value(&self) -> f64 {
        let m = &self.moments;
        let mut v = m.var_x - m.comm_mean * m.comm_mean / (4.0 * m.var_y);
        if self.kind == BoundKind::Sr {
            v -= m.anti_mean * m.anti_mean / (4.0 * m.var_y);
        }
        v
    }

    /// Second derivative of D in any real direction: 2·varY.
    pub fn curvature(&self) -> f64 {
        2.0 * self.moments.var_y
    }
}

/// Build the variational curve for (x, y) on any state.
pub fn d_curve<S: QuantumState + ?Sized>(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    state: &S,
    kind: BoundKind,
) -> Result<VariationalCurve> {
    let moments = Moments::compute(x, y, state)?;
    if moments.var_y < ZERO_VARIANCE_TOL {
        return Err(Error::ZeroVariance(moments.var_y));
    }
    let gamma_min = gamma_from_moments(&moments, kind)?;
    Ok(VariationalCurve {
        kind,
        moments,
        gamma_min,
    })
}

/// C = X̃ + Γ_min Ỹ. Saturation of the bound on ρ is equivalent to
/// tr ρ C†C = 0, i.e. C annihilating every populated eigenvector of ρ.
#[derive(Clone, Debug)]
pub struct SaturatorOperator {
    matrix: ComplexMatrix,
    kind: BoundKind,
    gamma: C64,
    d_min: f64,
}

impl SaturatorOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn kind(&self) -> BoundKind {
        self.kind
    }

    pub fn gamma(&self) -> C64 {
        self.gamma
    }

    /// The value tr ρ C†C must take: the curve minimum.
    pub fn d_min(&self) -> f64 {
        self.d_min
    }

    /// tr ρ C†C, computed from the matrices (not the closed form).
    pub fn trace_against(&self, rho: &DensityMatrix) -> Result<f64> {
        let cc = self.matrix.adjoint().matmul(&self.matrix)?;
        let v = rho.matrix_mean(&cc)?;
        Ok(v.re)
    }
}

/// Build C for (x, y) on `state` (the state supplies the means and Γ_min).
pub fn saturator<S: QuantumState + ?Sized>(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    state: &S,
    kind: BoundKind,
) -> Result<SaturatorOperator> {
    let curve = d_curve(x, y, state, kind)?;
    let m = curve.moments();
    let gamma = curve.minimizer_point();
    let xt = x.shift_identity(c(m.mean_x))?;
    let yt = y.shift_identity(c(m.mean_y))?;
    let matrix = xt.add(&yt.scale(gamma))?;
    Ok(SaturatorOperator {
        matrix,
        kind,
        gamma,
        d_min: curve.minimizer_value(),
    })
}

/// Per-eigenvector outcome of the minimum-state condition.
#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentResidual {
    pub weight: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MinimumStateReport {
    /// ‖C|a_i⟩‖ for every eigenvalue p_i > tol, heaviest first.
    pub components: Vec<ComponentResidual>,
    /// tr ρ C†C from the matrices.
    pub trace_value: f64,
    pub saturates: bool,
}

/// Check whether ρ is a minimum-uncertainty state for the operator C:
/// every eigenvector with weight above `tol` must be annihilated to within
/// `tol`.
pub fn minimum_state_condition(
    cop: &SaturatorOperator,
    rho: &DensityMatrix,
    tol: f64,
) -> Result<MinimumStateReport> {
    if !(tol > 0.0) {
        return Err(Error::DomainError(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut components = Vec::new();
    for (i, &p) in rho.eigenvalues().iter().enumerate() {
        if p <= tol {
            continue;
        }
        let a_i = &rho.eigenvectors()[i];
        let cv = cop.matrix().apply(a_i.as_dvector());
        components.push(ComponentResidual {
            weight: p,
            residual: cv.norm(),
        });
    }
    let saturates = components.iter().all(|r| r.residual < tol);
    Ok(MinimumStateReport {
        components,
        trace_value: cop.trace_against(rho)?,
        saturates,
    })
}

/// Φ(μ) = (4 + √(16 + 9μ²)) / (9μ) on (0, 1] — the purity-indexed
/// enhancement factor (an approximation accurate to about a percent).
pub fn phi_of_mu(mu: f64) -> Result<f64> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::DomainError(format!(
            "purity must lie in (0, 1], got {mu}"
        )));
    }
    Ok((4.0 + (16.0 + 9.0 * mu * mu).sqrt()) / (9.0 * mu))
}

/// The uncertainty-product floor (ħ/2)·8/(9μ) for states of purity μ.
/// Weaker than ħ/2 for μ > 8/9, stronger below.
pub fn bastiaans_rhs(mu: f64, hbar: f64) -> Result<f64> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::DomainError(format!(
            "purity must lie in (0, 1], got {mu}"
        )));
    }
    if !(hbar > 0.0) {
        return Err(Error::DomainError(format!(
            "hbar must be positive, got {hbar}"
        )));
    }
    Ok((hbar / 2.0) * 8.0 / (9.0 * mu))
}

/// Bose-gas entropy S(β) = β/(e^β - 1) - ln(1 - e^{-β}); strictly
/// decreasing from +∞ at β → 0 to 0 at β → ∞.
pub fn bose_entropy(beta: f64) -> f64 {
    if beta.is_infinite() {
        return 0.0;
    }
    // exp_m1 keeps full relative precision for small β, where both e^β − 1
    // and 1 − e^{-β} would otherwise cancel catastrophically.
    beta / beta.exp_m1() - (-(-beta).exp_m1()).ln()
}

const BETA_BRACKET: (f64, f64) = (1e-8, 100.0);

/// Invert S(β) by bisection in log β over [1e-8, 100].
///
/// S = 0 (and any S below S(100) ≈ 4e-42) maps to the documented sentinel
/// `f64::INFINITY`; S above S(1e-8) ≈ 19.4 cannot be bracketed and errors.
pub fn entropy_to_beta(s: f64) -> Result<f64> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::DomainError(format!(
            "entropy must be a nonnegative real, got {s}"
        )));
    }
    let (lo, hi) = BETA_BRACKET;
    if s <= bose_entropy(hi) {
        return Ok(f64::INFINITY);
    }
    if s > bose_entropy(lo) {
        return Err(Error::NoConvergence(format!(
            "entropy {s} exceeds the invertible bracket (max ≈ {:.3})",
            bose_entropy(lo)
        )));
    }
    // S decreases in β, so it increases toward the lower log endpoint.
    let mut llo = lo.ln();
    let mut lhi = hi.ln();
    for _ in 0..200 {
        let mid = 0.5 * (llo + lhi);
        if bose_entropy(mid.exp()) > s {
            llo = mid;
        } else {
            lhi = mid;
        }
    }
    let beta = (0.5 * (llo + lhi)).exp();
    let residual = (bose_entropy(beta) - s).abs();
    if residual > 1e-10 {
        return Err(Error::NoConvergence(format!(
            "bisection stalled at residual {residual:.3e} for S = {s}"
        )));
    }
    Ok(beta)
}

/// The entropy-indexed floor (ħ²/4)(1 + 2/(e^β - 1))² on
/// (ΔP)²(ΔQ)² - ¼⟨{P̃,Q̃}⟩², with β = entropyToBeta(S). Equals ħ²/4 exactly
/// at S = 0.
pub fn entropic_rhs(s: f64, hbar: f64) -> Result<f64> {
    if !(hbar > 0.0) {
        return Err(Error::DomainError(format!(
            "hbar must be positive, got {hbar}"
        )));
    }
    let beta = entropy_to_beta(s)?;
    if beta.is_infinite() {
        return Ok(hbar * hbar / 4.0);
    }
    let factor = 1.0 + 2.0 / (beta.exp() - 1.0);
    Ok(hbar * hbar / 4.0 * factor * factor)
}

fn ser_beta<S: Serializer>(beta: &f64, ser: S) -> std::result::Result<S::Ok, S::Error> {
    // Serializes the infinite sentinel as null in JSON.
    ser.serialize_f64(*beta)
}

/// Everything the purity/entropy certificates say about one (Q, P, ρ).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PurityBoundReport {
    pub mu: f64,
    pub phi: f64,
    #[serde(rename = "bastiaansRHS")]
    pub bastiaans_rhs: f64,
    #[serde(rename = "dmLHS")]
    pub dm_lhs: f64,
    #[serde(rename = "dmRHS")]
    pub dm_rhs: f64,
    #[serde(rename = "S")]
    pub entropy: f64,
    #[serde(serialize_with = "ser_beta")]
    pub beta: f64,
    #[serde(rename = "entropicRHS")]
    pub entropic_rhs: f64,
    pub satisfied: bool,
}

/// Evaluate the Bastiaans, purity (Φ), and entropic bounds for a
/// position/momentum pair on ρ.
pub fn purity_bound_report(
    q: &ComplexMatrix,
    p: &ComplexMatrix,
    rho: &DensityMatrix,
    hbar: f64,
) -> Result<PurityBoundReport> {
    let m = Moments::compute(q, p, rho)?;
    let mu = purity(rho).min(1.0);
    let phi = phi_of_mu(mu)?;
    let bast = bastiaans_rhs(mu, hbar)?;
    let dm_lhs = m.var_x * m.var_y - 0.25 * m.anti_mean * m.anti_mean;
    let dm_rhs = hbar * hbar / 4.0 * phi * phi;
    let entropy = von_neumann_entropy(rho);
    let beta = entropy_to_beta(entropy)?;
    let ent_rhs = entropic_rhs(entropy, hbar)?;

    let slack = 1e-9;
    let product = (m.var_x * m.var_y).sqrt();
    let satisfied =
        dm_lhs >= dm_rhs - slack && dm_lhs >= ent_rhs - slack && product >= bast - slack;

    Ok(PurityBoundReport {
        mu,
        phi,
        bastiaans_rhs: bast,
        dm_lhs,
        dm_rhs,
        entropy,
        beta,
        entropic_rhs: ent_rhs,
        satisfied,
    })
}

/// Field-by-field comparison of the two evaluation routes for an entangled
/// state: A-side observables on |Ψ⟩ directly versus on ρ_A = tr_B |Ψ⟩⟨Ψ|.
#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EquivalenceReport {
    pub joint: UncertaintyReport,
    pub reduced: UncertaintyReport,
    pub max_abs_diff: f64,
}

pub fn equivalence_check(
    psi: &BipartiteState,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
) -> Result<EquivalenceReport> {
    let joint = evaluate(x, y, psi)?;
    let rho_a = partial_trace_b(psi)?;
    let reduced = evaluate(x, y, &rho_a)?;
    let fields = [
        (joint.mean_x, reduced.mean_x),
        (joint.mean_y, reduced.mean_y),
        (joint.var_x, reduced.var_x),
        (joint.var_y, reduced.var_y),
        (joint.hur_rhs, reduced.hur_rhs),
        (joint.sr_rhs, reduced.sr_rhs),
        (joint.hur_gap, reduced.hur_gap),
        (joint.sr_gap, reduced.sr_gap),
    ];
    let max_abs_diff = fields
        .iter()
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    Ok(EquivalenceReport {
        joint,
        reduced,
        max_abs_diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci;
    use crate::models::FockSystem;

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![c(0.0), c(1.0), c(1.0), c(0.0)]).unwrap()
    }

    fn sigma_y() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![c(0.0), ci(-1.0), ci(1.0), c(0.0)]).unwrap()
    }

    #[test]
    fn hur_curve_for_qubit_ground_state() {
        let rho = DensityMatrix::new(ComplexMatrix::diagonal(&[1.0, 0.0])).unwrap();
        let curve = d_curve(&sigma_x(), &sigma_y(), &rho, BoundKind::Hur).unwrap();
        let gm = curve.minimizer_point();
        assert_eq!(gm.re, 0.0);
        assert!((gm.im - 1.0).abs() < 1e-14);
        assert!(curve.minimizer_value().abs() < 1e-14);
        // Numerical second difference matches the closed-form curvature.
        let h = 1e-4;
        let num = (curve.eval_hur(1.0 + h) - 2.0 * curve.eval_hur(1.0)
            + curve.eval_hur(1.0 - h))
            / (h * h);
        assert!((num - curve.curvature()).abs() < 1e-6);
        assert!((curve.curvature() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn maximally_mixed_qubit_curve() {
        let rho = DensityMatrix::new(ComplexMatrix::diagonal(&[0.5, 0.5])).unwrap();
        let curve = d_curve(&sigma_x(), &sigma_y(), &rho, BoundKind::Hur).unwrap();
        assert!(curve.minimizer_point().norm() < 1e-14);
        assert!((curve.minimizer_value() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fock_ground_state_sr_curve() {
        let f = FockSystem::unit(60).unwrap();
        let rho = DensityMatrix::from_pure(&f.number_state(0).unwrap()).unwrap();
        let curve = d_curve(&f.position(), &f.momentum(), &rho, BoundKind::Sr).unwrap();
        let gm = curve.minimizer_point();
        assert!(gm.re.abs() < 1e-12);
        assert!((gm.im - 1.0).abs() < 1e-12);
        assert!(curve.minimizer_value().abs() < 1e-12);
    }

    #[test]
    fn trace_identity_holds() {
        // Mixed qubit state with off-axis Bloch vector.
        let m = ComplexMatrix::new(
            2,
            2,
            vec![c(0.65), C64::new(0.1, -0.2), C64::new(0.1, 0.2), c(0.35)],
        )
        .unwrap();
        let rho = DensityMatrix::new(m).unwrap();
        for kind in [BoundKind::Hur, BoundKind::Sr] {
            let cop = saturator(&sigma_x(), &sigma_y(), &rho, kind).unwrap();
            let tr = cop.trace_against(&rho).unwrap();
            assert!(
                (tr - cop.d_min()).abs() < 1e-12,
                "{kind:?}: trace {tr} vs closed {}",
                cop.d_min()
            );
        }
    }

    #[test]
    fn minimum_state_condition_cases() {
        let f = FockSystem::unit(60).unwrap();
        let x = f.position();
        let p = f.momentum();

        // Pure ground state saturates.
        let pure = DensityMatrix::from_pure(&f.number_state(0).unwrap()).unwrap();
        let cop = saturator(&x, &p, &pure, BoundKind::Sr).unwrap();
        let rep = minimum_state_condition(&cop, &pure, 1e-6).unwrap();
        assert!(rep.saturates);
        assert!(rep.trace_value.abs() < 1e-10);

        // ½|0⟩⟨0| + ½|1⟩⟨1| does not: Γ = i/2 and C|1⟩ has norm √1.375.
        let mix = DensityMatrix::from_mixture(&[
            (0.5, f.number_state(0).unwrap()),
            (0.5, f.number_state(1).unwrap()),
        ])
        .unwrap();
        let cop = saturator(&x, &p, &mix, BoundKind::Sr).unwrap();
        assert!((cop.gamma() - ci(0.5)).norm() < 1e-12);
        let rep = minimum_state_condition(&cop, &mix, 1e-8).unwrap();
        assert!(!rep.saturates);
        let worst = rep
            .components
            .iter()
            .map(|r| r.residual)
            .fold(0.0f64, f64::max);
        assert!((worst - 1.375f64.sqrt()).abs() < 1e-10);

        // Maximally mixed qubit: tr ρ C†C = 1.
        let rho = DensityMatrix::new(ComplexMatrix::diagonal(&[0.5, 0.5])).unwrap();
        let cop = saturator(&sigma_x(), &sigma_y(), &rho, BoundKind::Hur).unwrap();
        let rep = minimum_state_condition(&cop, &rho, 1e-8).unwrap();
        assert!(!rep.saturates);
        assert!((rep.trace_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phi_and_bastiaans_values() {
        assert_eq!(phi_of_mu(1.0).unwrap(), 1.0);
        assert!((phi_of_mu(0.5).unwrap() - 1.8382226383686147).abs() < 1e-15);
        assert!((phi_of_mu(8.0 / 9.0).unwrap() - 1.1009252125773314).abs() < 1e-15);
        assert!(phi_of_mu(0.0).is_err());
        assert!(phi_of_mu(1.2).is_err());

        assert!((bastiaans_rhs(8.0 / 9.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((bastiaans_rhs(1.0, 1.0).unwrap() - 4.0 / 9.0).abs() < 1e-15);
        assert!((bastiaans_rhs(0.5, 1.0).unwrap() - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn phi_never_dips_below_one() {
        for i in 1..=10_000 {
            let mu = i as f64 / 10_000.0;
            assert!(phi_of_mu(mu).unwrap() >= 1.0 - 1e-15, "Φ({mu}) < 1");
        }
    }

    #[test]
    fn entropy_round_trips() {
        assert!((bose_entropy(1.0) - 1.0406518522564083).abs() < 1e-14);
        assert!(entropy_to_beta(0.0).unwrap().is_infinite());
        let beta = entropy_to_beta(1.0406518522564083).unwrap();
        assert!((beta - 1.0).abs() < 1e-8);
        for s in [1e-6, 1e-3, 0.5, std::f64::consts::LN_2, 2.0, 10.0] {
            let b = entropy_to_beta(s).unwrap();
            assert!(
                (bose_entropy(b) - s).abs() < 1e-10,
                "round trip fails at S = {s}"
            );
        }
        assert!(entropy_to_beta(-0.5).is_err());
        assert!(entropy_to_beta(25.0).is_err());
    }

    #[test]
    fn entropic_rhs_values() {
        assert_eq!(entropic_rhs(0.0, 1.0).unwrap(), 0.25);
        let v = entropic_rhs(1.0406518522564083, 1.0).unwrap();
        assert!((v - 1.1706735942077924).abs() < 1e-8);
        let v2 = entropic_rhs(std::f64::consts::LN_2, 1.0).unwrap();
        assert!(v2 >= 0.25);
    }

    #[test]
    fn thermal_states_respect_all_bounds() {
        let f = FockSystem::unit(60).unwrap();
        for beta in [0.7, 1.0, 2.0, 5.0] {
            let rho = f.gibbs_state(beta).unwrap();
            let rep = purity_bound_report(&f.position(), &f.momentum(), &rho, 1.0).unwrap();
            assert!(rep.satisfied, "β = {beta}: {rep:?}");
            assert!(rep.dm_lhs >= rep.dm_rhs - 1e-9);
            // Thermal family: dmLHS = (ħ²/4)/μ², an identity worth pinning.
            assert!((rep.dm_lhs - 0.25 / (rep.mu * rep.mu)).abs() < 1e-8);
        }
    }

    #[test]
    fn equivalence_on_bell_state() {
        let bell =
            BipartiteState::new(2, 2, vec![c(1.0), c(0.0), c(0.0), c(1.0)]).unwrap();
        let rep = equivalence_check(&bell, &sigma_x(), &sigma_y()).unwrap();
        assert!(rep.max_abs_diff < 1e-12);
        assert!((rep.joint.var_x * rep.joint.var_y - 1.0).abs() < 1e-12);
        assert!(rep.joint.hur_rhs.abs() < 1e-14);
    }

    #[test]
    fn purity_report_serialization_names() {
        let f = FockSystem::unit(20).unwrap();
        let rho = f.gibbs_state(1.0).unwrap();
        let rep = purity_bound_report(&f.position(), &f.momentum(), &rho, 1.0).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        for key in ["mu", "phi", "bastiaansRHS", "dmLHS", "dmRHS", "\"S\"", "beta", "entropicRHS", "satisfied"] {
            assert!(json.contains(key), "missing {key} in {json}");
        }
    }
}
