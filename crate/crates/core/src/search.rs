//! Numerical search for gap-minimizing entangled states.
//!
//! The optimizer is a plain Nelder–Mead simplex over real parametrizations
//! of the amplitude matrix, with a quadratic penalty keeping every
//! constrained Schmidt coefficient above the floor δ. Restarts ramp the
//! penalty weight ×10; every candidate is repaired onto the constraint set
//! (clamp the coefficients, renormalize, rebuild) and re-scored by an
//! independent `evaluate` call, so the reported gap never depends on the
//! optimizer's internal bookkeeping.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    commutator, schmidt, BipartiteState, ComplexMatrix, OBSERVABLE_HERMITICITY_TOL,
    DEFAULT_RANK_TOL,
};
use crate::uncertainty::{evaluate, BoundKind};
use crate::C64;

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchProblem {
    pub dim_a: usize,
    pub dim_b: usize,
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub mode: BoundKind,
    /// Schmidt-coefficient floor δ.
    pub min_schmidt_coeff: f64,
    #[serde(default = "defaults::seed")]
    pub seed: u64,
    #[serde(default = "defaults::restarts")]
    pub restarts: usize,
    /// Objective-evaluation budget per restart.
    #[serde(default = "defaults::max_iters")]
    pub max_iters: usize,
    /// Simplex convergence tolerance on the objective spread.
    #[serde(default = "defaults::tolerance")]
    pub tolerance: f64,
}

mod defaults {
    pub fn seed() -> u64 {
        42
    }
    pub fn restarts() -> usize {
        6
    }
    pub fn max_iters() -> usize {
        6000
    }
    pub fn tolerance() -> f64 {
        1e-10
    }
}

impl SearchProblem {
    pub fn new(
        dim_a: usize,
        dim_b: usize,
        x: ComplexMatrix,
        y: ComplexMatrix,
        mode: BoundKind,
        min_schmidt_coeff: f64,
    ) -> Result<Self> {
        let p = Self {
            dim_a,
            dim_b,
            x,
            y,
            mode,
            min_schmidt_coeff,
            seed: defaults::seed(),
            restarts: defaults::restarts(),
            max_iters: defaults::max_iters(),
            tolerance: defaults::tolerance(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts.max(1);
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters.max(50);
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.dim_a < 2 || self.dim_b < 2 {
            return Err(Error::DimensionMismatch(
                "search needs dim_a, dim_b ≥ 2".into(),
            ));
        }
        if self.x.rows() != self.dim_a || !self.x.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "X must be {0}×{0}",
                self.dim_a
            )));
        }
        if self.y.rows() != self.dim_a || !self.y.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Y must be {0}×{0}",
                self.dim_a
            )));
        }
        self.x.require_hermitian(OBSERVABLE_HERMITICITY_TOL)?;
        self.y.require_hermitian(OBSERVABLE_HERMITICITY_TOL)?;
        if commutator(&self.x, &self.y)?.max_abs() <= 1e-10 {
            return Err(Error::DomainError(
                "observables commute; the gap question is empty".into(),
            ));
        }
        let m = self.dim_a.min(self.dim_b) as f64;
        if !(self.min_schmidt_coeff >= 0.0) || self.min_schmidt_coeff >= 1.0 / m.sqrt() {
            return Err(Error::DomainError(format!(
                "floor δ = {} must lie in [0, 1/√{m})",
                self.min_schmidt_coeff
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchResult {
    pub best_gap: f64,
    pub best_state: BipartiteState,
    /// Schmidt coefficients of the best state, descending.
    pub schmidt_profile: Vec<f64>,
    /// Objective evaluations spent, all restarts combined.
    pub iterations: usize,
    /// Whether any restart's simplex met the spread tolerance.
    pub converged: bool,
    /// Cumulative best gap after each restart (non-increasing).
    pub restart_best_gaps: Vec<f64>,
}

/// Minimize the chosen gap over all unit states of H_A ⊗ H_B whose Schmidt
/// coefficients all sit at or above δ (full Schmidt rank when δ > 0).
pub fn minimize_gap(p: &SearchProblem) -> Result<SearchResult> {
    p.validate()?;
    let n_params = 2 * p.dim_a * p.dim_b;
    let dim_a = p.dim_a;
    let dim_b = p.dim_b;
    let build = move |v: &[f64]| -> Result<BipartiteState> {
        let amps: Vec<C64> = v
            .chunks_exact(2)
            .map(|c| C64::new(c[0], c[1]))
            .collect();
        BipartiteState::new(dim_a, dim_b, amps)
    };
    run_search(p, n_params, p.dim_a.min(p.dim_b), &build)
}

/// Same search restricted to amplitude matrices of rank ≤ s via the
/// outer-product parametrization D = Σ_{k<s} u_k v_kᵀ; the floor applies to
/// the s leading Schmidt coefficients.
pub fn saturation_hunt(p: &SearchProblem, s: usize) -> Result<SearchResult> {
    p.validate()?;
    if s == 0 || s >= p.dim_a || s > p.dim_b {
        return Err(Error::DomainError(format!(
            "rank target s = {s} must satisfy 1 ≤ s < dim_a and s ≤ dim_b"
        )));
    }
    let m = s as f64;
    if p.min_schmidt_coeff >= 1.0 / m.sqrt() {
        return Err(Error::DomainError(format!(
            "floor δ = {} is infeasible for rank {s}",
            p.min_schmidt_coeff
        )));
    }
    let n_params = 2 * s * (p.dim_a + p.dim_b);
    let (dim_a, dim_b) = (p.dim_a, p.dim_b);
    let build = move |v: &[f64]| -> Result<BipartiteState> {
        let mut amps = vec![C64::new(0.0, 0.0); dim_a * dim_b];
        let stride = 2 * (dim_a + dim_b);
        for k in 0..s {
            let block = &v[k * stride..(k + 1) * stride];
            let (u, w) = block.split_at(2 * dim_a);
            for i in 0..dim_a {
                let ui = C64::new(u[2 * i], u[2 * i + 1]);
                for j in 0..dim_b {
                    let wj = C64::new(w[2 * j], w[2 * j + 1]);
                    amps[i * dim_b + j] += ui * wj;
                }
            }
        }
        BipartiteState::new(dim_a, dim_b, amps)
    };
    run_search(p, n_params, s, &build)
}

/// Clamp the first `constrained` Schmidt coefficients up to δ and
/// renormalize, moving newly deficient ones into the clamped set until the
/// floor holds exactly. Feasible because δ√constrained < 1.
fn repair_coefficients(coeffs: &[f64], constrained: usize, delta: f64) -> Vec<f64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    let m = constrained.min(c.len());
    // Each clamp-normalize pass shrinks the worst deficiency by roughly δ²,
    // so a few hundred passes push it below double precision.
    for _ in 0..500 {
        let norm: f64 = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut c {
            *x /= norm;
        }
        let deficient = c[..m].iter().any(|&x| x < delta - 1e-14);
        if !deficient {
            break;
        }
        for x in &mut c[..m] {
            if *x < delta {
                *x = delta;
            }
        }
    }
    c
}

fn run_search(
    p: &SearchProblem,
    n_params: usize,
    constrained: usize,
    build: &dyn Fn(&[f64]) -> Result<BipartiteState>,
) -> Result<SearchResult> {
    let delta = p.min_schmidt_coeff;
    let mode = p.mode;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);

    let mut total_iters = 0usize;
    let mut converged = false;
    let mut best: Option<(f64, BipartiteState, Vec<f64>)> = None;
    let mut restart_best_gaps = Vec::with_capacity(p.restarts);

    for restart in 0..p.restarts {
        let weight = 10.0 * 10f64.powi(restart as i32);
        let mut evals = 0usize;
        let mut objective = |v: &[f64]| -> f64 {
            evals += 1;
            let state = match build(v) {
                Ok(s) => s,
                Err(_) => return 1e9,
            };
            let rep = match evaluate(&p.x, &p.y, &state) {
                Ok(r) => r,
                Err(_) => return 1e9,
            };
            let dec = match schmidt(&state, DEFAULT_RANK_TOL) {
                Ok(d) => d,
                Err(_) => return 1e9,
            };
            let viol: f64 = dec
                .coefficients
                .iter()
                .take(constrained)
                .map(|&ck| (delta - ck).max(0.0).powi(2))
                .sum();
            rep.gap(mode) + weight * viol
        };

        let x0: Vec<f64> = (0..n_params).map(|_| rng.gen_range(-1.0..1.0)).collect();
        // Three simplex rounds at shrinking scales, each restarted from the
        // previous round's best vertex.
        let budget = p.max_iters / 3;
        let mut point = x0;
        let mut round_converged = false;
        for step in [0.5, 0.1, 0.02] {
            let (xb, _fb, conv) = nelder_mead(&mut objective, &point, step, budget, p.tolerance);
            point = xb;
            round_converged = conv;
        }
        total_iters += evals;
        converged |= round_converged;

        // Repair and re-score independently of the penalized objective.
        if let Ok(candidate) = build(&point) {
            if let Ok(dec) = schmidt(&candidate, DEFAULT_RANK_TOL) {
                let repaired_coeffs = repair_coefficients(&dec.coefficients, constrained, delta);
                let rebuilt = BipartiteState::from_schmidt(
                    &repaired_coeffs,
                    &dec.basis_a,
                    &dec.basis_b,
                );
                if let Ok(state) = rebuilt {
                    if let (Ok(rep), Ok(dec2)) =
                        (evaluate(&p.x, &p.y, &state), schmidt(&state, DEFAULT_RANK_TOL))
                    {
                        let gap = rep.gap(mode);
                        let better = match &best {
                            None => true,
                            Some((g, _, _)) => gap < *g,
                        };
                        if better {
                            best = Some((gap, state, dec2.coefficients));
                        }
                    }
                }
            }
        }
        if let Some((g, _, _)) = &best {
            restart_best_gaps.push(*g);
        }
    }

    match best {
        Some((best_gap, best_state, schmidt_profile)) => Ok(SearchResult {
            best_gap,
            best_state,
            schmidt_profile,
            iterations: total_iters,
            converged,
            restart_best_gaps,
        }),
        None => Err(Error::NoProgress(
            "no restart produced a feasible state".into(),
        )),
    }
}

/// Textbook Nelder–Mead (reflection 1, expansion 2, contraction ½, shrink ½)
/// on f: ℝⁿ → ℝ. Returns (best point, best value, converged).
fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    x0: &[f64],
    step: f64,
    max_evals: usize,
    ftol: f64,
) -> (Vec<f64>, f64, bool) {
    let n = x0.len();
    let mut evals = 0usize;
    let call = |f: &mut F, x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        f(x)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = call(f, x0, &mut evals);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = call(f, &x, &mut evals);
        simplex.push((x, v));
    }

    let mut converged = false;
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        if spread.abs() <= ftol * (1.0 + simplex[0].1.abs()) {
            converged = true;
            break;
        }

        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0f64; n];
        for (x, _) in simplex.iter().take(n) {
            for (ci, xi) in centroid.iter_mut().zip(x) {
                *ci += xi / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
            a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect()
        };

        let reflected = lerp(&centroid, &worst.0, -1.0);
        let fr = call(f, &reflected, &mut evals);
        if fr < simplex[0].1 {
            let expanded = lerp(&centroid, &worst.0, -2.0);
            let fe = call(f, &expanded, &mut evals);
            simplex[n] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let contracted = if fr < worst.1 {
                lerp(&centroid, &reflected, 0.5)
            } else {
                lerp(&centroid, &worst.0, 0.5)
            };
            let fc = call(f, &contracted, &mut evals);
            if fc < worst.1.min(fr) {
                simplex[n] = (contracted, fc);
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    entry.0 = lerp(&best, &entry.0, 0.5);
                    entry.1 = call(f, &entry.0, &mut evals);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    (simplex[0].0.clone(), simplex[0].1, converged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uncertainty::{saturation_analysis, Verdict};
    use crate::{c, ci};

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![c(0.0), c(1.0), c(1.0), c(0.0)]).unwrap()
    }

    fn sigma_y() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![c(0.0), ci(-1.0), ci(1.0), c(0.0)]).unwrap()
    }

    #[test]
    fn nelder_mead_minimizes_a_quadratic() {
        let mut f = |v: &[f64]| (v[0] - 3.0).powi(2) + 2.0 * (v[1] + 1.0).powi(2);
        let (x, fv, conv) = nelder_mead(&mut f, &[0.0, 0.0], 0.5, 2000, 1e-14);
        assert!(conv);
        assert!(fv < 1e-12);
        assert!((x[0] - 3.0).abs() < 1e-6);
        assert!((x[1] + 1.0).abs() < 1e-6);
    }

    #[test]
    fn commuting_pair_is_rejected() {
        let x = ComplexMatrix::diagonal(&[1.0, -1.0]);
        let y = ComplexMatrix::diagonal(&[2.0, 0.5]);
        assert!(matches!(
            SearchProblem::new(2, 2, x, y, BoundKind::Sr, 0.3),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn floor_above_feasibility_is_rejected() {
        assert!(SearchProblem::new(
            2,
            2,
            sigma_x(),
            sigma_y(),
            BoundKind::Sr,
            0.8
        )
        .is_err());
    }

    #[test]
    fn qubit_floor_pins_the_gap_at_the_closed_form() {
        // For (σx, σy) on 2×2 the SR gap is 4c₁²c₂²; under c₂ ≥ δ its
        // minimum is 4δ²(1-δ²).
        let p = SearchProblem::new(2, 2, sigma_x(), sigma_y(), BoundKind::Sr, 0.3)
            .unwrap()
            .with_seed(11)
            .with_restarts(4)
            .with_max_iters(4000);
        let r = minimize_gap(&p).unwrap();
        let g0 = 4.0 * 0.09 * (1.0 - 0.09);
        assert!(r.best_gap >= g0 - 1e-9, "gap {} below G₀ {g0}", r.best_gap);
        assert!(r.best_gap <= g0 + 1e-3, "optimizer stalled at {}", r.best_gap);
        let min_coeff = r.schmidt_profile.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(min_coeff >= 0.3 - 1e-10);
        // Monotone restart records.
        for w in r.restart_best_gaps.windows(2) {
            assert!(w[1] <= w[0] + 1e-15);
        }
    }

    #[test]
    fn unconstrained_qubit_search_reaches_product_states() {
        let p = SearchProblem::new(2, 2, sigma_x(), sigma_y(), BoundKind::Sr, 0.0)
            .unwrap()
            .with_seed(5)
            .with_restarts(4)
            .with_max_iters(6000);
        let r = minimize_gap(&p).unwrap();
        assert!(r.best_gap.abs() < 1e-5, "gap {}", r.best_gap);
    }

    #[test]
    fn rank_one_hunt_finds_coherent_states() {
        let p = SearchProblem::new(2, 2, sigma_x(), sigma_y(), BoundKind::Hur, 0.0)
            .unwrap()
            .with_seed(3)
            .with_restarts(4)
            .with_max_iters(6000);
        let r = saturation_hunt(&p, 1).unwrap();
        assert!(r.best_gap.abs() < 1e-6, "gap {}", r.best_gap);
        let rep = saturation_analysis(
            &sigma_x(),
            &sigma_y(),
            &r.best_state,
            BoundKind::Hur,
            1e-3,
            DEFAULT_RANK_TOL,
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::Saturable);
    }

    #[test]
    fn rank_two_hunt_rediscovers_a_saturating_family() {
        // Cross-coupled pair on C³ with a two-dimensional common
        // eigenspace-like structure: every c₁|e₀⟩|b₀⟩ + c₂|e₁⟩|b₁⟩ built on
        // the right A-side vectors saturates the SR bound, so the hunt
        // should drive the gap to numerical zero while the floor keeps the
        // state genuinely rank 2.
        let x = ComplexMatrix::new(
            3,
            3,
            vec![
                c(1.0),
                c(0.0),
                c(0.6),
                c(0.0),
                c(-1.0),
                ci(0.8),
                c(0.6),
                ci(-0.8),
                c(0.0),
            ],
        )
        .unwrap();
        let y = ComplexMatrix::new(
            3,
            3,
            vec![
                c(2.0),
                c(0.0),
                c(0.3),
                c(0.0),
                c(1.0),
                ci(0.4),
                c(0.3),
                ci(-0.4),
                c(0.0),
            ],
        )
        .unwrap();
        let p = SearchProblem::new(3, 2, x.clone(), y.clone(), BoundKind::Sr, 0.3)
            .unwrap()
            .with_seed(17)
            .with_restarts(6)
            .with_max_iters(20000);
        let r = saturation_hunt(&p, 2).unwrap();
        assert!(r.best_gap < 1e-6, "hunt stalled at gap {}", r.best_gap);
        assert!(r.schmidt_profile[1] >= 0.3 - 1e-10);
        let rep = saturation_analysis(&x, &y, &r.best_state, BoundKind::Sr, 1e-4, DEFAULT_RANK_TOL)
            .unwrap();
        assert_eq!(rep.verdict, Verdict::Saturable);
        assert_eq!(rep.rank, 2);
    }

    #[test]
    fn problem_and_result_round_trip_as_json() {
        let p = SearchProblem::new(2, 2, sigma_x(), sigma_y(), BoundKind::Sr, 0.3)
            .unwrap()
            .with_seed(123)
            .with_restarts(2)
            .with_max_iters(1000);
        let text = serde_json::to_string(&p).unwrap();
        let back: SearchProblem = serde_json::from_str(&text).unwrap();
        let a = minimize_gap(&p).unwrap();
        let b = minimize_gap(&back).unwrap();
        assert_eq!(a.best_gap.to_bits(), b.best_gap.to_bits());

        // Defaults fill in when the optional knobs are omitted.
        let sparse: SearchProblem = serde_json::from_str(
            r#"{"dimA":2,"dimB":2,"x":[[[0,0],[1,0]],[[1,0],[0,0]]],
                "y":[[[0,0],[0,-1]],[[0,1],[0,0]]],"mode":"sr","minSchmidtCoeff":0.25}"#,
        )
        .unwrap();
        assert_eq!(sparse.restarts, 6);
        assert_eq!(sparse.max_iters, 6000);

        let result_json = serde_json::to_value(&a).unwrap();
        assert!(result_json["bestGap"].is_number());
        assert!(result_json["restartBestGaps"].is_array());
        assert!(result_json["schmidtProfile"].is_array());
        assert!(result_json["bestState"]["dimA"].is_number());
    }

    #[test]
    fn determinism_at_fixed_seed() {
        let make = || {
            SearchProblem::new(2, 2, sigma_x(), sigma_y(), BoundKind::Sr, 0.3)
                .unwrap()
                .with_seed(99)
                .with_restarts(2)
                .with_max_iters(1500)
        };
        let a = minimize_gap(&make()).unwrap();
        let b = minimize_gap(&make()).unwrap();
        assert_eq!(a.best_gap.to_bits(), b.best_gap.to_bits());
        assert_eq!(a.iterations, b.iterations);
        assert_eq!(a.restart_best_gaps.len(), b.restart_best_gaps.len());
        for (x, y) in a.restart_best_gaps.iter().zip(&b.restart_best_gaps) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}
