//! Property tests: algebraic identities the numerics must respect on random
//! states, not just on the hand-picked fixtures in the unit tests.

use proptest::prelude::*;

use minunc::linalg::{
    commutator, partial_trace_b, purity, schmidt, variance, BipartiteState, ComplexMatrix,
    StateVector, DEFAULT_RANK_TOL,
};
use minunc::mixedstate::{bose_entropy, d_curve, entropy_to_beta};
use minunc::models::SpinSystem;
use minunc::uncertainty::{
    annihilation_residual, evaluate, gamma_minimizer, saturation_analysis, two_branch_product,
    two_branch_variance, BoundKind, Moments, TwoBranchState, Verdict,
};
use minunc::{c, ci, C64};

fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![c(0.0), c(1.0), c(1.0), c(0.0)]).unwrap()
}

fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![c(0.0), ci(-1.0), ci(1.0), c(0.0)]).unwrap()
}

fn arb_c64() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
}

fn arb_state(dim: usize) -> impl Strategy<Value = StateVector> {
    proptest::collection::vec(arb_c64(), dim).prop_filter_map("norm too small", |amps| {
        let n: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-3 {
            Some(StateVector::new(amps).unwrap())
        } else {
            None
        }
    })
}

fn arb_bipartite(dim_a: usize, dim_b: usize) -> impl Strategy<Value = BipartiteState> {
    proptest::collection::vec(arb_c64(), dim_a * dim_b).prop_filter_map(
        "norm too small",
        move |amps| {
            let n: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n > 1e-3 {
                Some(BipartiteState::new(dim_a, dim_b, amps).unwrap())
            } else {
                None
            }
        },
    )
}

fn arb_hermitian(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec(arb_c64(), dim * dim).prop_map(move |entries| {
        let m = ComplexMatrix::new(dim, dim, entries).unwrap();
        m.add(&m.adjoint()).unwrap().scale(c(0.5))
    })
}

fn arb_two_branch(dim: usize) -> impl Strategy<Value = TwoBranchState> {
    (
        0.05f64..0.95,
        0.0f64..std::f64::consts::TAU,
        arb_state(dim),
        arb_state(dim),
    )
        .prop_map(|(w, phase, psi1, psi2)| {
            let c1 = c(w.sqrt());
            let c2 = C64::from_polar((1.0 - w).sqrt(), phase);
            TwoBranchState::new(c1, psi1, c2, psi2).unwrap()
        })
}

proptest! {
    // Schmidt decomposition round-trips the amplitude matrix and its
    // coefficients carry unit total weight.
    #[test]
    fn schmidt_roundtrip(state in arb_bipartite(4, 6)) {
        let dec = schmidt(&state, DEFAULT_RANK_TOL).unwrap();
        prop_assert!(dec.reconstruction_error(&state) < 1e-10);
        let total: f64 = dec.coefficients.iter().map(|ck| ck * ck).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        // Descending order.
        for w in dec.coefficients.windows(2) {
            prop_assert!(w[0] >= w[1] - 1e-15);
        }
    }

    // Reduced-state purity equals the fourth power sum of the Schmidt
    // coefficients.
    #[test]
    fn purity_is_coefficient_quartic_sum(state in arb_bipartite(3, 5)) {
        let rho = partial_trace_b(&state).unwrap();
        let dec = schmidt(&state, DEFAULT_RANK_TOL).unwrap();
        let quartic: f64 = dec.coefficients.iter().map(|ck| ck.powi(4)).sum();
        prop_assert!((purity(&rho) - quartic).abs() < 1e-10);
    }

    // Moments of A-side observables agree whether computed from the joint
    // amplitudes or from the reduced density matrix.
    #[test]
    fn marginal_moments_agree(
        state in arb_bipartite(3, 4),
        x in arb_hermitian(3),
        y in arb_hermitian(3),
    ) {
        let joint = Moments::compute(&x, &y, &state).unwrap();
        let rho = partial_trace_b(&state).unwrap();
        let reduced = Moments::compute(&x, &y, &rho).unwrap();
        prop_assert!((joint.mean_x - reduced.mean_x).abs() < 1e-10);
        prop_assert!((joint.var_x - reduced.var_x).abs() < 1e-10);
        prop_assert!((joint.comm_mean - reduced.comm_mean).abs() < 1e-10);
        prop_assert!((joint.anti_mean - reduced.anti_mean).abs() < 1e-10);
    }

    // The stronger bound dominates the weaker one, and every state obeys it.
    #[test]
    fn sr_dominates_hur_and_holds(
        state in arb_bipartite(2, 3),
    ) {
        let rep = evaluate(&sigma_x(), &sigma_y(), &state).unwrap();
        prop_assert!(rep.sr_rhs >= rep.hur_rhs - 1e-12);
        prop_assert!(rep.product() >= rep.sr_rhs - 1e-9);
        prop_assert!(rep.product() >= rep.hur_rhs - 1e-9);
    }

    // The two-branch variance and product formulas match a direct evaluation
    // on the embedded bipartite state.
    #[test]
    fn two_branch_formulas_match_direct_evaluation(s in arb_two_branch(3)) {
        let sys = SpinSystem::new(2, 1.0).unwrap();
        let (x, y) = (sys.jx(), sys.jy());
        let joint = s.to_bipartite();
        let rep = evaluate(&x, &y, &joint).unwrap();
        let vx = two_branch_variance(&x, &s).unwrap();
        let vy = two_branch_variance(&y, &s).unwrap();
        prop_assert!((vx - rep.var_x).abs() < 1e-10);
        prop_assert!((vy - rep.var_y).abs() < 1e-10);
        let prod = two_branch_product(&x, &y, &s).unwrap();
        prop_assert!((prod - rep.product()).abs() < 1e-10);
        prop_assert!((prod - vx * vy).abs() < 1e-10);
    }

    // Weighted annihilation residuals at the optimal Γ reproduce the gap:
    // Σ wᵢ ‖(X̃ + Γ Ỹ)ψᵢ‖² = gap / varY.
    #[test]
    fn residuals_reconstruct_the_gap(s in arb_two_branch(2)) {
        let (x, y) = (sigma_x(), sigma_y());
        let joint = s.to_bipartite();
        let m = Moments::compute(&x, &y, &joint).unwrap();
        prop_assume!(m.var_y > 1e-6);
        let gamma = gamma_minimizer(&x, &y, &joint, BoundKind::Sr).unwrap();
        let rep = evaluate(&x, &y, &joint).unwrap();
        let (w1, w2) = s.weights();
        let r1 = annihilation_residual(&x, &y, gamma, m.mean_x, m.mean_y, s.psi1()).unwrap();
        let r2 = annihilation_residual(&x, &y, gamma, m.mean_x, m.mean_y, s.psi2()).unwrap();
        let weighted = w1 * r1 * r1 + w2 * r2 * r2;
        prop_assert!(
            (weighted - rep.sr_gap / m.var_y).abs() < 1e-9,
            "weighted {} vs gap/varY {}",
            weighted,
            rep.sr_gap / m.var_y
        );
    }

    // The Heisenberg-optimal Γ is purely imaginary by construction.
    #[test]
    fn hur_gamma_is_purely_imaginary(state in arb_state(3)) {
        let sys = SpinSystem::new(2, 1.0).unwrap();
        let m = Moments::compute(&sys.jx(), &sys.jy(), &state).unwrap();
        prop_assume!(m.var_y > 1e-6);
        let gamma = gamma_minimizer(&sys.jx(), &sys.jy(), &state, BoundKind::Hur).unwrap();
        prop_assert_eq!(gamma.re, 0.0);
    }

    // D(Γ) is a nonnegative quadratic whose analytic minimizer beats every
    // sampled point, with curvature 2 varY in each real direction.
    #[test]
    fn variational_curve_minimizer_is_global(state in arb_state(3)) {
        let sys = SpinSystem::new(2, 1.0).unwrap();
        let (x, y) = (sys.jx(), sys.jy());
        let m = Moments::compute(&x, &y, &state).unwrap();
        prop_assume!(m.var_y > 1e-6);
        let curve = d_curve(&x, &y, &state, BoundKind::Sr).unwrap();
        let dmin = curve.minimizer_value();
        prop_assert!(dmin >= -1e-10);
        let g0 = curve.minimizer_point();
        for i in -4i32..=4 {
            for j in -4i32..=4 {
                let gamma = g0 + C64::new(0.35 * i as f64, 0.35 * j as f64);
                let v = curve.eval_sr(gamma);
                prop_assert!(v >= dmin - 1e-10);
                // Quadratic expansion is exact: D(Γ) = Dmin + varY |Γ-Γ₀|².
                let expected = dmin + m.var_y * (gamma - g0).norm_sqr();
                prop_assert!((v - expected).abs() < 1e-9);
            }
        }
    }

    // Full-Schmidt-rank states with a healthy coefficient floor are never
    // flagged saturable for genuinely noncommuting observables.
    #[test]
    fn full_rank_states_are_not_saturable(
        seed in arb_bipartite(2, 2),
        t in 0.3f64..0.7,
        hur in proptest::bool::ANY,
    ) {
        let dec = schmidt(&seed, DEFAULT_RANK_TOL).unwrap();
        let coeffs = [t.sqrt(), (1.0 - t).sqrt()];
        let state = BipartiteState::from_schmidt(&coeffs, &dec.basis_a, &dec.basis_b).unwrap();
        let mode = if hur { BoundKind::Hur } else { BoundKind::Sr };
        let rep = saturation_analysis(&sigma_x(), &sigma_y(), &state, mode, 1e-6, DEFAULT_RANK_TOL)
            .unwrap();
        prop_assert_eq!(rep.rank, 2);
        prop_assert_eq!(rep.verdict, Verdict::NotSaturable);
        prop_assert!(rep.report.gap(mode) > 1e-6);
    }

    // Thermal entropy inverts cleanly across the whole usable range.
    #[test]
    fn entropy_round_trips(s in 1e-4f64..15.0) {
        let beta = entropy_to_beta(s).unwrap();
        prop_assert!(beta.is_finite());
        prop_assert!((bose_entropy(beta) - s).abs() < 1e-9);
    }

    // Commutator means are consistent: ⟨i[X,Y]⟩ computed from the pair mean
    // equals a direct expectation of the commutator matrix.
    #[test]
    fn commutator_mean_matches_matrix_route(
        state in arb_state(3),
        x in arb_hermitian(3),
        y in arb_hermitian(3),
    ) {
        let m = Moments::compute(&x, &y, &state).unwrap();
        // i[X,Y] is Hermitian; its expectation is real.
        let icomm = commutator(&x, &y).unwrap().scale(ci(1.0));
        let direct = minunc::linalg::expectation(&icomm, &state).unwrap();
        prop_assert!((m.comm_mean - direct).abs() < 1e-10);
        let vx = variance(&x, &state).unwrap();
        prop_assert!((m.var_x - vx).abs() < 1e-12);
    }
}
