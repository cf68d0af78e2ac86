//! Cross-module invariants: operator-norm algebra, oracle equivalences,
//! spectral certificates, and scenario-level separations, plus randomized
//! property checks.

use c0semi_core::*;
use ndarray::Array2;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn random_operator(rng: &mut ChaCha8Rng, dim: usize) -> OperatorMatrix {
    let entries = Array2::from_shape_fn((dim, dim), |_| {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    OperatorMatrix::from_entries(entries).unwrap()
}

#[test]
fn operator_norm_is_submultiplicative_under_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    for _ in 0..1000 {
        let dim = rng.gen_range(2..9);
        let a = random_operator(&mut rng, dim);
        let b = random_operator(&mut rng, dim);
        let ab = a.compose(&b).unwrap();
        for space in [SpaceTag::C0, SpaceTag::L1] {
            let na = a.op_norm(space).unwrap().value;
            let nb = b.op_norm(space).unwrap().value;
            let nab = ab.op_norm(space).unwrap().value;
            assert!(
                nab <= na * nb * (1.0 + 1e-12) + 1e-12,
                "{space:?}: {nab} > {na} * {nb}"
            );
        }
    }
}

#[test]
fn closed_form_norm_is_exactly_one_for_all_times_and_dims() {
    for dim in [2, 3, 8, 33, 64] {
        let s = SemigroupEvaluator::harmonic_closed_form(dim).unwrap();
        for &t in &[0.0, 1e-6, 0.25, 1.0, 3.5, 12.0, 100.0] {
            let norm = s.evaluate(t).unwrap().op_norm(SpaceTag::C0).unwrap().value;
            assert!((norm - 1.0).abs() <= 1e-12, "dim={dim} t={t}: {norm}");
        }
    }
}

#[test]
fn sampled_isometry_evidence_dominates_any_basis_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for trial in 0..200 {
        let dim = rng.gen_range(2..8);
        let op = random_operator(&mut rng, dim);
        for space in [SpaceTag::C0, SpaceTag::L1, SpaceTag::L2] {
            let mut basis_worst = 0.0f64;
            for k in 0..dim {
                let ek = TruncVector::basis(k, dim, space).unwrap();
                let image = op.apply(&ek).unwrap();
                basis_worst = basis_worst.max((image.norm() - 1.0).abs());
            }
            let check = isometry_check_sampled(&op, space, 20, trial as u64, &tol()).unwrap();
            assert!(
                check.worst_deviation >= basis_worst - 1e-15,
                "{space:?}: sampled {} < basis {}",
                check.worst_deviation,
                basis_worst
            );
        }
    }
}

#[test]
fn diagonal_and_signed_permutation_operators_never_violate_disjointness() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let dim = rng.gen_range(3..10);
        let diag: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::from_polar(rng.gen_range(0.1..2.0), rng.gen_range(-3.0..3.0)))
            .collect();
        let d = OperatorMatrix::diagonal(&diag).unwrap();
        assert!(disjointness_violation_witness(&d, &tol())
            .unwrap()
            .is_none());

        let mut perm: Vec<usize> = (0..dim).collect();
        for i in (1..dim).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let phases: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::from_polar(1.0, rng.gen_range(-3.0..3.0)))
            .collect();
        let p = signed_permutation(&perm, &phases).unwrap();
        assert!(disjointness_violation_witness(&p, &tol())
            .unwrap()
            .is_none());
    }
}

#[test]
fn matrix_exponential_matches_closed_form_for_both_dims() {
    for dim in [8, 64] {
        let closed = SemigroupEvaluator::harmonic_closed_form(dim).unwrap();
        let exp = SemigroupEvaluator::matrix_exp(harmonic_generator(dim).unwrap());
        for &t in &[0.1, 1.0, 10.0] {
            let diff = exp
                .evaluate(t)
                .unwrap()
                .sub(&closed.evaluate(t).unwrap())
                .unwrap()
                .op_norm(SpaceTag::C0)
                .unwrap()
                .value;
            assert!(diff <= 1e-10, "dim={dim} t={t}: {diff}");
        }
    }
}

#[test]
fn contraction_law_holds_for_all_evaluator_modes() {
    let grid = TimeGrid::from_range(0.0, 5.0, 0.5).unwrap();
    let closed = SemigroupEvaluator::harmonic_closed_form(16).unwrap();
    let diag = SemigroupEvaluator::diagonal_phase(vec![1.0, -0.5, 2.0, 0.0]).unwrap();
    let exp = SemigroupEvaluator::matrix_exp(harmonic_generator(16).unwrap());
    for &t in grid.points() {
        let n_closed = closed
            .evaluate(t)
            .unwrap()
            .op_norm(SpaceTag::C0)
            .unwrap()
            .value;
        assert!((n_closed - 1.0).abs() <= 1e-12);
        let n_diag = diag
            .evaluate(t)
            .unwrap()
            .op_norm(SpaceTag::C0)
            .unwrap()
            .value;
        assert!(n_diag <= 1.0 + 1e-12);
        let n_exp = exp
            .evaluate(t)
            .unwrap()
            .op_norm(SpaceTag::C0)
            .unwrap()
            .value;
        assert!(n_exp <= 1.0 + 1e-10);
    }
}

#[test]
fn semigroup_law_residuals_small_on_a_coarse_lattice_for_all_modes() {
    let lattice: Vec<f64> = (0..5).map(|i| 1.25 * i as f64).collect();
    let evaluators = [
        SemigroupEvaluator::harmonic_closed_form(32).unwrap(),
        SemigroupEvaluator::matrix_exp(harmonic_generator(12).unwrap()),
        SemigroupEvaluator::diagonal_phase(vec![1.0, -2.0, 0.5, 3.0]).unwrap(),
    ];
    for s_eval in &evaluators {
        for &s in &lattice {
            for &t in &lattice {
                let r = semigroup_residual(s_eval, s, t).unwrap();
                assert!(r <= 1e-10, "s={s} t={t}: {r}");
            }
        }
    }
}

#[test]
fn harmonic_spectrum_matches_the_hand_solved_multiset() {
    for dim in [4usize, 8, 16, 32, 64, 128] {
        let gen = harmonic_generator(dim).unwrap();
        let report = eig(gen.matrix(), &tol()).unwrap();
        let mut expected: Vec<f64> = (2..=dim).map(|k| -1.0 / k as f64).collect();
        expected.sort_by(f64::total_cmp);
        expected.push(0.0);
        assert_eq!(report.pairs.len(), dim);
        for (pair, want) in report.pairs.iter().zip(&expected) {
            assert!(
                (pair.value - c(*want, 0.0)).norm() <= 1e-8,
                "dim={dim}: {} vs {want}",
                pair.value
            );
            assert!(pair.residual <= 1e-8);
        }
    }
}

#[test]
fn basis_modes_are_exact_eigenvectors_without_any_solver() {
    for dim in [4usize, 16, 64] {
        let gen = harmonic_generator(dim).unwrap();
        for i in 1..dim {
            let ek = TruncVector::basis(i, dim, SpaceTag::C0).unwrap();
            let image = gen.matrix().apply(&ek).unwrap();
            let lambda = -1.0 / (i + 1) as f64;
            let defect = image
                .coords()
                .iter()
                .zip(ek.coords())
                .map(|(av, vv)| (av - c(lambda, 0.0) * vv).norm())
                .fold(0.0, f64::max);
            assert_eq!(defect, 0.0, "dim={dim} mode={i}");
        }
    }
}

#[test]
fn zero_mode_defect_stays_pinned_at_one_as_dimension_grows() {
    let report = spurious_zero_analysis(&[8, 32, 128], &tol()).unwrap();
    assert!(report.overall);
    for row in &report.rows {
        assert!(
            (row.zero_defect - 1.0).abs() <= 1e-8,
            "dim={}: defect {}",
            row.dim,
            row.zero_defect
        );
    }
}

#[test]
fn example_scenario_metrics_stay_flat_under_grid_refinement() {
    for dim in [8usize, 64, 256] {
        let mut previous: Option<Vec<f64>> = None;
        for step in [1.0, 0.5, 0.25] {
            let grid = TimeGrid::from_range(0.0, 10.0, step).unwrap();
            let result = run_example_scenario(dim, &grid, &tol()).unwrap();
            assert!(result.overall, "dim={dim} step={step}: {result:?}");
            let metrics: Vec<f64> = result.assertions.iter().map(|a| a.metric).collect();
            if let Some(prev) = &previous {
                for (fine, coarse) in metrics.iter().zip(prev) {
                    assert!(
                        *fine <= coarse + 1e-12,
                        "dim={dim} step={step}: {fine} > {coarse}"
                    );
                }
            }
            previous = Some(metrics);
        }
    }
}

#[test]
fn frequency_recovery_is_exact_for_random_phase_diagonals() {
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let grid = TimeGrid::from_range(0.0, 5.0, 0.1).unwrap();
    for _ in 0..100 {
        let omega: Vec<f64> = (0..16).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let s = SemigroupEvaluator::diagonal_phase(omega.clone()).unwrap();
        let fits = recover_frequencies(&s, &grid).unwrap();
        for (fit, w) in fits.iter().zip(&omega) {
            assert!((fit.omega - w).abs() <= 1e-10, "{} vs {w}", fit.omega);
            assert!(fit.max_residual <= 1e-10);
            assert!(fit.modulus_defect <= 1e-12);
        }
    }
}

#[test]
fn small_time_probe_strictly_separates_isometric_from_contractive() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let grid = TimeGrid::from_range(0.0, 5.0, 0.1).unwrap();
    for _ in 0..25 {
        let omega: Vec<f64> = (0..6).map(|_| rng.gen_range(-8.0..8.0)).collect();
        let s = SemigroupEvaluator::diagonal_phase(omega).unwrap();
        for k in 0..6 {
            let probe = small_time_probe(&s, k, &grid, &tol()).unwrap();
            assert!(probe.off_diag_max <= tol().eq_tol);
        }
    }

    let closed = SemigroupEvaluator::harmonic_closed_form(64).unwrap();
    let probe = small_time_probe(&closed, 0, &grid, &tol()).unwrap();
    assert!(probe.off_diag_max > tol().eq_tol);
}

#[test]
fn witness_search_results_re_verify_through_the_pairing() {
    let grid = TimeGrid::from_range(0.0, 4.0, 0.25).unwrap();
    let omega = vec![0.4, -1.1, 2.3, 0.0, 1.9];
    let s = SemigroupEvaluator::diagonal_phase(omega).unwrap();
    for k in 0..5 {
        let x = TruncVector::basis(k, 5, SpaceTag::C0).unwrap();
        let witness = norming_witness_search(&s, &x, &grid, &tol())
            .unwrap()
            .expect("diagonal phase trajectories keep unit modulus");
        let value = pairing(&x, &witness).unwrap();
        assert!((value - c(1.0, 0.0)).norm() <= tol().eq_tol);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn vector_json_round_trip_is_bit_exact(
        coords in prop::collection::vec((-1e300f64..1e300, -1e300f64..1e300), 1..12),
        which in 0usize..3,
    ) {
        let space = [SpaceTag::C0, SpaceTag::L1, SpaceTag::L2][which];
        let coords: Vec<Complex64> = coords.into_iter().map(|(re, im)| c(re, im)).collect();
        let x = TruncVector::new(coords, space).unwrap();
        let text = serde_json::to_string(&x).unwrap();
        let back: TruncVector = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(x, back);
    }

    #[test]
    fn operator_json_round_trip_is_bit_exact(
        entries in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 9),
    ) {
        let flat: Vec<Complex64> = entries.into_iter().map(|(re, im)| c(re, im)).collect();
        let op = OperatorMatrix::from_entries(
            Array2::from_shape_vec((3, 3), flat).unwrap(),
        )
        .unwrap();
        let text = serde_json::to_string(&op).unwrap();
        let back: OperatorMatrix = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(op, back);
    }

    #[test]
    fn eig_residuals_hold_on_random_dense_matrices(
        entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 36),
        dim in 2usize..=6,
    ) {
        let flat: Vec<Complex64> = entries[..dim * dim]
            .iter()
            .map(|(re, im)| c(*re, *im))
            .collect();
        let op = OperatorMatrix::from_entries(
            Array2::from_shape_vec((dim, dim), flat).unwrap(),
        )
        .unwrap();
        let report = eig(&op, &tol()).unwrap();
        prop_assert_eq!(report.pairs.len(), dim);
        // independent residual re-verification through apply()
        for pair in &report.pairs {
            let image = op.apply(&pair.vector).unwrap();
            let defect = image
                .coords()
                .iter()
                .zip(pair.vector.coords())
                .map(|(av, vv)| (av - pair.value * vv).norm())
                .fold(0.0, f64::max)
                / pair.vector.norm();
            prop_assert!(defect <= tol().spectral_tol * 1.0001);
        }
        // eigenvalue sum equals the trace
        let trace: Complex64 = (0..dim).map(|i| op.entry(i, i)).sum();
        let sum: Complex64 = report.eigenvalues().iter().sum();
        prop_assert!((trace - sum).norm() <= 1e-8);
    }

    #[test]
    fn triangle_inequality_for_pairing_bounds(
        coords in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 6),
    ) {
        // |<x, f>| <= ||x||_C0 ||f||_1 for any unit witness
        let coords: Vec<Complex64> = coords.into_iter().map(|(re, im)| c(re, im)).collect();
        let x = TruncVector::new(coords, SpaceTag::C0).unwrap();
        let f = DualityWitness::basis(2, 6, SpaceTag::C0).unwrap();
        let value = pairing(&x, &f).unwrap();
        prop_assert!(value.norm() <= x.norm() * 1.0000001 + 1e-12);
    }
}
