//! Shared helpers for the kernel benchmarks.

use c0semi_core::{SemigroupEvaluator, TimeGrid};

/// Standard benchmark grid: [0, 5] at step 0.1.
pub fn bench_grid() -> TimeGrid {
    TimeGrid::from_range(0.0, 5.0, 0.1).expect("static grid is valid")
}

/// Closed-form evaluator at the benchmark dimension.
pub fn closed_form(dim: usize) -> SemigroupEvaluator {
    SemigroupEvaluator::harmonic_closed_form(dim).expect("dim >= 2")
}
