//! Numerical laboratory for contraction and isometric C0-semigroups on
//! finite sections of the sequence spaces c0, l1, and l2.
//!
//! The crate builds explicit semigroups (a closed-form contraction family
//! with harmonic coupling, diagonal phase semigroups, and a general matrix
//! exponential), measures them against the structure theory of isometric
//! semigroups (diagonal action, disjoint-support preservation, norming
//! functionals), and certifies spectral claims under finite-section
//! truncation with explicit artifact detection.

pub mod error;
pub mod operator;
pub mod report;
pub mod scenario;
pub mod semigroup;
pub mod space;
pub mod spectral;

pub use error::{Error, Result};
pub use operator::{
    disjointness_violation_witness, isometry_check_sampled, shift_isometry, signed_permutation,
    IsometryCheck, OperatorMatrix, OperatorNormReport, StructureHint,
};
pub use scenario::{
    norming_witness_search, recover_frequencies, run_example_scenario, run_hilbert_scenario,
    run_isometric_scenario, run_l1_diagonal_scenario, run_shift_scenario, small_time_probe,
    Assertion, PhaseFit, ScenarioResult, SmallTimeProbe,
};
pub use semigroup::{
    harmonic_generator, matrix_exponential, semigroup_residual, strong_continuity_profile,
    trajectory_pairing, GeneratorSpec, SemigroupEvaluator, TimeGrid, DEFAULT_EXP_TOL,
};
pub use space::{
    duality_extreme_points, is_disjoint, pairing, DualityWitness, SpaceTag, ToleranceConfig,
    TruncVector,
};
pub use spectral::{
    c0_membership_defect, classify_eigenvalue, eig, spurious_zero_analysis, EigenClass, EigenPair,
    SpectrumReport, SpuriousZeroReport, SpuriousZeroRow,
};
