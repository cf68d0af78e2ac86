//! Semigroup evaluation: the harmonic-coupling generator and its closed-form
//! exponential, diagonal phase semigroups, a general dense matrix
//! exponential, and semigroup-law / strong-continuity diagnostics.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{OperatorMatrix, StructureHint};
use crate::space::{pairing, DualityWitness, SpaceTag, TruncVector};

/// Default truncation tolerance for the matrix exponential series.
pub const DEFAULT_EXP_TOL: f64 = 1e-12;

/// A bounded generator together with a human-readable label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    matrix: OperatorMatrix,
    label: String,
}

impl GeneratorSpec {
    pub fn new(matrix: OperatorMatrix, label: impl Into<String>) -> Result<Self> {
        if matrix.dim() < 2 {
            return Err(Error::DimensionTooSmall {
                dim: matrix.dim(),
                min: 2,
            });
        }
        Ok(Self {
            matrix,
            label: label.into(),
        })
    }

    pub fn matrix(&self) -> &OperatorMatrix {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Generator with harmonic coupling of the first mode into every higher mode
/// and harmonic diagonal decay: column 1 is (0, 1/2, ..., 1/N) and column i
/// is -(1/i) e_i for i >= 2 (1-based indexing).
pub fn harmonic_generator(dim: usize) -> Result<GeneratorSpec> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { dim, min: 2 });
    }
    let mut entries = Array2::zeros((dim, dim));
    for i in 1..dim {
        let weight = 1.0 / (i + 1) as f64;
        entries[[i, 0]] = Complex64::new(weight, 0.0);
        entries[[i, i]] = Complex64::new(-weight, 0.0);
    }
    let matrix = OperatorMatrix::with_hint(entries, StructureHint::DiagonalPlusFirstColumn)?;
    GeneratorSpec::new(matrix, "harmonic-coupling")
}

/// Strictly increasing grid of nonnegative times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid {
    points: Vec<f64>,
}

impl TimeGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("grid must be nonempty".into()));
        }
        if !points[0].is_finite() || points[0] < 0.0 {
            return Err(Error::InvalidGrid(format!(
                "grid must start at a nonnegative time, got {}",
                points[0]
            )));
        }
        for w in points.windows(2) {
            if !w[1].is_finite() || w[1] <= w[0] {
                return Err(Error::InvalidGrid(format!(
                    "grid must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { points })
    }

    /// Lattice `start, start+step, ...`, including `stop` when it lands on
    /// the lattice (within a relative slack of 1e-9 steps).
    pub fn from_range(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "step must be positive, got {step}"
            )));
        }
        if !(start.is_finite() && stop.is_finite() && stop > start && start >= 0.0) {
            return Err(Error::InvalidGrid(format!(
                "range must satisfy 0 <= start < stop, got {start}..{stop}"
            )));
        }
        let span = (stop - start) / step;
        let rounded = span.round();
        let count = if (rounded * step + start - stop).abs() <= step * 1e-9 {
            rounded as usize
        } else {
            span.floor() as usize
        };
        const MAX_POINTS: usize = 10_000_000;
        if count >= MAX_POINTS {
            return Err(Error::InvalidGrid(format!(
                "grid would have {count} points (cap {MAX_POINTS})"
            )));
        }
        let points = (0..=count).map(|k| start + k as f64 * step).collect();
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        *self.points.last().unwrap()
    }

    /// Largest adjacent gap; the phase-unwrap safety margin.
    pub fn max_gap(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }
}

/// A rule producing T_t for any t >= 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SemigroupEvaluator {
    /// Closed-form exponential of [`harmonic_generator`]: column 1 is
    /// (1, 1-e^{-t/2}, ..., 1-e^{-t/N}) and column i is e^{-t/i} e_i.
    HarmonicClosedForm { dim: usize },
    /// Scaling-and-squaring matrix exponential of an explicit generator.
    MatrixExp {
        generator: GeneratorSpec,
        exp_tol: f64,
    },
    /// T_t = diag(e^{i w_k t}).
    DiagonalPhase { omega: Vec<f64> },
}

impl SemigroupEvaluator {
    pub fn harmonic_closed_form(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall { dim, min: 2 });
        }
        Ok(Self::HarmonicClosedForm { dim })
    }

    pub fn matrix_exp(generator: GeneratorSpec) -> Self {
        Self::MatrixExp {
            generator,
            exp_tol: DEFAULT_EXP_TOL,
        }
    }

    pub fn matrix_exp_with_tol(generator: GeneratorSpec, exp_tol: f64) -> Result<Self> {
        if !(exp_tol.is_finite() && exp_tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "exp_tol must be strictly positive, got {exp_tol}"
            )));
        }
        Ok(Self::MatrixExp { generator, exp_tol })
    }

    pub fn diagonal_phase(omega: Vec<f64>) -> Result<Self> {
        if omega.is_empty() {
            return Err(Error::InvalidInput("omega list must be nonempty".into()));
        }
        if omega.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidInput("omega entries must be finite".into()));
        }
        Ok(Self::DiagonalPhase { omega })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::HarmonicClosedForm { dim } => *dim,
            Self::MatrixExp { generator, .. } => generator.dim(),
            Self::DiagonalPhase { omega } => omega.len(),
        }
    }

    /// Evaluates T_t.
    pub fn evaluate(&self, t: f64) -> Result<OperatorMatrix> {
        if !t.is_finite() {
            return Err(Error::InvalidInput(format!("time must be finite, got {t}")));
        }
        if t < 0.0 {
            return Err(Error::NegativeTime { t });
        }
        match self {
            Self::HarmonicClosedForm { dim } => {
                let n = *dim;
                let mut entries = Array2::zeros((n, n));
                entries[[0, 0]] = Complex64::new(1.0, 0.0);
                for i in 1..n {
                    let rate = t / (i + 1) as f64;
                    let decay = (-rate).exp();
                    // 1 - e^{-t/i} via exp_m1 keeps small-t entries accurate
                    entries[[i, 0]] = Complex64::new(-(-rate).exp_m1(), 0.0);
                    entries[[i, i]] = Complex64::new(decay, 0.0);
                }
                OperatorMatrix::with_hint(entries, StructureHint::DiagonalPlusFirstColumn)
            }
            Self::MatrixExp { generator, exp_tol } => {
                let scaled = generator.matrix().entries().mapv(|c| c * t);
                let exp = matrix_exponential_raw(&scaled, *exp_tol)?;
                let hint = match generator.matrix().hint() {
                    StructureHint::Diagonal => StructureHint::Diagonal,
                    StructureHint::DiagonalPlusFirstColumn => {
                        StructureHint::DiagonalPlusFirstColumn
                    }
                    _ => StructureHint::Dense,
                };
                OperatorMatrix::with_hint(exp, hint)
            }
            Self::DiagonalPhase { omega } => {
                let diag: Vec<Complex64> = omega
                    .iter()
                    .map(|w| Complex64::from_polar(1.0, w * t))
                    .collect();
                OperatorMatrix::diagonal(&diag)
            }
        }
    }
}

fn row_sum_norm(a: &Array2<Complex64>) -> f64 {
    let (rows, cols) = a.dim();
    (0..rows)
        .map(|i| (0..cols).map(|j| a[[i, j]].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring around a truncated Taylor
/// series: the scaled norm is brought at or below 1/2, and the series stops
/// once the next-term norm bound falls below `tol / 10`.
fn matrix_exponential_raw(a: &Array2<Complex64>, tol: f64) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    let norm = row_sum_norm(a);
    let squarings = if norm <= 0.5 {
        0
    } else {
        (norm / 0.5).log2().ceil() as u32
    };
    let scale = 0.5f64.powi(squarings as i32);
    let m = a.mapv(|c| c * scale);
    let m_norm = row_sum_norm(&m);

    let mut result = Array2::eye(n);
    let mut term: Array2<Complex64> = Array2::eye(n);
    let mut converged = false;
    const MAX_TERMS: usize = 80;
    for k in 1..=MAX_TERMS {
        term = term.dot(&m).mapv(|c| c / k as f64);
        result += &term;
        let next_term_bound = row_sum_norm(&term) * m_norm / (k + 1) as f64;
        if next_term_bound <= tol / 10.0 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure {
            what: "matrix exponential Taylor series",
            iterations: MAX_TERMS,
        });
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    Ok(result)
}

/// Matrix exponential of an operator, preserving diagonal-family hints
/// (whose zero patterns are closed under products and therefore exact).
pub fn matrix_exponential(a: &OperatorMatrix, tol: f64) -> Result<OperatorMatrix> {
    let exp = matrix_exponential_raw(a.entries(), tol)?;
    let hint = match a.hint() {
        StructureHint::Diagonal => StructureHint::Diagonal,
        StructureHint::DiagonalPlusFirstColumn => StructureHint::DiagonalPlusFirstColumn,
        _ => StructureHint::Dense,
    };
    OperatorMatrix::with_hint(exp, hint)
}

/// C0-norm defect of the semigroup law at (s, t):
/// || T_{s+t} - T_s T_t ||.
pub fn semigroup_residual(evaluator: &SemigroupEvaluator, s: f64, t: f64) -> Result<f64> {
    let combined = evaluator.evaluate(s + t)?;
    let chained = evaluator.evaluate(s)?.compose(&evaluator.evaluate(t)?)?;
    Ok(combined.sub(&chained)?.op_norm(SpaceTag::C0)?.value)
}

/// Strong-continuity profile: for each grid time, the worst sup-norm
/// distance of T_t e_k from e_k over all basis vectors.
pub fn strong_continuity_profile(
    evaluator: &SemigroupEvaluator,
    grid: &TimeGrid,
) -> Result<Vec<(f64, f64)>> {
    let n = evaluator.dim();
    let mut out = Vec::with_capacity(grid.len());
    for &t in grid.points() {
        let tt = evaluator.evaluate(t)?;
        let mut defect = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                let expected = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                defect = defect.max((tt.entry(i, j) - expected).norm());
            }
        }
        out.push((t, defect));
    }
    Ok(out)
}

/// Trajectory of the pairing <T_t x, f> along a time grid.
pub fn trajectory_pairing(
    evaluator: &SemigroupEvaluator,
    x: &TruncVector,
    f: &DualityWitness,
    grid: &TimeGrid,
) -> Result<Vec<Complex64>> {
    if x.dim() != evaluator.dim() {
        return Err(Error::DimensionMismatch {
            expected: evaluator.dim(),
            found: x.dim(),
        });
    }
    if f.base_dim() != evaluator.dim() {
        return Err(Error::DimensionMismatch {
            expected: evaluator.dim(),
            found: f.base_dim(),
        });
    }
    grid.points()
        .iter()
        .map(|&t| {
            let image = evaluator.evaluate(t)?.apply(x)?;
            pairing(&image, f)
        })
        .collect()
}
