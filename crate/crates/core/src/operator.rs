//! Finite-section operators: dense complex matrices with structure hints,
//! exact operator norms on c0/l1, isometry certification, and the averaging
//! shift isometry together with its disjoint-support violation.
//!
//! Matrix convention: column j holds the image of the basis vector e_j, so
//! row i is the coordinate functional e*_i. The c0 operator norm is then the
//! maximal row l1-sum and the l1 operator norm the maximal column l1-sum.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{is_disjoint, SpaceTag, ToleranceConfig, TruncVector};

/// Sparsity pattern promised by an operator's constructor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StructureHint {
    Dense,
    Diagonal,
    DiagonalPlusFirstColumn,
    Shift,
}

/// Dense or structured N-by-N complex operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorRepr", into = "OperatorRepr")]
pub struct OperatorMatrix {
    entries: Array2<Complex64>,
    hint: StructureHint,
}

impl OperatorMatrix {
    /// Wraps a dense square matrix with no structural promise.
    pub fn from_entries(entries: Array2<Complex64>) -> Result<Self> {
        Self::with_hint(entries, StructureHint::Dense)
    }

    /// Wraps a square matrix and validates the hinted sparsity pattern.
    pub fn with_hint(entries: Array2<Complex64>, hint: StructureHint) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows == 0 || rows != cols {
            return Err(Error::InvalidInput(format!(
                "operator must be square and nonempty, got {rows}x{cols}"
            )));
        }
        if entries
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidInput(
                "operator has non-finite entries".into(),
            ));
        }
        let op = Self { entries, hint };
        op.validate_hint()?;
        Ok(op)
    }

    fn validate_hint(&self) -> Result<()> {
        let n = self.dim();
        let zero = Complex64::new(0.0, 0.0);
        let allowed = |i: usize, j: usize| -> bool {
            match self.hint {
                StructureHint::Dense => true,
                StructureHint::Diagonal => i == j,
                StructureHint::DiagonalPlusFirstColumn => i == j || j == 0,
                StructureHint::Shift => (i == 0 && j <= 1) || (i >= 1 && j + 1 == i),
            }
        };
        for i in 0..n {
            for j in 0..n {
                if !allowed(i, j) && self.entries[[i, j]] != zero {
                    return Err(Error::InvalidInput(format!(
                        "entry ({i},{j}) violates structure hint {:?}",
                        self.hint
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = Array2::zeros((dim, dim));
        for i in 0..dim {
            entries[[i, i]] = Complex64::new(1.0, 0.0);
        }
        Self {
            entries,
            hint: StructureHint::Diagonal,
        }
    }

    pub fn diagonal(diag: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        let mut entries = Array2::zeros((n, n));
        for (i, d) in diag.iter().enumerate() {
            entries[[i, i]] = *d;
        }
        Self::with_hint(entries, StructureHint::Diagonal)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[[row, col]]
    }

    pub fn hint(&self) -> StructureHint {
        self.hint
    }

    /// Matrix-vector product; the result keeps the input's space tag.
    pub fn apply(&self, x: &TruncVector) -> Result<TruncVector> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        let v = Array1::from_vec(x.coords().to_vec());
        let y = self.entries.dot(&v);
        TruncVector::new(y.to_vec(), x.space())
    }

    /// Operator composition self . other (matrix product self * other).
    /// Products inside the diagonal-plus-first-column family stay in the
    /// family and are computed in O(N) entries.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let diag_family = |h: StructureHint| {
            matches!(
                h,
                StructureHint::Diagonal | StructureHint::DiagonalPlusFirstColumn
            )
        };
        if diag_family(self.hint) && diag_family(other.hint) {
            let n = self.dim();
            let mut entries = Array2::zeros((n, n));
            entries[[0, 0]] = self.entries[[0, 0]] * other.entries[[0, 0]];
            for i in 1..n {
                entries[[i, 0]] = self.entries[[i, 0]] * other.entries[[0, 0]]
                    + self.entries[[i, i]] * other.entries[[i, 0]];
                entries[[i, i]] = self.entries[[i, i]] * other.entries[[i, i]];
            }
            let hint =
                if self.hint == StructureHint::Diagonal && other.hint == StructureHint::Diagonal {
                    StructureHint::Diagonal
                } else {
                    StructureHint::DiagonalPlusFirstColumn
                };
            return Self::with_hint(entries, hint);
        }
        let entries = self.entries.dot(&other.entries);
        Self::with_hint(entries, StructureHint::Dense)
    }

    /// Entrywise difference, used for residual norms.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Self::with_hint(&self.entries - &other.entries, StructureHint::Dense)
    }

    pub fn scale(&self, factor: Complex64) -> Result<Self> {
        Self::with_hint(self.entries.mapv(|c| c * factor), StructureHint::Dense)
    }

    /// Operator norm with default tolerances (exact for C0/L1; iterative for L2).
    pub fn op_norm(&self, space: SpaceTag) -> Result<OperatorNormReport> {
        self.op_norm_with_tol(space, ToleranceConfig::default().spectral_tol)
    }

    /// Operator norm. C0 is the maximal row sum of moduli and L1 the maximal
    /// column sum, both exact; L2 is the dominant singular value obtained by
    /// power iteration on T*T, converged to `spectral_tol`.
    pub fn op_norm_with_tol(
        &self,
        space: SpaceTag,
        spectral_tol: f64,
    ) -> Result<OperatorNormReport> {
        let n = self.dim();
        match space {
            SpaceTag::C0 => {
                let mut best = (0usize, 0.0f64);
                for i in 0..n {
                    let s: f64 = (0..n).map(|j| self.entries[[i, j]].norm()).sum();
                    if s > best.1 {
                        best = (i, s);
                    }
                }
                Ok(OperatorNormReport {
                    value: best.1,
                    space,
                    achieving_index: best.0,
                })
            }
            SpaceTag::L1 => {
                let mut best = (0usize, 0.0f64);
                for j in 0..n {
                    let s: f64 = (0..n).map(|i| self.entries[[i, j]].norm()).sum();
                    if s > best.1 {
                        best = (j, s);
                    }
                }
                Ok(OperatorNormReport {
                    value: best.1,
                    space,
                    achieving_index: best.0,
                })
            }
            SpaceTag::L2 => self.largest_singular_value(spectral_tol),
        }
    }

    fn largest_singular_value(&self, tol: f64) -> Result<OperatorNormReport> {
        let n = self.dim();
        let zero = Complex64::new(0.0, 0.0);
        if self.entries.iter().all(|c| *c == zero) {
            return Ok(OperatorNormReport {
                value: 0.0,
                space: SpaceTag::L2,
                achieving_index: 0,
            });
        }
        let adjoint = self.entries.t().mapv(|c| c.conj());
        let mut rng = ChaCha8Rng::seed_from_u64(0x5157_u64);
        let mut v: Array1<Complex64> = Array1::from_iter(
            (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))),
        );
        let l2 = |w: &Array1<Complex64>| w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let nv = l2(&v);
        v.mapv_inplace(|c| c / nv);

        const MAX_ITER: usize = 20_000;
        let mut sigma_prev = f64::INFINITY;
        for it in 0..MAX_ITER {
            let av = self.entries.dot(&v);
            let sigma = l2(&av);
            if (sigma - sigma_prev).abs() <= tol * sigma.max(1.0) {
                let achieving_index = v
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                return Ok(OperatorNormReport {
                    value: sigma,
                    space: SpaceTag::L2,
                    achieving_index,
                });
            }
            sigma_prev = sigma;
            let mut next = adjoint.dot(&av);
            let nn = l2(&next);
            if nn == 0.0 {
                // landed in the kernel of T*T; restart from a fresh direction
                next =
                    Array1::from_iter((0..n).map(|_| {
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    }));
                let nn = l2(&next);
                v = next.mapv(|c| c / nn);
                sigma_prev = f64::INFINITY;
                if it + 1 == MAX_ITER {
                    break;
                }
                continue;
            }
            v = next.mapv(|c| c / nn);
        }
        Err(Error::ConvergenceFailure {
            what: "L2 operator norm power iteration",
            iterations: MAX_ITER,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    dim: usize,
    structure_hint: StructureHint,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    entries: Option<Vec<(f64, f64)>>,
    /// Diagonal entries (i,i) for i >= 1; entry (0,0) lives in `first_column`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    diagonal: Option<Vec<(f64, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    first_column: Option<Vec<(f64, f64)>>,
}

impl TryFrom<OperatorRepr> for OperatorMatrix {
    type Error = Error;

    fn try_from(repr: OperatorRepr) -> Result<Self> {
        let n = repr.dim;
        if n == 0 {
            return Err(Error::InvalidInput(
                "operator dimension must be positive".into(),
            ));
        }
        let to_c = |p: &(f64, f64)| Complex64::new(p.0, p.1);
        match repr.structure_hint {
            StructureHint::Dense | StructureHint::Shift => {
                let flat = repr.entries.ok_or_else(|| {
                    Error::InvalidInput("dense/shift operator JSON requires `entries`".into())
                })?;
                if flat.len() != n * n {
                    return Err(Error::LengthMismatch {
                        left: flat.len(),
                        right: n * n,
                    });
                }
                let entries =
                    Array2::from_shape_vec((n, n), flat.iter().map(to_c).collect()).unwrap();
                OperatorMatrix::with_hint(entries, repr.structure_hint)
            }
            StructureHint::Diagonal => {
                let diag = repr.diagonal.ok_or_else(|| {
                    Error::InvalidInput("diagonal operator JSON requires `diagonal`".into())
                })?;
                if diag.len() != n {
                    return Err(Error::LengthMismatch {
                        left: diag.len(),
                        right: n,
                    });
                }
                OperatorMatrix::diagonal(&diag.iter().map(to_c).collect::<Vec<_>>())
            }
            StructureHint::DiagonalPlusFirstColumn => {
                let diag = repr.diagonal.ok_or_else(|| {
                    Error::InvalidInput("structured operator JSON requires `diagonal`".into())
                })?;
                let col = repr.first_column.ok_or_else(|| {
                    Error::InvalidInput("structured operator JSON requires `first_column`".into())
                })?;
                if col.len() != n {
                    return Err(Error::LengthMismatch {
                        left: col.len(),
                        right: n,
                    });
                }
                if diag.len() + 1 != n {
                    return Err(Error::LengthMismatch {
                        left: diag.len(),
                        right: n - 1,
                    });
                }
                let mut entries = Array2::zeros((n, n));
                for (i, p) in col.iter().enumerate() {
                    entries[[i, 0]] = to_c(p);
                }
                for (i, p) in diag.iter().enumerate() {
                    entries[[i + 1, i + 1]] = to_c(p);
                }
                OperatorMatrix::with_hint(entries, StructureHint::DiagonalPlusFirstColumn)
            }
        }
    }
}

impl From<OperatorMatrix> for OperatorRepr {
    fn from(op: OperatorMatrix) -> Self {
        let n = op.dim();
        let pair = |c: Complex64| (c.re, c.im);
        match op.hint {
            StructureHint::Dense | StructureHint::Shift => OperatorRepr {
                dim: n,
                structure_hint: op.hint,
                entries: Some(op.entries.iter().map(|c| pair(*c)).collect()),
                diagonal: None,
                first_column: None,
            },
            StructureHint::Diagonal => OperatorRepr {
                dim: n,
                structure_hint: op.hint,
                entries: None,
                diagonal: Some((0..n).map(|i| pair(op.entries[[i, i]])).collect()),
                first_column: None,
            },
            StructureHint::DiagonalPlusFirstColumn => OperatorRepr {
                dim: n,
                structure_hint: op.hint,
                entries: None,
                diagonal: Some((1..n).map(|i| pair(op.entries[[i, i]])).collect()),
                first_column: Some((0..n).map(|i| pair(op.entries[[i, 0]])).collect()),
            },
        }
    }
}

/// Result of an operator norm computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorNormReport {
    pub value: f64,
    pub space: SpaceTag,
    /// Row achieving the norm for C0, column for L1, dominant-singular-vector
    /// peak coordinate for L2.
    pub achieving_index: usize,
}

/// Outcome of a sampled isometry certification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsometryCheck {
    pub passed: bool,
    /// Largest observed |  ||Tx|| - 1 | over the evidence set.
    pub worst_deviation: f64,
}

/// Norm of the image of `x`, reinstating the coordinate the finite section
/// drops for shift-structured operators: a dim-N vector stands for the
/// zero-padded infinite sequence, whose image under the infinite shift has
/// one extra nonzero coordinate equal to the input's last coordinate.
fn image_norm(op: &OperatorMatrix, x: &TruncVector, space: SpaceTag) -> Result<f64> {
    let y = op.apply(x)?;
    let base = space.norm(y.coords());
    if op.hint() != StructureHint::Shift {
        return Ok(base);
    }
    let overflow = x.coords()[x.dim() - 1].norm();
    Ok(match space {
        SpaceTag::C0 => base.max(overflow),
        SpaceTag::L1 => base + overflow,
        SpaceTag::L2 => (base * base + overflow * overflow).sqrt(),
    })
}

fn random_unit_vector(rng: &mut ChaCha8Rng, dim: usize, space: SpaceTag) -> TruncVector {
    loop {
        let coords: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = space.norm(&coords);
        if norm > 1e-6 {
            let coords = coords.into_iter().map(|c| c / norm).collect();
            return TruncVector::new(coords, space).unwrap();
        }
    }
}

/// Checks norm preservation on the N basis vectors plus `trials` random unit
/// vectors drawn deterministically from `seed`. Keeping the basis vectors in
/// the evidence set makes the verdict at least as strong as any single
/// basis-vector check.
pub fn isometry_check_sampled(
    op: &OperatorMatrix,
    space: SpaceTag,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<IsometryCheck> {
    if trials == 0 {
        return Err(Error::InvalidInput(
            "isometry check requires trials >= 1".into(),
        ));
    }
    let n = op.dim();
    let mut worst = 0.0f64;
    for k in 0..n {
        let ek = TruncVector::basis(k, n, space)?;
        worst = worst.max((image_norm(op, &ek, space)? - 1.0).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let x = random_unit_vector(&mut rng, n, space);
        worst = worst.max((image_norm(op, &x, space)? - 1.0).abs());
    }
    Ok(IsometryCheck {
        passed: worst <= tol.eq_tol,
        worst_deviation: worst,
    })
}

/// Averaging shift on a finite section: e_1 and e_2 are blended into the
/// first coordinate while every mode moves one slot up. An isometry of the
/// full sequence space that does not preserve disjoint supports.
pub fn shift_isometry(dim: usize) -> Result<OperatorMatrix> {
    if dim < 3 {
        return Err(Error::DimensionTooSmall { dim, min: 3 });
    }
    let mut entries = Array2::zeros((dim, dim));
    entries[[0, 0]] = Complex64::new(0.5, 0.0);
    entries[[0, 1]] = Complex64::new(0.5, 0.0);
    for i in 1..dim {
        entries[[i, i - 1]] = Complex64::new(1.0, 0.0);
    }
    OperatorMatrix::with_hint(entries, StructureHint::Shift)
}

/// Operator sending e_j to phases[j] * e_{perm[j]} — a signed permutation
/// when the phases are unimodular. Preserves disjoint supports.
pub fn signed_permutation(perm: &[usize], phases: &[Complex64]) -> Result<OperatorMatrix> {
    let n = perm.len();
    if phases.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: phases.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidInput("perm is not a permutation".into()));
        }
        seen[p] = true;
    }
    for ph in phases {
        if (ph.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(
                "signed permutation phases must be unimodular".into(),
            ));
        }
    }
    let mut entries = Array2::zeros((n, n));
    for (j, (&p, ph)) in perm.iter().zip(phases).enumerate() {
        entries[[p, j]] = *ph;
    }
    OperatorMatrix::from_entries(entries)
}

/// Searches basis pairs (e_j, e_k), j < k, for a disjointness violation:
/// disjoint inputs whose images overlap. Returns the first violating pair.
pub fn disjointness_violation_witness(
    op: &OperatorMatrix,
    tol: &ToleranceConfig,
) -> Result<Option<(TruncVector, TruncVector)>> {
    let n = op.dim();
    for j in 0..n {
        let ej = TruncVector::basis(j, n, SpaceTag::C0)?;
        let tj = op.apply(&ej)?;
        for k in (j + 1)..n {
            let ek = TruncVector::basis(k, n, SpaceTag::C0)?;
            if !is_disjoint(&ej, &ek, tol)? {
                continue;
            }
            let tk = op.apply(&ek)?;
            if !is_disjoint(&tj, &tk, tol)? {
                return Ok(Some((ej, ek)));
            }
        }
    }
    Ok(None)
}
