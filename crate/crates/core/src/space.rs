//! Finite-section models of the sequence spaces c0, l1, and l2.
//!
//! A [`TruncVector`] of dimension N stands for the infinite sequence obtained
//! by padding with zeros, so membership in c0 is automatic for finite
//! sections; whether a computed vector is *compatible* with c0 decay is the
//! spectral module's concern. Functionals on c0 are carried in l1
//! coordinates ([`DualityWitness`]), and the pairing is bilinear: conjugate
//! phases live inside witness coefficients, never in the pairing itself.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ambient sequence space of a finite section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceTag {
    /// Sequences vanishing at infinity, sup norm.
    C0,
    /// Absolutely summable sequences, sum norm.
    L1,
    /// Square-summable sequences, Euclidean norm.
    L2,
}

impl SpaceTag {
    /// Norm of a coordinate slice under this tag.
    pub fn norm(self, coords: &[Complex64]) -> f64 {
        match self {
            SpaceTag::C0 => coords.iter().map(|c| c.norm()).fold(0.0, f64::max),
            SpaceTag::L1 => coords.iter().map(|c| c.norm()).sum(),
            SpaceTag::L2 => coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
        }
    }

    /// Tag of the dual space (c0* = l1, l1* = linf, l2* = l2).
    pub fn dual(self) -> SpaceTag {
        match self {
            SpaceTag::C0 => SpaceTag::L1,
            SpaceTag::L1 => SpaceTag::C0,
            SpaceTag::L2 => SpaceTag::L2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpaceTag::C0 => "C0",
            SpaceTag::L1 => "L1",
            SpaceTag::L2 => "L2",
        }
    }
}

/// Comparison tolerances shared across the crate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ToleranceConfig {
    /// Tolerance for scalar equalities (pairings, norms, unit checks).
    pub eq_tol: f64,
    /// Tolerance for argmax-set membership and support disjointness.
    pub argmax_tol: f64,
    /// Tolerance for eigenvalue classification and iterative convergence.
    pub spectral_tol: f64,
}

impl ToleranceConfig {
    pub fn new(eq_tol: f64, argmax_tol: f64, spectral_tol: f64) -> Result<Self> {
        for (name, v) in [
            ("eq_tol", eq_tol),
            ("argmax_tol", argmax_tol),
            ("spectral_tol", spectral_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "{name} must be strictly positive and finite, got {v}"
                )));
            }
        }
        Ok(Self {
            eq_tol,
            argmax_tol,
            spectral_tol,
        })
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eq_tol: 1e-10,
            argmax_tol: 1e-12,
            spectral_tol: 1e-8,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct VectorRepr {
    space: SpaceTag,
    coords: Vec<(f64, f64)>,
}

/// Finite section of a sequence, tagged with its ambient space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorRepr", into = "VectorRepr")]
pub struct TruncVector {
    coords: Vec<Complex64>,
    space: SpaceTag,
}

impl TruncVector {
    pub fn new(coords: Vec<Complex64>, space: SpaceTag) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput(
                "vector dimension must be positive".into(),
            ));
        }
        if coords
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidInput(
                "vector has non-finite coordinates".into(),
            ));
        }
        Ok(Self { coords, space })
    }

    /// k-th basis vector e_k (zero-based index) in dimension `dim`.
    pub fn basis(index: usize, dim: usize, space: SpaceTag) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidInput(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut coords = vec![Complex64::new(0.0, 0.0); dim];
        coords[index] = Complex64::new(1.0, 0.0);
        Self::new(coords, space)
    }

    pub fn zeros(dim: usize, space: SpaceTag) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); dim], space)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn space(&self) -> SpaceTag {
        self.space
    }

    pub fn norm(&self) -> f64 {
        self.space.norm(&self.coords)
    }
}

impl TryFrom<VectorRepr> for TruncVector {
    type Error = Error;

    fn try_from(repr: VectorRepr) -> Result<Self> {
        let coords = repr
            .coords
            .into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        TruncVector::new(coords, repr.space)
    }
}

impl From<TruncVector> for VectorRepr {
    fn from(v: TruncVector) -> Self {
        VectorRepr {
            space: v.space,
            coords: v.coords.iter().map(|c| (c.re, c.im)).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WitnessRepr {
    primal_space: SpaceTag,
    coeffs: Vec<(f64, f64)>,
}

/// Norm-one functional, represented by coordinates in the dual space of its
/// primal tag (l1 coordinates when the primal is c0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WitnessRepr", into = "WitnessRepr")]
pub struct DualityWitness {
    coeffs: Vec<Complex64>,
    primal_space: SpaceTag,
}

impl DualityWitness {
    /// Builds a witness, checking that its dual norm is 1 within `tol`.
    pub fn new(coeffs: Vec<Complex64>, primal_space: SpaceTag, tol: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput(
                "witness dimension must be positive".into(),
            ));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidInput(
                "witness has non-finite coefficients".into(),
            ));
        }
        let w = Self {
            coeffs,
            primal_space,
        };
        let n = w.dual_norm();
        if (n - 1.0).abs() > tol {
            return Err(Error::InvalidInput(format!(
                "witness dual norm {n} deviates from 1 beyond tolerance {tol}"
            )));
        }
        Ok(w)
    }

    /// Dual basis functional e*_k (zero-based index).
    pub fn basis(index: usize, dim: usize, primal_space: SpaceTag) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidInput(format!(
                "witness basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
        coeffs[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            coeffs,
            primal_space,
        })
    }

    pub fn base_dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn primal_space(&self) -> SpaceTag {
        self.primal_space
    }

    /// Norm in the dual of the primal space.
    pub fn dual_norm(&self) -> f64 {
        self.primal_space.dual().norm(&self.coeffs)
    }
}

impl TryFrom<WitnessRepr> for DualityWitness {
    type Error = Error;

    fn try_from(repr: WitnessRepr) -> Result<Self> {
        let coeffs = repr
            .coeffs
            .into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        DualityWitness::new(coeffs, repr.primal_space, ToleranceConfig::default().eq_tol)
    }
}

impl From<DualityWitness> for WitnessRepr {
    fn from(w: DualityWitness) -> Self {
        WitnessRepr {
            primal_space: w.primal_space,
            coeffs: w.coeffs.iter().map(|c| (c.re, c.im)).collect(),
        }
    }
}

/// Bilinear pairing sum_i x_i f_i. Conjugation, where needed, is already
/// stored inside the witness coefficients.
pub fn pairing(x: &TruncVector, f: &DualityWitness) -> Result<Complex64> {
    if x.dim() != f.base_dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: f.base_dim(),
        });
    }
    Ok(x.coords().iter().zip(f.coeffs()).map(|(a, b)| a * b).sum())
}

/// Extreme points of the duality set J(x) for a unit vector x in c0.
///
/// These are conj(x_i) e*_i over the argmax set of |x_i|; every norming
/// functional of x is a convex combination of them.
pub fn duality_extreme_points(
    x: &TruncVector,
    tol: &ToleranceConfig,
) -> Result<Vec<DualityWitness>> {
    if x.space() != SpaceTag::C0 {
        return Err(Error::SpaceMismatch {
            expected: SpaceTag::C0.name(),
            found: x.space().name(),
        });
    }
    let norm = x.norm();
    if (norm - 1.0).abs() > tol.eq_tol {
        return Err(Error::NotUnitVector { norm });
    }
    // Membership is measured against the achieved maximum so that the argmax
    // set stays nonempty when the norm sits a hair away from 1.
    let cutoff = norm - tol.argmax_tol;
    let mut out = Vec::new();
    for (i, c) in x.coords().iter().enumerate() {
        if c.norm() >= cutoff {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); x.dim()];
            coeffs[i] = c.conj();
            out.push(DualityWitness::new(coeffs, SpaceTag::C0, tol.eq_tol)?);
        }
    }
    Ok(out)
}

/// True when x and y have disjoint supports: min(|x_i|, |y_i|) vanishes at
/// every coordinate (up to the argmax tolerance).
pub fn is_disjoint(x: &TruncVector, y: &TruncVector, tol: &ToleranceConfig) -> Result<bool> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(x.coords()
        .iter()
        .zip(y.coords())
        .all(|(a, b)| a.norm().min(b.norm()) <= tol.argmax_tol))
}
