//! Eigen-analysis of truncated generators: a dense complex eigensolver
//! (Householder Hessenberg reduction followed by implicitly shifted QR and
//! triangular eigenvector back-substitution), eigenvalue classification, and
//! detection of truncation artifacts — eigenpairs whose eigenvectors fail
//! the coordinate decay required of a c0 element.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::operator::OperatorMatrix;
use crate::semigroup::harmonic_generator;
use crate::space::{SpaceTag, ToleranceConfig, TruncVector};

/// Largest dimension accepted by [`eig`].
pub const EIG_DIM_CAP: usize = 512;

/// Fraction of trailing coordinates inspected by the artifact detector.
pub const ARTIFACT_TAIL_FRACTION: f64 = 0.25;

/// Tail-defect level at which an eigenvector is flagged as a truncation
/// artifact. The canonical artifact (a constant eigenvector) has defect 1,
/// while genuinely decaying eigenvectors stay near 0.
pub const ARTIFACT_DEFECT_THRESHOLD: f64 = 0.99;

/// Classification of an eigenvalue relative to a tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EigenClass {
    Zero,
    PurelyImaginary,
    NegativeRealPart,
    Other,
}

impl EigenClass {
    pub fn name(self) -> &'static str {
        match self {
            EigenClass::Zero => "Zero",
            EigenClass::PurelyImaginary => "PurelyImaginary",
            EigenClass::NegativeRealPart => "NegativeRealPart",
            EigenClass::Other => "Other",
        }
    }
}

/// Total classification of an eigenvalue by modulus and real part.
pub fn classify_eigenvalue(lambda: Complex64, tol: f64) -> EigenClass {
    if lambda.norm() <= tol {
        EigenClass::Zero
    } else if lambda.re.abs() <= tol {
        EigenClass::PurelyImaginary
    } else if lambda.re < -tol {
        EigenClass::NegativeRealPart
    } else {
        EigenClass::Other
    }
}

fn ser_complex<S: Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    (c.re, c.im).serialize(s)
}

/// One eigenpair with its certification data.
#[derive(Debug, Clone, Serialize)]
pub struct EigenPair {
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    pub vector: TruncVector,
    /// ||A v - lambda v|| / ||v|| in the sup norm, recomputed from the
    /// original matrix.
    pub residual: f64,
    pub class: EigenClass,
    /// True when the eigenvector's tail fails c0-style decay.
    pub artifact: bool,
}

/// Full spectrum of a finite section, sorted by (Re, Im).
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub pairs: Vec<EigenPair>,
}

impl SpectrumReport {
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    pub fn count_class(&self, class: EigenClass) -> usize {
        self.pairs.iter().filter(|p| p.class == class).count()
    }
}

fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let xn = x.norm();
    let yn = y.norm();
    if yn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if xn == 0.0 {
        return (0.0, y.conj() / yn);
    }
    let r = xn.hypot(yn);
    (xn / r, (x / xn) * y.conj() / r)
}

/// Householder reduction to upper Hessenberg form, accumulating the unitary
/// similarity into `q` (which must start as the identity).
fn hessenberg_reduce(h: &mut Array2<Complex64>, q: &mut Array2<Complex64>) {
    let n = h.nrows();
    let zero = Complex64::new(0.0, 0.0);
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut v: Vec<Complex64> = (0..m).map(|i| h[[k + 1 + i, k]]).collect();
        let xnorm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;

        // left: rows k+1..n over columns k..n
        for j in k..n {
            let mut s = zero;
            for i in 0..m {
                s += v[i].conj() * h[[k + 1 + i, j]];
            }
            s *= tau;
            for i in 0..m {
                h[[k + 1 + i, j]] -= s * v[i];
            }
        }
        // right: columns k+1..n over all rows
        for r in 0..n {
            let mut s = zero;
            for i in 0..m {
                s += h[[r, k + 1 + i]] * v[i];
            }
            s *= tau;
            for i in 0..m {
                h[[r, k + 1 + i]] -= s * v[i].conj();
            }
        }
        // accumulate Q <- Q P
        for r in 0..n {
            let mut s = zero;
            for i in 0..m {
                s += q[[r, k + 1 + i]] * v[i];
            }
            s *= tau;
            for i in 0..m {
                q[[r, k + 1 + i]] -= s * v[i].conj();
            }
        }

        h[[k + 1, k]] = alpha;
        for i in k + 2..n {
            h[[i, k]] = zero;
        }
    }
}

fn wilkinson_shift(h: &Array2<Complex64>, hi: usize) -> Complex64 {
    let a = h[[hi - 1, hi - 1]];
    let b = h[[hi - 1, hi]];
    let c = h[[hi, hi - 1]];
    let d = h[[hi, hi]];
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * c).sqrt();
    let center = (a + d) * 0.5;
    let lam1 = center + disc;
    let lam2 = center - disc;
    if (lam1 - d).norm() <= (lam2 - d).norm() {
        lam1
    } else {
        lam2
    }
}

/// Implicit single-shift QR iteration on an upper Hessenberg matrix,
/// accumulating Schur vectors into `z`. On return `h` is upper triangular.
fn qr_schur(h: &mut Array2<Complex64>, z: &mut Array2<Complex64>) -> Result<()> {
    let n = h.nrows();
    if n < 2 {
        return Ok(());
    }
    let ulp = f64::EPSILON;
    let hnorm = {
        let mut worst = 0.0f64;
        for i in 0..n {
            let s: f64 = (0..n).map(|j| h[[i, j]].norm()).sum();
            worst = worst.max(s);
        }
        worst
    };
    let zero = Complex64::new(0.0, 0.0);

    let rotate_rows = |h: &mut Array2<Complex64>, i: usize, c: f64, s: Complex64, jstart: usize| {
        for j in jstart..n {
            let a = h[[i, j]];
            let b = h[[i + 1, j]];
            h[[i, j]] = a * c + s * b;
            h[[i + 1, j]] = -s.conj() * a + b * c;
        }
    };
    let rotate_cols = |m: &mut Array2<Complex64>, i: usize, c: f64, s: Complex64, rend: usize| {
        for r in 0..=rend {
            let a = m[[r, i]];
            let b = m[[r, i + 1]];
            m[[r, i]] = a * c + b * s.conj();
            m[[r, i + 1]] = -a * s + b * c;
        }
    };

    let max_total = 60 * n + 200;
    let mut total_iter = 0usize;
    let mut local_iter = 0usize;
    let mut hi = n - 1;
    loop {
        // find the active block [lo..=hi], deflating negligible subdiagonals
        let mut lo = 0;
        let mut l = hi;
        while l > 0 {
            let sub = h[[l, l - 1]].norm();
            let mut tst = h[[l - 1, l - 1]].norm() + h[[l, l]].norm();
            if tst == 0.0 {
                tst = hnorm;
            }
            if sub <= ulp * tst {
                h[[l, l - 1]] = zero;
                lo = l;
                break;
            }
            l -= 1;
        }

        if lo == hi {
            // 1x1 block converged
            if hi == 0 {
                return Ok(());
            }
            hi -= 1;
            local_iter = 0;
            continue;
        }

        total_iter += 1;
        local_iter += 1;
        if total_iter > max_total {
            return Err(Error::ConvergenceFailure {
                what: "QR eigenvalue iteration",
                iterations: max_total,
            });
        }
        let mu = if local_iter.is_multiple_of(10) {
            h[[hi, hi]] + Complex64::new(0.75 * h[[hi, hi - 1]].norm(), 0.0)
        } else {
            wilkinson_shift(h, hi)
        };

        for i in lo..hi {
            let (x, y) = if i == lo {
                (h[[lo, lo]] - mu, h[[lo + 1, lo]])
            } else {
                (h[[i, i - 1]], h[[i + 1, i - 1]])
            };
            let (c, s) = givens(x, y);
            if i > lo {
                h[[i, i - 1]] = x * c + s * y;
                h[[i + 1, i - 1]] = zero;
                rotate_rows(h, i, c, s, i);
            } else {
                rotate_rows(h, i, c, s, lo);
            }
            let rend = (i + 2).min(hi);
            rotate_cols(h, i, c, s, rend);
            rotate_cols(z, i, c, s, n - 1);
        }
    }
}

/// Eigenvector of an upper triangular matrix for the eigenvalue at diagonal
/// position `k`, by back-substitution with a guarded pivot.
fn triangular_eigenvector(t: &Array2<Complex64>, k: usize, tnorm: f64) -> Array1<Complex64> {
    let n = t.nrows();
    let zero = Complex64::new(0.0, 0.0);
    let lambda = t[[k, k]];
    let floor = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE);
    let mut y = vec![zero; n];
    y[k] = Complex64::new(1.0, 0.0);
    for i in (0..k).rev() {
        let mut num = zero;
        for j in i + 1..=k {
            num += t[[i, j]] * y[j];
        }
        let mut den = t[[i, i]] - lambda;
        if den.norm() < floor {
            den = Complex64::new(floor, 0.0);
        }
        y[i] = -num / den;
        let mag = y[i].norm();
        if mag > 1e250 {
            for entry in y.iter_mut() {
                *entry /= mag;
            }
        }
    }
    Array1::from_vec(y)
}

/// Full spectrum of a finite-section operator with unit-sup-norm
/// eigenvectors, residuals, classification, and artifact flags.
pub fn eig(a: &OperatorMatrix, tol: &ToleranceConfig) -> Result<SpectrumReport> {
    let n = a.dim();
    if n > EIG_DIM_CAP {
        return Err(Error::DimensionTooLarge {
            dim: n,
            cap: EIG_DIM_CAP,
        });
    }

    let mut h = a.entries().clone();
    let mut z = Array2::eye(n);
    hessenberg_reduce(&mut h, &mut z);
    qr_schur(&mut h, &mut z)?;

    let tnorm = {
        let mut worst = 0.0f64;
        for i in 0..n {
            let s: f64 = (i..n).map(|j| h[[i, j]].norm()).sum();
            worst = worst.max(s);
        }
        worst.max(1.0)
    };

    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = h[[k, k]];
        let y = triangular_eigenvector(&h, k, tnorm);
        let mut v = z.dot(&y);

        // canonical form: peak coordinate exactly 1
        let peak = v
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(i, _)| i)
            .unwrap();
        let pivot = v[peak];
        if pivot.norm() == 0.0 {
            return Err(Error::ConvergenceFailure {
                what: "eigenvector back-substitution",
                iterations: n,
            });
        }
        v.mapv_inplace(|c| c / pivot);

        let vector = TruncVector::new(v.to_vec(), SpaceTag::C0)?;
        let image = a.apply(&vector)?;
        let residual = image
            .coords()
            .iter()
            .zip(vector.coords())
            .map(|(av, vv)| (av - lambda * vv).norm())
            .fold(0.0, f64::max)
            / vector.norm();
        let class = classify_eigenvalue(lambda, tol.spectral_tol);
        let artifact =
            c0_membership_defect(&vector, ARTIFACT_TAIL_FRACTION)? >= ARTIFACT_DEFECT_THRESHOLD;
        pairs.push(EigenPair {
            value: lambda,
            vector,
            residual,
            class,
            artifact,
        });
    }

    if let Some(bad) = pairs.iter().find(|p| p.residual > tol.spectral_tol) {
        return Err(Error::ConvergenceFailure {
            what: "eigenpair residual check",
            iterations: (bad.residual / tol.spectral_tol) as usize,
        });
    }

    pairs.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    Ok(SpectrumReport { pairs })
}

/// Minimum modulus over the trailing `ceil(tail_fraction * N)` coordinates
/// after sup-normalization. Near 0: consistent with c0 decay. Near 1: the
/// tail does not decay and the vector cannot stand for a c0 element.
pub fn c0_membership_defect(v: &TruncVector, tail_fraction: f64) -> Result<f64> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "tail fraction must lie in (0, 1], got {tail_fraction}"
        )));
    }
    let sup = SpaceTag::C0.norm(v.coords());
    if sup == 0.0 {
        return Err(Error::ZeroVector);
    }
    let n = v.dim();
    let tail_len = ((tail_fraction * n as f64).ceil() as usize).clamp(1, n);
    Ok(v.coords()[n - tail_len..]
        .iter()
        .map(|c| c.norm() / sup)
        .fold(f64::INFINITY, f64::min))
}

/// One dimension's worth of spurious-zero evidence.
#[derive(Debug, Clone, Serialize)]
pub struct SpuriousZeroRow {
    pub dim: usize,
    pub zero_found: bool,
    pub zero_value_re: f64,
    pub zero_value_im: f64,
    /// Tail defect of the zero-mode eigenvector; the artifact signature is a
    /// defect of 1 (constant tail).
    pub zero_defect: f64,
    pub purely_imaginary_count: usize,
    pub artifact_flagged: bool,
    pub pass: bool,
}

/// Truncation-spectrum certification for the harmonic-coupling generator.
#[derive(Debug, Clone, Serialize)]
pub struct SpuriousZeroReport {
    pub rows: Vec<SpuriousZeroRow>,
    pub overall: bool,
    pub conclusion: String,
}

/// Runs [`eig`] on the harmonic-coupling generator at each dimension,
/// locates the zero-class eigenvalue, and checks that its eigenvector is a
/// flagged truncation artifact (constant tail, defect >= 0.99) while no
/// purely imaginary eigenvalue appears. The finite section's zero mode is
/// thereby separated from the certified c0 spectrum.
pub fn spurious_zero_analysis(dims: &[usize], tol: &ToleranceConfig) -> Result<SpuriousZeroReport> {
    if dims.is_empty() {
        return Err(Error::InvalidInput(
            "at least one dimension required".into(),
        ));
    }
    let mut rows = Vec::with_capacity(dims.len());
    for &dim in dims {
        let gen = harmonic_generator(dim)?;
        let report = eig(gen.matrix(), tol)?;
        let zero_pair = report.pairs.iter().find(|p| p.class == EigenClass::Zero);
        let purely_imaginary_count = report.count_class(EigenClass::PurelyImaginary);
        let row = match zero_pair {
            Some(pair) => {
                let defect = c0_membership_defect(&pair.vector, ARTIFACT_TAIL_FRACTION)?;
                SpuriousZeroRow {
                    dim,
                    zero_found: true,
                    zero_value_re: pair.value.re,
                    zero_value_im: pair.value.im,
                    zero_defect: defect,
                    purely_imaginary_count,
                    artifact_flagged: pair.artifact,
                    pass: defect >= ARTIFACT_DEFECT_THRESHOLD
                        && pair.artifact
                        && purely_imaginary_count == 0,
                }
            }
            None => SpuriousZeroRow {
                dim,
                zero_found: false,
                zero_value_re: 0.0,
                zero_value_im: 0.0,
                zero_defect: 0.0,
                purely_imaginary_count,
                artifact_flagged: false,
                pass: false,
            },
        };
        rows.push(row);
    }
    let overall = rows.iter().all(|r| r.pass);
    Ok(SpuriousZeroReport {
        rows,
        overall,
        conclusion: "finite-section zero mode is a truncation artifact (constant eigenvector \
                     outside c0); no purely imaginary point spectrum at any tested dimension"
            .into(),
    })
}
