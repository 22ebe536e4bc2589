//! Invariant Hermitian metrics and the Kähler / SKT / balanced conditions.
//!
//! A metric is its coefficient matrix `a_{ij̄}` in the current coframe, and
//! its fundamental form is written without the customary factor of `i`:
//!
//! ```text
//! ω = Σ_{i,j} a_{ij̄} α^i∧ᾱ^j
//! ```
//!
//! Every condition implemented here is a zero test of a form that is linear
//! (or homogeneous) in `ω`, so the missing constant is irrelevant.
//!
//! * Kähler: `dω = 0`.
//! * SKT: `∂∂̄ω = 0`.
//! * balanced: `d(ω^{n-1}) = 0`, the closed-form characterisation of
//!   co-closedness for positive `(1,1)`-forms.
//!
//! The coefficient-level functions ([`balanced_residuals`],
//! [`skt_reduced_coefficients`], [`sktnew_value`]) work on a [`NormalForm`].
//! The sign of [`skt_reduced_coefficients`] is pinned by direct comparison with
//! the symbolic `∂∂̄ω`: the value for `(r, s)` is exactly the stored
//! coefficient of the canonical monomial `α^{rs r̄ s̄}` (equivalently minus the
//! coefficient along `α^{rs s̄ r̄}`).

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, ComplexNilAlgebra, CoframeChange, NormalForm};
use crate::forms::{Differential, Form};
use crate::linalg::{self, Matrix};
use crate::scalar::{cq_real, exact_from_f64, rational_sqrt, to_complex64, Cq, ParseScalarError, RationalText};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("metric matrix is not square")]
    NotSquare,
    #[error("metric matrix is not Hermitian")]
    NotHermitian,
    #[error("metric matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("metric entry ({i}, {j}) is out of range 1..={n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("metric entry ({i}, {j}) lies above the diagonal; give the lower triangle")]
    UpperTriangle { i: usize, j: usize },
    #[error("duplicate metric entry ({i}, {j})")]
    Duplicate { i: usize, j: usize },
    #[error("diagonal metric entry ({i}, {i}) has a nonzero imaginary part")]
    ComplexDiagonal { i: usize },
    #[error("bad scalar in metric entry ({i}, {j}): {source}")]
    Scalar { i: usize, j: usize, source: ParseScalarError },
    #[error("non-finite floating-point metric entry")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("pivot {index} = {pivot} is not the square of a rational; no exactly unitary coframe over Q(i)")]
    IrrationalPivot { index: usize, pivot: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Hermitian positive-definite coefficient matrix `a_{ij̄}` (0-based storage,
/// 1-based accessors).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMetric {
    a: Matrix<Cq>,
}

impl HermitianMetric {
    pub fn new(a: Matrix<Cq>) -> Result<Self, MetricError> {
        let n = a.len();
        if n == 0 || a.iter().any(|r| r.len() != n) {
            return Err(MetricError::NotSquare);
        }
        if !linalg::is_hermitian(&a) {
            return Err(MetricError::NotHermitian);
        }
        if !linalg::is_positive_definite(&a) {
            return Err(MetricError::NotPositiveDefinite);
        }
        Ok(HermitianMetric { a })
    }

    pub fn identity(n: usize) -> Self {
        HermitianMetric { a: linalg::identity(n) }
    }

    pub fn diagonal(entries: &[BigRational]) -> Result<Self, MetricError> {
        let n = entries.len();
        let mut a = linalg::zeros(n, n);
        for (i, d) in entries.iter().enumerate() {
            a[i][i] = cq_real(d.clone());
        }
        Self::new(a)
    }

    /// Exact binary-to-rational conversion of a floating-point matrix.
    pub fn from_float(rows: &[Vec<Complex64>]) -> Result<Self, MetricError> {
        let a = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|z| {
                        Ok(Complex::new(
                            exact_from_f64(z.re).ok_or(MetricError::NonFinite)?,
                            exact_from_f64(z.im).ok_or(MetricError::NonFinite)?,
                        ))
                    })
                    .collect::<Result<Vec<Cq>, MetricError>>()
            })
            .collect::<Result<Matrix<Cq>, MetricError>>()?;
        Self::new(a)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn matrix(&self) -> &Matrix<Cq> {
        &self.a
    }

    /// `a_{ij̄}`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> &Cq {
        &self.a[i - 1][j - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.a == linalg::identity::<Cq>(self.n())
    }

    /// `ω(X, X̄) = Σ a_{ij̄} x_i x̄_j` for the `(1,0)`-vector with components `x`.
    pub fn pairing(&self, x: &[Cq]) -> Cq {
        let n = self.n();
        let mut acc = Cq::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                acc += self.a[i][j].clone() * x[i].clone() * x[j].conj();
            }
        }
        acc
    }

    /// Coefficient matrix with respect to the coframe `β = P α`.
    pub fn in_coframe(&self, change: &CoframeChange) -> Result<Self, MetricError> {
        if change.n() != self.n() {
            return Err(MetricError::DimensionMismatch { expected: self.n(), got: change.n() });
        }
        let s = change.inverse().ok_or(AlgebraError::SingularChange)?.matrix;
        let st_a = linalg::mat_mul(&linalg::transpose(&s), &self.a);
        Ok(HermitianMetric { a: linalg::mat_mul(&st_a, &linalg::conj_matrix(&s)) })
    }

    pub fn to_float(&self) -> DMatrix<Complex64> {
        let n = self.n();
        DMatrix::from_fn(n, n, |i, j| to_complex64(&self.a[i][j]))
    }

    fn check_dim(&self, n: usize) -> Result<(), MetricError> {
        if self.n() == n {
            Ok(())
        } else {
            Err(MetricError::DimensionMismatch { expected: n, got: self.n() })
        }
    }
}

/// `Σ a_{ij̄} α^i∧ᾱ^j` for any square matrix (positivity not required).
pub fn form_of_matrix(a: &[Vec<Cq>]) -> Form<Cq> {
    let n = a.len();
    let mut out = Form::zero(n);
    for (i, row) in a.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            out = &out + &Form::monomial(n, &[i + 1], &[j + 1], c.clone());
        }
    }
    out
}

pub fn fundamental_form(h: &HermitianMetric) -> Form<Cq> {
    form_of_matrix(&h.a)
}

/// Defects of the three conditions, with the defect forms themselves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MetricClass {
    #[serde(with = "crate::scalar::serde_rational")]
    pub kahler_defect: BigRational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub skt_defect: BigRational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub balanced_defect: BigRational,
    pub kahler: bool,
    pub skt: bool,
    pub balanced: bool,
    /// `dω`
    pub d_omega: Form<Cq>,
    /// `∂∂̄ω`
    pub ddbar_omega: Form<Cq>,
    /// `d(ω^{n-1})`
    pub d_omega_power: Form<Cq>,
}

/// Symbolic `∂∂̄ω` for a `(1,1)`-form.
pub fn ddbar(d: &Differential<Cq>, omega: &Form<Cq>) -> Form<Cq> {
    d.del(&d.delbar(omega))
}

pub fn classify(h: &HermitianMetric, algebra: &ComplexNilAlgebra) -> Result<MetricClass, MetricError> {
    h.check_dim(algebra.n())?;
    let d = algebra.differential();
    let omega = fundamental_form(h);
    let d_omega = d.apply(&omega);
    let ddbar_omega = ddbar(&d, &omega);
    let n = algebra.n();
    // ω^0 = 1 is closed, so for n = 1 balancedness is read as Kählerness
    let d_omega_power = if n == 1 { d_omega.clone() } else { d.apply(&omega.wedge_pow(n - 1)) };
    Ok(MetricClass {
        kahler_defect: d_omega.coeff_norm_sq(),
        skt_defect: ddbar_omega.coeff_norm_sq(),
        balanced_defect: d_omega_power.coeff_norm_sq(),
        kahler: d_omega.is_zero(),
        skt: ddbar_omega.is_zero(),
        balanced: d_omega_power.is_zero(),
        d_omega,
        ddbar_omega,
        d_omega_power,
    })
}

/// Flag-preserving change to a coframe in which the metric is diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagonalized {
    pub normal_form: NormalForm,
    /// Lower unit-triangular `L`, new coframe `β = L α`.
    pub change: CoframeChange,
    /// Metric in the new coframe is `diag(pivots)`.
    pub pivots: Vec<BigRational>,
}

/// Writes `ā = L† D L` with `L` lower unit-triangular, working from the last
/// index up (so `L` keeps every span `⟨α^1..α^m⟩`).
fn reverse_ldl(a: &[Vec<Cq>]) -> Result<(Matrix<Cq>, Vec<BigRational>), MetricError> {
    let n = a.len();
    // B = J ā J, then the ordinary B = L' D' L'†
    let b: Matrix<Cq> = (0..n).map(|i| (0..n).map(|j| a[n - 1 - i][n - 1 - j].conj()).collect()).collect();
    let mut l: Matrix<Cq> = linalg::identity(n);
    let mut d: Vec<BigRational> = Vec::with_capacity(n);
    for k in 0..n {
        let mut dk = b[k][k].re.clone();
        for m in 0..k {
            dk -= l[k][m].norm_sqr() * &d[m];
        }
        if dk <= BigRational::zero() {
            return Err(MetricError::NotPositiveDefinite);
        }
        for i in k + 1..n {
            let mut v = b[i][k].clone();
            for m in 0..k {
                v -= l[i][m].clone() * l[k][m].conj() * cq_real(d[m].clone());
            }
            l[i][k] = v / cq_real(dk.clone());
        }
        d.push(dk);
    }
    // L = J L'† J, D = J D' J
    let lower: Matrix<Cq> = (0..n).map(|i| (0..n).map(|j| l[n - 1 - j][n - 1 - i].conj()).collect()).collect();
    d.reverse();
    Ok((lower, d))
}

pub fn diagonalize(nf: &NormalForm, h: &HermitianMetric) -> Result<Diagonalized, MetricError> {
    h.check_dim(nf.n())?;
    let (lower, pivots) = reverse_ldl(h.matrix())?;
    let change = CoframeChange { matrix: lower };
    let base = nf.base().change_coframe(&change)?;
    let normal_form = NormalForm::from_parts(base, nf.k(), nf.change().then(&change));
    Ok(Diagonalized { normal_form, change, pivots })
}

/// Gram–Schmidt in the coframe order: a lower-triangular `T` with positive
/// diagonal such that `h` is the identity in `β = T α`. Returns the normal
/// form in the new coframe (same `k`) and `T`.
///
/// Exact over `Q(i)` only when every pivot of the factorisation is a rational
/// square; otherwise [`MetricError::IrrationalPivot`] (use [`diagonalize`],
/// which is always exact).
pub fn unitarize(nf: &NormalForm, h: &HermitianMetric) -> Result<(NormalForm, CoframeChange), MetricError> {
    let diag = diagonalize(nf, h)?;
    let mut roots = Vec::with_capacity(diag.pivots.len());
    for (idx, p) in diag.pivots.iter().enumerate() {
        let root = rational_sqrt(p).ok_or_else(|| MetricError::IrrationalPivot {
            index: idx + 1,
            pivot: crate::scalar::format_rational(p),
        })?;
        roots.push(root);
    }
    let scaled: Matrix<Cq> = diag
        .change
        .matrix
        .iter()
        .zip(&roots)
        .map(|(row, r)| row.iter().map(|c| c.clone() * cq_real(r.clone())).collect())
        .collect();
    let t = CoframeChange { matrix: scaled };
    let base = nf.base().change_coframe(&t)?;
    Ok((NormalForm::from_parts(base, nf.k(), nf.change().then(&t)), t))
}

/// `Σ_{r≤k} c^l_{rr̄}` for each `l > k`; in a unitary coframe these all vanish
/// exactly when the metric is balanced.
pub fn balanced_residuals(nf: &NormalForm) -> BTreeMap<usize, Cq> {
    let unit = vec![BigRational::one(); nf.n()];
    balanced_residuals_diagonal(nf, &unit)
}

/// Residuals for the diagonal metric `diag(pivots)` in the normal-form
/// coframe: `Σ_{r≤k} c^l_{rr̄} / d_r`. Up to the positive factor `√d_l` these
/// are the unitary-coframe residuals.
pub fn balanced_residuals_diagonal(nf: &NormalForm, pivots: &[BigRational]) -> BTreeMap<usize, Cq> {
    let (n, k) = (nf.n(), nf.k());
    let alg = nf.base();
    (k + 1..=n)
        .map(|l| {
            let sum = (1..=k).fold(Cq::zero(), |acc, r| {
                acc + alg.c11(l, r, r) * cq_real(BigRational::one() / &pivots[r - 1])
            });
            (l, sum)
        })
        .collect()
}

/// For `1 ≤ r < s ≤ k`:
/// `Σ_{i,j>k} a_{ij̄}(c^i_{rr̄}c̄^j_{ss̄} − c^i_{sr̄}c̄^j_{sr̄} + c^i_{ss̄}c̄^j_{rr̄} − c^i_{rs̄}c̄^j_{rs̄} + c^i_{rs}c̄^j_{sr})`,
/// which equals the coefficient of `α^{rs r̄ s̄}` in `∂∂̄ω`.
pub fn skt_reduced_coefficients(
    nf: &NormalForm,
    h: &HermitianMetric,
) -> Result<BTreeMap<(usize, usize), Cq>, MetricError> {
    h.check_dim(nf.n())?;
    let (n, k) = (nf.n(), nf.k());
    let c = nf.base();
    let mut out = BTreeMap::new();
    for r in 1..=k {
        for s in r + 1..=k {
            let mut acc = Cq::zero();
            for i in k + 1..=n {
                for j in k + 1..=n {
                    let a = h.entry(i, j);
                    if a.is_zero() {
                        continue;
                    }
                    let term = c.c11(i, r, r) * c.c11(j, s, s).conj()
                        - c.c11(i, s, r) * c.c11(j, s, r).conj()
                        + c.c11(i, s, s) * c.c11(j, r, r).conj()
                        - c.c11(i, r, s) * c.c11(j, r, s).conj()
                        + c.c20(i, r, s) * c.c20(j, s, r).conj();
                    acc += a.clone() * term;
                }
            }
            out.insert((r, s), acc);
        }
    }
    Ok(out)
}

/// `Σ_{i,j>k} Σ_{r,s≤k} a_{ij̄}(2 c^i_{sr̄} c̄^j_{sr̄} + c^i_{rs} c̄^j_{rs})`.
/// Real and nonnegative for positive `h`; zero exactly when all constants
/// vanish.
pub fn sktnew_value(nf: &NormalForm, h: &HermitianMetric) -> Result<Cq, MetricError> {
    let unit = vec![BigRational::one(); nf.n()];
    sktnew_value_weighted(nf, h, &unit)
}

/// [`sktnew_value`] with each `(r, s)` term weighted by `w_r w_s`. With
/// `w_r = 1/d_r` this is the unitary-coframe value for a metric that is
/// `diag(d)` in the normal-form coframe.
pub fn sktnew_value_weighted(
    nf: &NormalForm,
    h: &HermitianMetric,
    weights: &[BigRational],
) -> Result<Cq, MetricError> {
    h.check_dim(nf.n())?;
    let (n, k) = (nf.n(), nf.k());
    let c = nf.base();
    let two = cq_real(BigRational::from_integer(2.into()));
    let mut acc = Cq::zero();
    for r in 1..=k {
        for s in 1..=k {
            let w = cq_real(&weights[r - 1] * &weights[s - 1]);
            for i in k + 1..=n {
                for j in k + 1..=n {
                    let a = h.entry(i, j);
                    if a.is_zero() {
                        continue;
                    }
                    let term = two.clone() * c.c11(i, s, r) * c.c11(j, s, r).conj()
                        + c.c20(i, r, s) * c.c20(j, r, s).conj();
                    acc += a.clone() * term * w.clone();
                }
            }
        }
    }
    Ok(acc)
}

/// On-disk metric description: the lower triangle including the diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricFile {
    pub n: usize,
    pub entries: Vec<MetricEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricEntry {
    pub i: usize,
    pub j: usize,
    pub re: RationalText,
    #[serde(default)]
    pub im: RationalText,
}

impl TryFrom<MetricFile> for HermitianMetric {
    type Error = MetricError;

    fn try_from(file: MetricFile) -> Result<Self, MetricError> {
        let n = file.n;
        if n == 0 || n > crate::forms::MAX_DIM {
            return Err(MetricError::NotSquare);
        }
        let mut a: Matrix<Cq> = linalg::zeros(n, n);
        let mut seen = std::collections::BTreeSet::new();
        for e in &file.entries {
            let (i, j) = (e.i, e.j);
            if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
                return Err(MetricError::IndexOutOfRange { i, j, n });
            }
            if i < j {
                return Err(MetricError::UpperTriangle { i, j });
            }
            if !seen.insert((i, j)) {
                return Err(MetricError::Duplicate { i, j });
            }
            let wrap = |source| MetricError::Scalar { i, j, source };
            let v = Complex::new(e.re.parse().map_err(wrap)?, e.im.parse().map_err(wrap)?);
            if i == j && !v.im.is_zero() {
                return Err(MetricError::ComplexDiagonal { i });
            }
            a[j - 1][i - 1] = v.conj();
            a[i - 1][j - 1] = v;
        }
        HermitianMetric::new(a)
    }
}

impl From<&HermitianMetric> for MetricFile {
    fn from(h: &HermitianMetric) -> Self {
        let n = h.n();
        let mut entries = Vec::new();
        for i in 1..=n {
            for j in 1..=i {
                let v = h.entry(i, j);
                if v.is_zero() {
                    continue;
                }
                entries.push(MetricEntry {
                    i,
                    j,
                    re: RationalText::from_rational(&v.re),
                    im: RationalText::from_rational(&v.im),
                });
            }
        }
        MetricFile { n, entries }
    }
}

impl Serialize for HermitianMetric {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MetricFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianMetric {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = MetricFile::deserialize(d)?;
        HermitianMetric::try_from(file).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cq, int, rat};

    fn iwasawa() -> ComplexNilAlgebra {
        ComplexNilAlgebra::new("iwasawa", 3).unwrap().with_two_zero(3, 1, 2, cq(1, 0)).unwrap()
    }

    fn kt() -> ComplexNilAlgebra {
        ComplexNilAlgebra::new("kt", 2).unwrap().with_one_one(2, 1, 1, cq(1, 0)).unwrap()
    }

    #[test]
    fn fundamental_form_examples() {
        let id = HermitianMetric::identity(2);
        let expected = &Form::monomial(2, &[1], &[1], cq(1, 0)) + &Form::monomial(2, &[2], &[2], cq(1, 0));
        assert_eq!(fundamental_form(&id), expected);

        let h = HermitianMetric::new(vec![vec![cq(1, 0), cq(0, 1)], vec![cq(0, -1), cq(2, 0)]]).unwrap();
        let omega = fundamental_form(&h);
        assert_eq!(omega.coeff(&[1], &[2]), cq(0, 1));
        assert_eq!(omega.coeff(&[2], &[1]), cq(0, -1));

        let zero = vec![vec![cq(0, 0); 2]; 2];
        assert_eq!(HermitianMetric::new(zero), Err(MetricError::NotPositiveDefinite));
        let skew = vec![vec![cq(1, 0), cq(1, 0)], vec![cq(0, 0), cq(1, 0)]];
        assert_eq!(HermitianMetric::new(skew), Err(MetricError::NotHermitian));
    }

    #[test]
    fn classify_iwasawa_identity() {
        let class = classify(&HermitianMetric::identity(3), &iwasawa()).unwrap();
        assert!(!class.kahler);
        assert!(!class.skt);
        assert!(class.balanced);
        assert_eq!(class.skt_defect, int(1));
        assert_eq!(class.ddbar_omega, Form::monomial(3, &[1, 2], &[1, 2], cq(-1, 0)));
    }

    #[test]
    fn classify_kodaira_thurston() {
        let h = HermitianMetric::new(vec![vec![cq(3, 0), cq(1, -1)], vec![cq(1, 1), cq(2, 0)]]).unwrap();
        let class = classify(&h, &kt()).unwrap();
        assert!(class.skt && !class.balanced && !class.kahler);
    }

    #[test]
    fn classify_torus() {
        let torus = ComplexNilAlgebra::new("torus", 3).unwrap();
        let class = classify(&HermitianMetric::identity(3), &torus).unwrap();
        assert!(class.kahler && class.skt && class.balanced);
    }

    #[test]
    fn unitarize_kodaira_thurston_scaling() {
        let nf = kt().to_normal_form().normal().unwrap();
        let h = HermitianMetric::diagonal(&[int(4), int(1)]).unwrap();
        let (unitary, t) = unitarize(&nf, &h).unwrap();
        assert_eq!(t.matrix, vec![vec![cq(2, 0), cq(0, 0)], vec![cq(0, 0), cq(1, 0)]]);
        assert_eq!(unitary.base().c11(2, 1, 1), cq_real(rat(1, 4)));
        assert!(h.in_coframe(&t).unwrap().is_identity());
    }

    #[test]
    fn unitarize_identity_is_trivial() {
        let nf = iwasawa().to_normal_form().normal().unwrap();
        let (unitary, t) = unitarize(&nf, &HermitianMetric::identity(3)).unwrap();
        assert!(t.is_identity());
        assert_eq!(unitary.base(), nf.base());
    }

    #[test]
    fn unitarize_off_diagonal() {
        // a = [[1, c], [c̄, 1 + |c|²]] with c = 3/4 + i/2: pivots 1 + |c|² = 29/16 …
        // pick c = 3/4 so that 1 + |c|² = 25/16 is a square
        let c = cq_real(rat(3, 4));
        let a22 = cq_real(int(1) + rat(9, 16));
        let h = HermitianMetric::new(vec![vec![cq(1, 0), c.clone()], vec![c.conj(), a22]]).unwrap();
        let nf = kt().to_normal_form().normal().unwrap();
        let (_, t) = unitarize(&nf, &h).unwrap();
        assert!(t.is_lower_triangular());
        assert!(h.in_coframe(&t).unwrap().is_identity());
    }

    #[test]
    fn unitarize_reports_irrational_pivot() {
        let nf = kt().to_normal_form().normal().unwrap();
        let h = HermitianMetric::diagonal(&[int(2), int(1)]).unwrap();
        assert!(matches!(unitarize(&nf, &h), Err(MetricError::IrrationalPivot { index: 1, .. })));
        let diag = diagonalize(&nf, &h).unwrap();
        assert_eq!(diag.pivots, vec![int(2), int(1)]);
    }

    #[test]
    fn residual_examples() {
        let nf = iwasawa().to_normal_form().normal().unwrap();
        assert_eq!(balanced_residuals(&nf)[&3], cq(0, 0));
        let nf = kt().to_normal_form().normal().unwrap();
        assert_eq!(balanced_residuals(&nf)[&2], cq(1, 0));
        let bns = ComplexNilAlgebra::new("bns", 3)
            .unwrap()
            .with_one_one(3, 1, 1, cq(1, 0))
            .unwrap()
            .with_one_one(3, 2, 2, cq(-1, 0))
            .unwrap();
        let nf = bns.to_normal_form().normal().unwrap();
        assert_eq!(balanced_residuals(&nf)[&3], cq(0, 0));
        let coeffs = skt_reduced_coefficients(&nf, &HermitianMetric::identity(3)).unwrap();
        assert_eq!(coeffs[&(1, 2)], cq(-2, 0));
    }

    #[test]
    fn sktnew_examples() {
        let torus = ComplexNilAlgebra::new("torus", 2).unwrap().to_normal_form().normal().unwrap();
        assert_eq!(sktnew_value(&torus, &HermitianMetric::identity(2)).unwrap(), cq(0, 0));
        let nf = kt().to_normal_form().normal().unwrap();
        assert_eq!(sktnew_value(&nf, &HermitianMetric::identity(2)).unwrap(), cq(2, 0));
        let snb = ComplexNilAlgebra::new("snb", 3)
            .unwrap()
            .with_one_one(3, 1, 1, cq(1, 0))
            .unwrap()
            .with_one_one(3, 1, 2, cq(1, 0))
            .unwrap()
            .with_one_one(3, 2, 1, cq(1, 0))
            .unwrap()
            .with_one_one(3, 2, 2, cq(1, 0))
            .unwrap();
        let nf = snb.to_normal_form().normal().unwrap();
        let id = HermitianMetric::identity(3);
        assert_eq!(sktnew_value(&nf, &id).unwrap(), cq(8, 0));
        assert_eq!(skt_reduced_coefficients(&nf, &id).unwrap()[&(1, 2)], cq(0, 0));
    }

    #[test]
    fn metric_file_rules() {
        let ok = r#"{"n":2,"entries":[{"i":1,"j":1,"re":"2"},{"i":2,"j":1,"re":"1/2","im":"1"},{"i":2,"j":2,"re":"3"}]}"#;
        let h: HermitianMetric = serde_json::from_str(ok).unwrap();
        assert_eq!(h.entry(1, 2), &Complex::new(rat(1, 2), int(-1)));
        let back: HermitianMetric = serde_json::from_str(&serde_json::to_string(&h).unwrap()).unwrap();
        assert_eq!(back, h);
        let upper = r#"{"n":2,"entries":[{"i":1,"j":2,"re":"1"}]}"#;
        assert!(serde_json::from_str::<HermitianMetric>(upper).is_err());
        let complex_diag = r#"{"n":1,"entries":[{"i":1,"j":1,"re":"1","im":"1"}]}"#;
        assert!(serde_json::from_str::<HermitianMetric>(complex_diag).is_err());
    }

    #[test]
    fn float_metrics_are_rationalised_exactly() {
        let rows = vec![vec![Complex64::new(0.5, 0.0), Complex64::new(0.25, 0.0)], vec![
            Complex64::new(0.25, 0.0),
            Complex64::new(1.0, 0.0),
        ]];
        let h = HermitianMetric::from_float(&rows).unwrap();
        assert_eq!(h.entry(1, 2), &cq_real(rat(1, 4)));
    }
}
