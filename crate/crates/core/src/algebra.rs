//! Nilpotent Lie algebras with an integrable complex structure, presented by
//! the structure constants of `d` on a `(1,0)`-coframe:
//!
//! ```text
//! dα^j = Σ_{r<s} A^j_{rs} α^r∧α^s + Σ_{r,s} B^j_{rs̄} α^r∧ᾱ^s
//! ```
//!
//! Sign convention: `dφ(X, Y) = -φ([X, Y])`, so `d∘d = 0` is the Jacobi
//! identity. No `(0,2)` part is representable, which is exactly the
//! integrability of the complex structure. The antisymmetric
//! constants `c^j_{rs}` with the `½` factor are `A^j_{rs}` for `r < s`,
//! extended by `c^j_{sr} = -c^j_{rs}`.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::{Differential, Form, MAX_DIM};
use crate::linalg::{self, Matrix};
use crate::scalar::{Cq, ParseScalarError, RationalText};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("complex dimension must be in 1..={max}, got {0}", max = MAX_DIM)]
    Dimension(usize),
    #[error("{part} index ({j}, {r}, {s}) out of range 1..={n}")]
    IndexOutOfRange { part: &'static str, j: usize, r: usize, s: usize, n: usize },
    #[error("twoZero entry ({j}, {r}, {s}) must have r < s")]
    NotIncreasing { j: usize, r: usize, s: usize },
    #[error("duplicate {part} entry ({j}, {r}, {s})")]
    Duplicate { part: &'static str, j: usize, r: usize, s: usize },
    #[error("bad scalar in {part} entry ({j}, {r}, {s}): {source}")]
    Scalar { part: &'static str, j: usize, r: usize, s: usize, source: ParseScalarError },
    #[error("not nilpotent: the filtration of closed forms stops at dimension {reached} of {total}")]
    NotNilpotent { reached: usize, total: usize },
    #[error("coframe change is not invertible")]
    SingularChange,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not in normal-form shape: {0}")]
    NotNormalForm(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexNilAlgebra {
    name: String,
    n: usize,
    two_zero: BTreeMap<(usize, usize, usize), Cq>,
    one_one: BTreeMap<(usize, usize, usize), Cq>,
}

impl ComplexNilAlgebra {
    /// The abelian algebra of complex dimension `n`.
    pub fn new(name: impl Into<String>, n: usize) -> Result<Self, AlgebraError> {
        if n == 0 || n > MAX_DIM {
            return Err(AlgebraError::Dimension(n));
        }
        Ok(ComplexNilAlgebra {
            name: name.into(),
            n,
            two_zero: BTreeMap::new(),
            one_one: BTreeMap::new(),
        })
    }

    /// Adds `c · α^r∧α^s` (`r < s`) to `dα^j`.
    pub fn with_two_zero(mut self, j: usize, r: usize, s: usize, c: Cq) -> Result<Self, AlgebraError> {
        self.insert_two_zero(j, r, s, c)?;
        Ok(self)
    }

    /// Adds `c · α^r∧ᾱ^s` to `dα^j`.
    pub fn with_one_one(mut self, j: usize, r: usize, s: usize, c: Cq) -> Result<Self, AlgebraError> {
        self.insert_one_one(j, r, s, c)?;
        Ok(self)
    }

    fn check_range(&self, part: &'static str, j: usize, r: usize, s: usize) -> Result<(), AlgebraError> {
        let n = self.n;
        if [j, r, s].iter().all(|&i| (1..=n).contains(&i)) {
            Ok(())
        } else {
            Err(AlgebraError::IndexOutOfRange { part, j, r, s, n })
        }
    }

    fn insert_two_zero(&mut self, j: usize, r: usize, s: usize, c: Cq) -> Result<(), AlgebraError> {
        self.check_range("twoZero", j, r, s)?;
        if r >= s {
            return Err(AlgebraError::NotIncreasing { j, r, s });
        }
        if self.two_zero.contains_key(&(j, r, s)) {
            return Err(AlgebraError::Duplicate { part: "twoZero", j, r, s });
        }
        if !c.is_zero() {
            self.two_zero.insert((j, r, s), c);
        }
        Ok(())
    }

    fn insert_one_one(&mut self, j: usize, r: usize, s: usize, c: Cq) -> Result<(), AlgebraError> {
        self.check_range("oneOne", j, r, s)?;
        if self.one_one.contains_key(&(j, r, s)) {
            return Err(AlgebraError::Duplicate { part: "oneOne", j, r, s });
        }
        if !c.is_zero() {
            self.one_one.insert((j, r, s), c);
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn two_zero_entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Cq)> {
        self.two_zero.iter()
    }

    pub fn one_one_entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Cq)> {
        self.one_one.iter()
    }

    /// Antisymmetric `(2,0)` constant `c^j_{rs}`.
    pub fn c20(&self, j: usize, r: usize, s: usize) -> Cq {
        use std::cmp::Ordering::*;
        match r.cmp(&s) {
            Less => self.two_zero.get(&(j, r, s)).cloned().unwrap_or_else(Cq::zero),
            Greater => -self.two_zero.get(&(j, s, r)).cloned().unwrap_or_else(Cq::zero),
            Equal => Cq::zero(),
        }
    }

    /// `(1,1)` constant `c^j_{rs̄}`.
    pub fn c11(&self, j: usize, r: usize, s: usize) -> Cq {
        self.one_one.get(&(j, r, s)).cloned().unwrap_or_else(Cq::zero)
    }

    pub fn is_abelian(&self) -> bool {
        self.two_zero.is_empty() && self.one_one.is_empty()
    }

    /// `dα^j` as a form.
    pub fn generator_differential(&self, j: usize) -> Form<Cq> {
        let mut out = Form::zero(self.n);
        for (&(jj, r, s), c) in self.two_zero.range((j, 0, 0)..(j + 1, 0, 0)) {
            debug_assert_eq!(jj, j);
            out = &out + &Form::monomial(self.n, &[r, s], &[], c.clone());
        }
        for (&(_, r, s), c) in self.one_one.range((j, 0, 0)..(j + 1, 0, 0)) {
            out = &out + &Form::monomial(self.n, &[r], &[s], c.clone());
        }
        out
    }

    pub fn differential(&self) -> Differential<Cq> {
        Differential::new(self)
    }

    /// `dφ`, building the differential on the fly.
    pub fn d(&self, form: &Form<Cq>) -> Form<Cq> {
        self.differential().apply(form)
    }

    /// `d(dα^j)` for every generator; the report lists the nonzero ones and
    /// is valid iff there are none.
    pub fn validate(&self) -> ValidationReport {
        let d = self.differential();
        let residuals: Vec<GeneratorResidual> = (1..=self.n)
            .map(|j| GeneratorResidual { j, d_squared: d.apply(&self.generator_differential(j)) })
            .filter(|r| !r.d_squared.is_zero())
            .collect();
        ValidationReport { valid: residuals.is_empty(), residuals }
    }

    /// Coordinates of `d` on the `2n` complex 1-forms `α^1…α^n, ᾱ^1…ᾱ^n`.
    fn one_form_differentials(&self) -> Vec<Form<Cq>> {
        let d = self.differential();
        (1..=self.n)
            .map(|j| Form::holo(self.n, j))
            .chain((1..=self.n).map(|j| Form::anti(self.n, j)))
            .map(|e| d.apply(&e))
            .collect()
    }

    /// Nilpotency step from the ascending filtration
    /// `V_0 = 0`, `V_{i+1} = {φ : dφ ∈ Λ²V_i}` of 1-forms; `1` iff abelian.
    ///
    /// Works on the complexification, which is conjugation-stable at every
    /// stage, so the dimensions agree with the real filtration.
    pub fn nilpotency_step(&self) -> Result<usize, AlgebraError> {
        let total = 2 * self.n;
        let dphi = self.one_form_differentials();
        let mut basis: Matrix<Cq> = Vec::new();
        let mut step = 0;
        loop {
            let annihilator = if basis.is_empty() {
                linalg::identity::<Cq>(total)
            } else {
                linalg::kernel(&basis, total)
            };
            // rows: (X, output coordinate) of ι_X dφ; columns: the basis 1-forms
            let mut rows: Matrix<Cq> = Vec::new();
            for x in &annihilator {
                let (hx, ax) = x.split_at(self.n);
                let images: Vec<Form<Cq>> = dphi.iter().map(|f| f.interior(hx, ax)).collect();
                for t in 0..total {
                    let coord = if t < self.n {
                        crate::forms::Mono::from_indices(&[t + 1], &[])
                    } else {
                        crate::forms::Mono::from_indices(&[], &[t + 1 - self.n])
                    };
                    let row: Vec<Cq> = images.iter().map(|img| img.coeff_of(coord)).collect();
                    if row.iter().any(|c| !c.is_zero()) {
                        rows.push(row);
                    }
                }
            }
            let next = if rows.is_empty() {
                linalg::identity::<Cq>(total)
            } else {
                linalg::kernel(&rows, total)
            };
            step += 1;
            if next.len() == total {
                return Ok(step);
            }
            if next.len() == basis.len() {
                return Err(AlgebraError::NotNilpotent { reached: next.len(), total });
            }
            basis = next;
        }
    }

    /// The same algebra in the coframe `β = P α`.
    pub fn change_coframe(&self, change: &CoframeChange) -> Result<ComplexNilAlgebra, AlgebraError> {
        if change.n() != self.n {
            return Err(AlgebraError::DimensionMismatch { expected: self.n, got: change.n() });
        }
        let inverse = linalg::inverse(&change.matrix).ok_or(AlgebraError::SingularChange)?;
        let n = self.n;
        // α^l and ᾱ^l written in the new coframe
        let holo: Vec<Form<Cq>> = (0..n)
            .map(|l| {
                (0..n).fold(Form::zero(n), |acc, m| {
                    &acc + &Form::monomial(n, &[m + 1], &[], inverse[l][m].clone())
                })
            })
            .collect();
        let anti: Vec<Form<Cq>> = holo.iter().map(Form::conjugate).collect();
        let d_old: Vec<Form<Cq>> = (1..=n)
            .map(|j| {
                let mut f = Form::zero(n);
                for (&(jj, r, s), c) in &self.two_zero {
                    if jj == j {
                        f = &f + &holo[r - 1].wedge(&holo[s - 1]).scale(c);
                    }
                }
                for (&(jj, r, s), c) in &self.one_one {
                    if jj == j {
                        f = &f + &holo[r - 1].wedge(&anti[s - 1]).scale(c);
                    }
                }
                f
            })
            .collect();
        let mut out = ComplexNilAlgebra::new(self.name.clone(), n)?;
        for m in 0..n {
            let dm = (0..n).fold(Form::zero(n), |acc, j| &acc + &d_old[j].scale(&change.matrix[m][j]));
            for (mono, c) in dm.terms() {
                let h = mono.holo_indices();
                let a = mono.anti_indices();
                match (h.as_slice(), a.as_slice()) {
                    ([r, s], []) => out.insert_two_zero(m + 1, *r, *s, c.clone())?,
                    ([r], [s]) => out.insert_one_one(m + 1, *r, *s, c.clone())?,
                    _ => unreachable!("d of a 1-form without (0,2) part has only (2,0)+(1,1) terms"),
                }
            }
        }
        Ok(out)
    }

    /// Basis of the closed `(1,0)`-forms as rows in reduced echelon form
    /// (pivots as far left as possible).
    fn closed_holo_basis(&self) -> (Matrix<Cq>, Vec<usize>) {
        let n = self.n;
        let d: Vec<Form<Cq>> = (1..=n).map(|j| self.generator_differential(j)).collect();
        let monos: std::collections::BTreeSet<_> =
            d.iter().flat_map(|f| f.terms().map(|(m, _)| *m)).collect();
        let rows: Matrix<Cq> = monos.iter().map(|m| d.iter().map(|f| f.coeff_of(*m)).collect()).collect();
        let mut ker = if rows.is_empty() { linalg::identity(n) } else { linalg::kernel(&rows, n) };
        let pivots = linalg::rref(&mut ker);
        (ker, pivots)
    }

    /// Flag-adapted coframe with the closed forms first; see [`NormalFormOutcome`].
    pub fn to_normal_form(&self) -> NormalFormOutcome {
        let n = self.n;
        if self.is_abelian() {
            return NormalFormOutcome::Normal(NormalForm {
                base: self.clone(),
                k: n,
                change: CoframeChange::identity(n),
            });
        }
        let (closed, pivots) = self.closed_holo_basis();
        let k = closed.len();
        let mut matrix = closed;
        for j in (0..n).filter(|j| !pivots.contains(j)) {
            let mut e = vec![Cq::zero(); n];
            e[j] = Cq::one();
            matrix.push(e);
        }
        let change = CoframeChange { matrix };
        let base = self
            .change_coframe(&change)
            .expect("echelon basis completed by unit vectors is invertible");
        match NormalForm::offending_generator(&base, k) {
            None => NormalFormOutcome::Normal(NormalForm { base, k, change }),
            Some(j) => NormalFormOutcome::OutsideLemmaClass { k, offending_generator: j, change },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GeneratorResidual {
    pub j: usize,
    pub d_squared: Form<Cq>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub residuals: Vec<GeneratorResidual>,
}

/// Invertible change of `(1,0)`-coframe `β^m = Σ_j P_{mj} α^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoframeChange {
    pub matrix: Matrix<Cq>,
}

impl CoframeChange {
    pub fn identity(n: usize) -> Self {
        CoframeChange { matrix: linalg::identity(n) }
    }

    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == linalg::identity::<Cq>(self.n())
    }

    /// `self` followed by `next`: `γ = next·(self·α)`.
    pub fn then(&self, next: &CoframeChange) -> CoframeChange {
        CoframeChange { matrix: linalg::mat_mul(&next.matrix, &self.matrix) }
    }

    pub fn inverse(&self) -> Option<CoframeChange> {
        linalg::inverse(&self.matrix).map(|matrix| CoframeChange { matrix })
    }

    /// Lower triangular, i.e. `span{β^1..β^m} = span{α^1..α^m}` for every `m`
    /// (given invertibility).
    pub fn is_lower_triangular(&self) -> bool {
        self.matrix
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().skip(i + 1).all(Zero::is_zero))
    }

    /// Whether `span{β^1..β^k} = span{α^1..α^k}`.
    pub fn preserves_span(&self, k: usize) -> bool {
        self.matrix.iter().take(k).all(|row| row.iter().skip(k).all(Zero::is_zero))
    }
}

impl Serialize for CoframeChange {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            #[serde(flatten, with = "crate::scalar::serde_cq")]
            value: &'a Cq,
        }
        #[derive(Serialize)]
        struct Repr<'a> {
            rows: Vec<Vec<Entry<'a>>>,
        }
        Repr { rows: self.matrix.iter().map(|r| r.iter().map(|value| Entry { value }).collect()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoframeChange {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Entry {
            #[serde(flatten, with = "crate::scalar::serde_cq")]
            value: Cq,
        }
        #[derive(Deserialize)]
        struct Repr {
            rows: Vec<Vec<Entry>>,
        }
        let repr = Repr::deserialize(d)?;
        Ok(CoframeChange {
            matrix: repr.rows.into_iter().map(|r| r.into_iter().map(|e| e.value).collect()).collect(),
        })
    }
}

/// Algebra in the shape
/// `dα^j = 0 (j ≤ k)`, `dα^j ∈ Λ²⟨α^1..α^k, ᾱ^1..ᾱ^k⟩ (j > k)`.
///
/// The abelian algebra is represented with `k = n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalForm {
    base: ComplexNilAlgebra,
    k: usize,
    change: CoframeChange,
}

impl NormalForm {
    /// Wraps an algebra already in normal-form shape with the given `k`.
    pub fn from_shape(base: ComplexNilAlgebra, k: usize) -> Result<Self, AlgebraError> {
        let n = base.n();
        if k > n || (k == n && !base.is_abelian()) || k == 0 {
            return Err(AlgebraError::NotNormalForm(format!("k = {k} with n = {n}")));
        }
        if let Some(j) = Self::offending_generator(&base, k) {
            return Err(AlgebraError::NotNormalForm(format!("dα^{j} leaves the closed span")));
        }
        Ok(NormalForm { base, k, change: CoframeChange::identity(n) })
    }

    pub(crate) fn from_parts(base: ComplexNilAlgebra, k: usize, change: CoframeChange) -> Self {
        NormalForm { base, k, change }
    }

    fn offending_generator(base: &ComplexNilAlgebra, k: usize) -> Option<usize> {
        let bad = |&(j, r, s): &(usize, usize, usize)| j <= k || r > k || s > k;
        base.two_zero
            .keys()
            .chain(base.one_one.keys())
            .find(|key| bad(key))
            .map(|&(j, _, _)| j)
    }

    pub fn base(&self) -> &ComplexNilAlgebra {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// Change from the coframe the algebra was originally given in.
    pub fn change(&self) -> &CoframeChange {
        &self.change
    }

    pub fn into_base(self) -> ComplexNilAlgebra {
        self.base
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "camelCase")]
pub enum NormalFormOutcome {
    Normal(NormalForm),
    /// Some `dα^j` involves a `(1,0)`-form that is not closed.
    #[serde(rename_all = "camelCase")]
    OutsideLemmaClass { k: usize, offending_generator: usize, change: CoframeChange },
}

impl NormalFormOutcome {
    pub fn normal(self) -> Option<NormalForm> {
        match self {
            NormalFormOutcome::Normal(nf) => Some(nf),
            NormalFormOutcome::OutsideLemmaClass { .. } => None,
        }
    }
}

/// On-disk algebra description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub n: usize,
    #[serde(default)]
    pub two_zero: Vec<ConstantEntry>,
    #[serde(default)]
    pub one_one: Vec<ConstantEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantEntry {
    pub j: usize,
    pub r: usize,
    pub s: usize,
    pub re: RationalText,
    #[serde(default)]
    pub im: RationalText,
}

impl ConstantEntry {
    fn value(&self, part: &'static str) -> Result<Cq, AlgebraError> {
        let (j, r, s) = (self.j, self.r, self.s);
        let wrap = |source| AlgebraError::Scalar { part, j, r, s, source };
        Ok(Complex::new(self.re.parse().map_err(wrap)?, self.im.parse().map_err(wrap)?))
    }

    fn from_value(j: usize, r: usize, s: usize, c: &Cq) -> Self {
        ConstantEntry {
            j,
            r,
            s,
            re: RationalText::from_rational(&c.re),
            im: RationalText::from_rational(&c.im),
        }
    }
}

impl TryFrom<AlgebraFile> for ComplexNilAlgebra {
    type Error = AlgebraError;

    fn try_from(file: AlgebraFile) -> Result<Self, AlgebraError> {
        let mut out = ComplexNilAlgebra::new(file.name, file.n)?;
        for e in &file.two_zero {
            out.insert_two_zero(e.j, e.r, e.s, e.value("twoZero")?)?;
        }
        for e in &file.one_one {
            out.insert_one_one(e.j, e.r, e.s, e.value("oneOne")?)?;
        }
        Ok(out)
    }
}

impl From<&ComplexNilAlgebra> for AlgebraFile {
    fn from(a: &ComplexNilAlgebra) -> Self {
        AlgebraFile {
            name: a.name.clone(),
            n: a.n,
            two_zero: a.two_zero.iter().map(|(&(j, r, s), c)| ConstantEntry::from_value(j, r, s, c)).collect(),
            one_one: a.one_one.iter().map(|(&(j, r, s), c)| ConstantEntry::from_value(j, r, s, c)).collect(),
        }
    }
}

impl Serialize for ComplexNilAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AlgebraFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexNilAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = AlgebraFile::deserialize(d)?;
        ComplexNilAlgebra::try_from(file).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cq, rat};

    fn iwasawa() -> ComplexNilAlgebra {
        ComplexNilAlgebra::new("iwasawa", 3).unwrap().with_two_zero(3, 1, 2, cq(1, 0)).unwrap()
    }

    fn kodaira_thurston() -> ComplexNilAlgebra {
        ComplexNilAlgebra::new("kt", 2).unwrap().with_one_one(2, 1, 1, cq(1, 0)).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(ComplexNilAlgebra::new("ab", 2).unwrap().validate().valid);
        assert!(iwasawa().validate().valid);
        // Jacobi holds here (every d² term carries α^1∧α^1) but the algebra is
        // solvable, not nilpotent
        let rotation = ComplexNilAlgebra::new("rotation", 3)
            .unwrap()
            .with_two_zero(2, 1, 3, cq(1, 0))
            .unwrap()
            .with_two_zero(3, 1, 2, cq(1, 0))
            .unwrap();
        assert!(rotation.validate().valid);
        assert!(matches!(rotation.nilpotency_step(), Err(AlgebraError::NotNilpotent { .. })));

        // dα² = α^{11̄}, dα³ = α^{23̄}: d(dα³) = α^{11̄3̄} + α^{232̄} ≠ 0
        let bad = ComplexNilAlgebra::new("bad", 3)
            .unwrap()
            .with_one_one(2, 1, 1, cq(1, 0))
            .unwrap()
            .with_one_one(3, 2, 3, cq(1, 0))
            .unwrap();
        let report = bad.validate();
        assert!(!report.valid);
        assert_eq!(report.residuals.len(), 1);
        let expected = &Form::monomial(3, &[1], &[1, 3], cq(1, 0)) + &Form::monomial(3, &[2, 3], &[2], cq(1, 0));
        assert_eq!(report.residuals[0].d_squared, expected);
    }

    #[test]
    fn index_checks() {
        let a = ComplexNilAlgebra::new("x", 2).unwrap();
        assert!(matches!(
            a.clone().with_two_zero(3, 1, 2, cq(1, 0)),
            Err(AlgebraError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            a.clone().with_two_zero(2, 2, 1, cq(1, 0)),
            Err(AlgebraError::NotIncreasing { .. })
        ));
        let dup = a.with_one_one(2, 1, 1, cq(1, 0)).unwrap().with_one_one(2, 1, 1, cq(2, 0));
        assert!(matches!(dup, Err(AlgebraError::Duplicate { .. })));
        assert!(matches!(ComplexNilAlgebra::new("z", 0), Err(AlgebraError::Dimension(0))));
    }

    #[test]
    fn nilpotency_examples() {
        assert_eq!(ComplexNilAlgebra::new("ab", 4).unwrap().nilpotency_step(), Ok(1));
        assert_eq!(kodaira_thurston().nilpotency_step(), Ok(2));
        assert_eq!(iwasawa().nilpotency_step(), Ok(2));
        let three_step = ComplexNilAlgebra::new("3step", 3)
            .unwrap()
            .with_one_one(2, 1, 1, cq(1, 0))
            .unwrap()
            .with_one_one(3, 1, 2, cq(1, 0))
            .unwrap()
            .with_one_one(3, 2, 1, cq(1, 0))
            .unwrap();
        assert!(three_step.validate().valid);
        assert_eq!(three_step.nilpotency_step(), Ok(3));
    }

    #[test]
    fn normal_form_examples() {
        let nf = kodaira_thurston().to_normal_form().normal().unwrap();
        assert_eq!(nf.k(), 1);
        assert!(nf.change().is_identity());
        let nf = iwasawa().to_normal_form().normal().unwrap();
        assert_eq!(nf.k(), 2);
        assert!(nf.change().is_identity());

        let outside = ComplexNilAlgebra::new("outside", 3)
            .unwrap()
            .with_one_one(2, 1, 1, cq(1, 0))
            .unwrap()
            .with_one_one(3, 1, 1, cq(1, 0))
            .unwrap()
            .with_one_one(3, 1, 2, cq(1, 0))
            .unwrap()
            .with_one_one(3, 2, 1, cq(1, 0))
            .unwrap();
        assert!(outside.validate().valid);
        match outside.to_normal_form() {
            NormalFormOutcome::OutsideLemmaClass { k, .. } => assert_eq!(k, 1),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn normal_form_reorders_closed_forms_first() {
        // α^2 is the non-closed generator here
        let a = ComplexNilAlgebra::new("swap", 2).unwrap().with_one_one(1, 2, 2, cq(1, 0)).unwrap();
        let nf = a.to_normal_form().normal().unwrap();
        assert_eq!(nf.k(), 1);
        assert_eq!(nf.base().c11(2, 1, 1), cq(1, 0));
        assert!(!nf.change().is_identity());
    }

    #[test]
    fn coframe_scaling() {
        let change = CoframeChange {
            matrix: vec![vec![cq(2, 0), cq(0, 0)], vec![cq(0, 0), cq(1, 0)]],
        };
        let b = kodaira_thurston().change_coframe(&change).unwrap();
        assert_eq!(b.c11(2, 1, 1), Complex::new(rat(1, 4), rat(0, 1)));
    }

    #[test]
    fn file_round_trip() {
        let a = iwasawa().with_one_one(3, 1, 2, Complex::new(rat(1, 2), rat(-3, 7))).unwrap();
        let text = serde_json::to_string(&a).unwrap();
        let back: ComplexNilAlgebra = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
        let decimal = r#"{"name":"d","n":2,"twoZero":[],"oneOne":[{"j":2,"r":1,"s":1,"re":"0.5","im":"1/3"}]}"#;
        let a: ComplexNilAlgebra = serde_json::from_str(decimal).unwrap();
        assert_eq!(a.c11(2, 1, 1), Complex::new(rat(1, 2), rat(1, 3)));
        let dup = r#"{"name":"d","n":2,"oneOne":[{"j":2,"r":1,"s":1,"re":"1"},{"j":2,"r":1,"s":1,"re":"2"}]}"#;
        assert!(serde_json::from_str::<ComplexNilAlgebra>(dup).is_err());
        let bad = r#"{"name":"d","n":2,"oneOne":[{"j":2,"r":1,"s":1,"re":"x/2"}]}"#;
        assert!(serde_json::from_str::<ComplexNilAlgebra>(bad).is_err());
    }
}
