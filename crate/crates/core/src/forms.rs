//! Sparse exterior calculus on the complexified dual `Λ(g*_C)` of an algebra.
//!
//! A [`Form`] maps bit-mask pairs `(holomorphic, antiholomorphic)` to
//! coefficients. Each key stands for the canonical monomial
//! `α^{i_1}∧…∧α^{i_p}∧ᾱ^{j_1}∧…∧ᾱ^{j_q}` with both index lists ascending;
//! reordering signs are folded into the coefficient. Index `j` (1-based)
//! lives at bit `j - 1`, so `n ≤ 62`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::ComplexNilAlgebra;
use crate::scalar::{format_cq, Coeff, Cq};

pub const MAX_DIM: usize = 62;

/// Canonical monomial key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub holo: u64,
    pub anti: u64,
}

impl Mono {
    pub const ONE: Mono = Mono { holo: 0, anti: 0 };

    pub fn from_indices(holo: &[usize], anti: &[usize]) -> Mono {
        Mono { holo: mask_of(holo), anti: mask_of(anti) }
    }

    pub fn bidegree(self) -> (usize, usize) {
        (self.holo.count_ones() as usize, self.anti.count_ones() as usize)
    }

    pub fn degree(self) -> usize {
        (self.holo.count_ones() + self.anti.count_ones()) as usize
    }

    pub fn holo_indices(self) -> Vec<usize> {
        bits(self.holo)
    }

    pub fn anti_indices(self) -> Vec<usize> {
        bits(self.anti)
    }
}

fn mask_of(indices: &[usize]) -> u64 {
    indices.iter().fold(0, |m, &i| m | (1u64 << (i - 1)))
}

/// 1-based indices of the set bits, ascending.
fn bits(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        let b = mask.trailing_zeros() as usize;
        out.push(b + 1);
        mask &= mask - 1;
    }
    out
}

/// Number of inversions when the ascending list `a` is followed by the
/// ascending list `b` (disjoint masks).
fn merge_inversions(a: u64, mut b: u64) -> u32 {
    let mut count = 0;
    while b != 0 {
        let y = b.trailing_zeros();
        count += (a >> y >> 1).count_ones();
        b &= b - 1;
    }
    count
}

/// Product of two canonical monomials: the resulting key and sign, or `None`
/// when an index repeats.
pub fn wedge_mono(x: Mono, y: Mono) -> Option<(Mono, bool)> {
    if x.holo & y.holo != 0 || x.anti & y.anti != 0 {
        return None;
    }
    let swaps = x.anti.count_ones() * y.holo.count_ones()
        + merge_inversions(x.holo, y.holo)
        + merge_inversions(x.anti, y.anti);
    Some((Mono { holo: x.holo | y.holo, anti: x.anti | y.anti }, swaps % 2 == 1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Form<C: Coeff = Cq> {
    n: usize,
    terms: BTreeMap<Mono, C>,
}

impl<C: Coeff> Form<C> {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM, "complex dimension {n} exceeds {MAX_DIM}");
        Form { n, terms: BTreeMap::new() }
    }

    /// The constant 0-form `1`.
    pub fn one(n: usize) -> Self {
        Self::from_mono(n, Mono::ONE, C::one())
    }

    /// `α^j`.
    pub fn holo(n: usize, j: usize) -> Self {
        Self::monomial(n, &[j], &[], C::one())
    }

    /// `ᾱ^j`.
    pub fn anti(n: usize, j: usize) -> Self {
        Self::monomial(n, &[], &[j], C::one())
    }

    /// `c · α^{holo…}∧ᾱ^{anti…}` with indices in any order; the sign of sorting
    /// them is folded in, and repeated indices give zero.
    pub fn monomial(n: usize, holo: &[usize], anti: &[usize], c: C) -> Self {
        let mut out = Self::zero(n);
        assert!(
            holo.iter().chain(anti).all(|&i| (1..=n).contains(&i)),
            "index out of range 1..={n}"
        );
        let mut acc = Some((Mono::ONE, false));
        for &i in holo {
            acc = acc.and_then(|(m, s)| {
                wedge_mono(m, Mono { holo: 1 << (i - 1), anti: 0 }).map(|(m2, s2)| (m2, s ^ s2))
            });
        }
        for &i in anti {
            acc = acc.and_then(|(m, s)| {
                wedge_mono(m, Mono { holo: 0, anti: 1 << (i - 1) }).map(|(m2, s2)| (m2, s ^ s2))
            });
        }
        if let Some((m, negative)) = acc {
            out.add_term(m, if negative { -c } else { c });
        }
        out
    }

    pub fn from_mono(n: usize, m: Mono, c: C) -> Self {
        let mut out = Self::zero(n);
        out.add_term(m, c);
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    /// Coefficient of the canonical monomial with these (ascending) index sets.
    pub fn coeff(&self, holo: &[usize], anti: &[usize]) -> C {
        self.coeff_of(Mono::from_indices(holo, anti))
    }

    pub fn coeff_of(&self, m: Mono) -> C {
        self.terms.get(&m).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, m: Mono, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.n);
        for (m, v) in &self.terms {
            out.add_term(*m, v.clone() * c.clone());
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "wedge of forms over different dimensions");
        let mut out = Self::zero(self.n);
        for (mx, cx) in &self.terms {
            for (my, cy) in &other.terms {
                if let Some((m, negative)) = wedge_mono(*mx, *my) {
                    let c = cx.clone() * cy.clone();
                    out.add_term(m, if negative { -c } else { c });
                }
            }
        }
        out
    }

    /// `self ∧ self ∧ … ∧ self` (`k` factors); `k = 0` gives `1`.
    pub fn wedge_pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(self.n), |acc, _| acc.wedge(self))
    }

    /// Antilinear involution exchanging `α^j ↔ ᾱ^j`.
    pub fn conjugate(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            // ᾱ^H ∧ α^A = (-1)^{|H||A|} α^A ∧ ᾱ^H
            let negative = (m.holo.count_ones() * m.anti.count_ones()) % 2 == 1;
            let c = c.conj();
            out.add_term(Mono { holo: m.anti, anti: m.holo }, if negative { -c } else { c });
        }
        out
    }

    /// The `(p, q)` component.
    pub fn project(&self, p: usize, q: usize) -> Self {
        Form {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.bidegree() == (p, q))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Homogeneous-degree component.
    pub fn degree_part(&self, k: usize) -> Self {
        Form {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Bidegrees present, ascending.
    pub fn bidegrees(&self) -> BTreeSet<(usize, usize)> {
        self.terms.keys().map(|m| m.bidegree()).collect()
    }

    /// Sum of squared moduli of the canonical coefficients.
    pub fn coeff_norm_sq(&self) -> C::Real {
        self.terms.values().fold(C::Real::zero(), |acc, c| acc + c.norm_sq())
    }

    /// Interior product with the vector whose pairings are
    /// `α^j(X) = holo[j-1]` and `ᾱ^j(X) = anti[j-1]`.
    pub fn interior(&self, holo: &[C], anti: &[C]) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let factors = m
                .holo_indices()
                .into_iter()
                .map(|i| (true, i))
                .chain(m.anti_indices().into_iter().map(|i| (false, i)));
            for (t, (is_holo, i)) in factors.enumerate() {
                let pairing = if is_holo { &holo[i - 1] } else { &anti[i - 1] };
                if pairing.is_zero() {
                    continue;
                }
                let rest = if is_holo {
                    Mono { holo: m.holo & !(1 << (i - 1)), anti: m.anti }
                } else {
                    Mono { holo: m.holo, anti: m.anti & !(1 << (i - 1)) }
                };
                let v = c.clone() * pairing.clone();
                out.add_term(rest, if t % 2 == 1 { -v } else { v });
            }
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        let mut out = Form::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }
}

impl Form<Cq> {
    pub fn to_float(&self) -> Form<Complex64> {
        self.map_coeffs(Complex64::from_exact)
    }
}

impl<C: Coeff> Add for &Form<C> {
    type Output = Form<C>;
    fn add(self, rhs: &Form<C>) -> Form<C> {
        assert_eq!(self.n, rhs.n, "sum of forms over different dimensions");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<C: Coeff> Add for Form<C> {
    type Output = Form<C>;
    fn add(self, rhs: Form<C>) -> Form<C> {
        &self + &rhs
    }
}

impl<C: Coeff> Neg for &Form<C> {
    type Output = Form<C>;
    fn neg(self) -> Form<C> {
        Form {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl<C: Coeff> Neg for Form<C> {
    type Output = Form<C>;
    fn neg(self) -> Form<C> {
        -&self
    }
}

impl<C: Coeff> Sub for &Form<C> {
    type Output = Form<C>;
    fn sub(self, rhs: &Form<C>) -> Form<C> {
        self + &(-rhs)
    }
}

impl<C: Coeff> Sub for Form<C> {
    type Output = Form<C>;
    fn sub(self, rhs: Form<C>) -> Form<C> {
        &self - &rhs
    }
}

/// The Chevalley–Eilenberg differential of an algebra, with the generator
/// differentials precomputed in the coefficient type `C`.
#[derive(Debug, Clone)]
pub struct Differential<C: Coeff = Cq> {
    n: usize,
    d_holo: Vec<Form<C>>,
    d_anti: Vec<Form<C>>,
}

impl<C: Coeff> Differential<C> {
    pub fn new(algebra: &ComplexNilAlgebra) -> Self {
        let n = algebra.n();
        let exact: Vec<Form<Cq>> = (1..=n).map(|j| algebra.generator_differential(j)).collect();
        let d_anti = exact.iter().map(|f| f.conjugate().map_coeffs(C::from_exact)).collect();
        let d_holo = exact.iter().map(|f| f.map_coeffs(C::from_exact)).collect();
        Differential { n, d_holo, d_anti }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Extension of `d` from generators by the graded Leibniz rule.
    pub fn apply(&self, form: &Form<C>) -> Form<C> {
        assert_eq!(form.n(), self.n, "form and algebra dimensions differ");
        let mut out = Form::zero(self.n);
        for (m, c) in form.terms() {
            let factors = m
                .holo_indices()
                .into_iter()
                .map(|i| (true, i))
                .chain(m.anti_indices().into_iter().map(|i| (false, i)));
            for (t, (is_holo, i)) in factors.enumerate() {
                let (d_factor, rest) = if is_holo {
                    (&self.d_holo[i - 1], Mono { holo: m.holo & !(1 << (i - 1)), anti: m.anti })
                } else {
                    (&self.d_anti[i - 1], Mono { holo: m.holo, anti: m.anti & !(1 << (i - 1)) })
                };
                // d(e_0…e_t…) ∋ (-1)^t e_0…de_t…; de_t is even so it moves to the front
                for (dm, dc) in d_factor.terms() {
                    if let Some((key, negative)) = wedge_mono(*dm, rest) {
                        let v = c.clone() * dc.clone();
                        out.add_term(key, if negative ^ (t % 2 == 1) { -v } else { v });
                    }
                }
            }
        }
        out
    }

    /// `∂`, applied bidegree by bidegree.
    pub fn del(&self, form: &Form<C>) -> Form<C> {
        form.bidegrees().into_iter().fold(Form::zero(self.n), |acc, (p, q)| {
            &acc + &self.apply(&form.project(p, q)).project(p + 1, q)
        })
    }

    /// `∂̄`, applied bidegree by bidegree.
    pub fn delbar(&self, form: &Form<C>) -> Form<C> {
        form.bidegrees().into_iter().fold(Form::zero(self.n), |acc, (p, q)| {
            &acc + &self.apply(&form.project(p, q)).project(p, q + 1)
        })
    }
}

fn index_label(holo: &[usize], anti: &[usize]) -> String {
    let mut s = String::new();
    for i in holo {
        s.push_str(&i.to_string());
    }
    for i in anti {
        s.push_str(&i.to_string());
        s.push('\u{304}');
    }
    s
}

impl fmt::Display for Form<Cq> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let label = index_label(&m.holo_indices(), &m.anti_indices());
            // real coefficients carry their sign into the separator
            let (negative, magnitude) = if c.im.is_zero() && c.re.is_negative() { (true, -c.clone()) } else { (false, c.clone()) };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let coeff = format_cq(&magnitude);
            let coeff = if coeff.contains(' ') { format!("({coeff})") } else { coeff };
            if label.is_empty() {
                write!(f, "{coeff}")?;
            } else if magnitude.is_one() {
                write!(f, "α^{{{label}}}")?;
            } else {
                write!(f, "{coeff}·α^{{{label}}}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    holo: Vec<usize>,
    anti: Vec<usize>,
    #[serde(flatten, with = "crate::scalar::serde_cq")]
    value: Cq,
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    n: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for Form<Cq> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FormRepr {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr {
                    holo: m.holo_indices(),
                    anti: m.anti_indices(),
                    value: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Form<Cq> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = FormRepr::deserialize(d)?;
        if repr.n > MAX_DIM {
            return Err(D::Error::custom("form dimension too large"));
        }
        let mut out = Form::zero(repr.n);
        for t in repr.terms {
            let ok = |v: &[usize]| {
                v.windows(2).all(|w| w[0] < w[1]) && v.iter().all(|&i| (1..=repr.n).contains(&i))
            };
            if !ok(&t.holo) || !ok(&t.anti) {
                return Err(D::Error::custom("form term indices must be ascending and in range"));
            }
            out.add_term(Mono::from_indices(&t.holo, &t.anti), t.value);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cq;

    fn f(holo: &[usize], anti: &[usize], c: i64) -> Form {
        Form::monomial(4, holo, anti, cq(c, 0))
    }

    #[test]
    fn wedge_examples() {
        let a1 = Form::<Cq>::holo(2, 1);
        assert!(a1.wedge(&a1).is_zero());
        let a1b = Form::<Cq>::anti(2, 1);
        assert_eq!(a1.wedge(&a1b), Form::monomial(2, &[1], &[1], cq(1, 0)));
        let omega = &Form::monomial(2, &[1], &[1], cq(1, 0)) + &Form::monomial(2, &[2], &[2], cq(1, 0));
        assert_eq!(omega.wedge(&omega), Form::monomial(2, &[1, 2], &[1, 2], cq(-2, 0)));
    }

    #[test]
    fn monomial_sorting_sign() {
        assert_eq!(f(&[2, 1], &[], 1), f(&[1, 2], &[], -1));
        assert!(f(&[3, 3], &[], 1).is_zero());
        assert_eq!(f(&[1], &[3, 2], 5), f(&[1], &[2, 3], -5));
    }

    #[test]
    fn conjugate_examples() {
        let a11 = f(&[1], &[1], 1);
        assert_eq!(a11.conjugate(), f(&[1], &[1], -1));
        assert_eq!(f(&[1, 2], &[], 1).conjugate(), f(&[], &[1, 2], 1));
        let mixed = &f(&[1, 3], &[2], 2) + &Form::monomial(4, &[4], &[1, 2], cq(1, -3));
        assert_eq!(mixed.conjugate().conjugate(), mixed);
    }

    #[test]
    fn projection_and_norm() {
        let phi = &f(&[1, 2], &[], 1) - &f(&[1], &[1], 1);
        assert_eq!(phi.project(2, 0), f(&[1, 2], &[], 1));
        assert!(f(&[1], &[1], 1).project(0, 2).is_zero());
        assert_eq!(phi.coeff_norm_sq(), crate::scalar::int(2));
        assert_eq!(f(&[1, 2], &[1, 2], 2).coeff_norm_sq(), crate::scalar::int(4));
        assert_eq!(Form::<Cq>::zero(3).coeff_norm_sq(), crate::scalar::int(0));
        assert_eq!(&phi.project(2, 0) + &phi.project(1, 1), phi);
    }

    #[test]
    fn interior_contracts_with_sign() {
        // ι_{X_2} α^{12} = -α^1
        let x2 = [cq(0, 0), cq(1, 0), cq(0, 0), cq(0, 0)];
        let zero = [cq(0, 0), cq(0, 0), cq(0, 0), cq(0, 0)];
        assert_eq!(f(&[1, 2], &[], 1).interior(&x2, &zero), f(&[1], &[], -1));
    }

    #[test]
    fn serde_round_trip() {
        let phi = &f(&[1, 2], &[3], 3) + &Form::monomial(4, &[], &[4], cq(0, -1));
        let text = serde_json::to_string(&phi).unwrap();
        let back: Form = serde_json::from_str(&text).unwrap();
        assert_eq!(back, phi);
    }

    #[test]
    fn display_is_readable() {
        let phi = f(&[1, 2], &[1, 2], -1);
        assert_eq!(phi.to_string(), "-α^{121\u{304}2\u{304}}");
    }
}
