//! Scalars: exact complex rationals and the coefficient abstraction shared by
//! exact and floating-point forms.
//!
//! The exact field is `Q(i)`, represented as `Complex<BigRational>`. Floating
//! point coefficients (`Complex64`) are only ever derived from exact ones; the
//! two never mix inside one [`Form`](crate::forms::Form) because the
//! coefficient type is a type parameter.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact complex rational `re + i·im`.
pub type Cq = Complex<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseScalarError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Coefficient ring of a form.
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    type Real: Clone + PartialEq + Debug + Zero + Add<Output = Self::Real>;

    fn conj(&self) -> Self;
    /// Squared modulus.
    fn norm_sq(&self) -> Self::Real;
    fn from_exact(c: &Cq) -> Self;
}

impl Coeff for Cq {
    type Real = BigRational;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn norm_sq(&self) -> BigRational {
        Complex::norm_sqr(self)
    }

    fn from_exact(c: &Cq) -> Self {
        c.clone()
    }
}

impl Coeff for Complex64 {
    type Real = f64;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn norm_sq(&self) -> f64 {
        self.norm_sqr()
    }

    fn from_exact(c: &Cq) -> Self {
        to_complex64(c)
    }
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

/// Gaussian integer `re + i·im` as an exact scalar.
pub fn cq(re: i64, im: i64) -> Cq {
    Complex::new(int(re), int(im))
}

pub fn cq_real(re: BigRational) -> Cq {
    Complex::new(re, BigRational::zero())
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn to_complex64(c: &Cq) -> Complex64 {
    Complex64::new(rat_to_f64(&c.re), rat_to_f64(&c.im))
}

/// Exact binary-to-rational conversion of a finite double.
pub fn exact_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// by truncated continued fractions (with the final semiconvergent check).
pub fn rationalize(x: f64, max_den: u64) -> BigRational {
    if !x.is_finite() {
        return BigRational::zero();
    }
    let negative = x < 0.0;
    let target = x.abs();
    let mut v = target;
    // convergents h/k
    let (mut h_prev, mut h) = (0u128, 1u128);
    let (mut k_prev, mut k) = (1u128, 0u128);
    let max_den = max_den.max(1) as u128;
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e18 {
            break;
        }
        let a_int = a as u128;
        let h_next = a_int * h + h_prev;
        let k_next = a_int * k + k_prev;
        if k_next > max_den {
            // largest semiconvergent still within the bound
            let t = (max_den - k_prev) / k;
            let hs = t * h + h_prev;
            let ks = t * k + k_prev;
            if ks > 0 {
                let semi = hs as f64 / ks as f64;
                let conv = h as f64 / k as f64;
                if (semi - target).abs() < (conv - target).abs() {
                    h = hs;
                    k = ks;
                }
            }
            break;
        }
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
        let frac = v - a;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if k == 0 {
        return BigRational::zero();
    }
    let r = BigRational::new(BigInt::from(h), BigInt::from(k));
    if negative {
        -r
    } else {
        r
    }
}

/// Parses `"p/q"`, an integer, or a plain decimal such as `"-0.125"` or `"3e-2"`.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseScalarError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseScalarError::Empty);
    }
    let bad = || ParseScalarError::Malformed(text.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let p: BigInt = num.trim().parse().map_err(|_| bad())?;
        let q: BigInt = den.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(ParseScalarError::ZeroDenominator(text.to_string()));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{whole}{frac}");
    let numer: BigInt = all_digits.parse().map_err(|_| bad())?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(numer);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Human-readable rendering: `3/2`, `-i`, `1 + 2/3 i`.
pub fn format_cq(c: &Cq) -> String {
    let re_zero = c.re.is_zero();
    let im_zero = c.im.is_zero();
    let im_part = |im: &BigRational| -> String {
        if im.is_one() {
            "i".to_string()
        } else if (-im).is_one() {
            "-i".to_string()
        } else {
            format!("{} i", format_rational(im))
        }
    };
    match (re_zero, im_zero) {
        (true, true) => "0".to_string(),
        (false, true) => format_rational(&c.re),
        (true, false) => im_part(&c.im),
        (false, false) => {
            let sign = if c.im.is_negative() { '-' } else { '+' };
            format!("{} {} {}", format_rational(&c.re), sign, im_part(&c.im.abs()))
        }
    }
}

/// Whether a nonnegative rational is the square of a rational; returns the root.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let p = r.numer().sqrt();
    let q = r.denom().sqrt();
    if &(&p * &p) == r.numer() && &(&q * &q) == r.denom() {
        Some(BigRational::new(p, q))
    } else {
        None
    }
}

/// Serde adapter: a rational as a `"p/q"` string.
pub mod serde_rational {
    use super::{format_rational, parse_rational};
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }
}

/// Serde adapter: an exact complex scalar as `{"re": "p/q", "im": "p/q"}`.
pub mod serde_cq {
    use super::{format_rational, Cq, RationalText};
    use num_complex::Complex;
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        re: RationalText,
        #[serde(default)]
        im: RationalText,
    }

    pub fn serialize<S: Serializer>(value: &Cq, s: S) -> Result<S::Ok, S::Error> {
        Repr {
            re: RationalText::Text(format_rational(&value.re)),
            im: RationalText::Text(format_rational(&value.im)),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Cq, D::Error> {
        let repr = Repr::deserialize(d)?;
        let re = repr.re.parse().map_err(D::Error::custom)?;
        let im = repr.im.parse().map_err(D::Error::custom)?;
        Ok(Complex::new(re, im))
    }
}

/// Serde adapter: a vector of exact complex scalars, each as in [`serde_cq`].
pub mod serde_cq_vec {
    use super::Cq;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Item(#[serde(with = "super::serde_cq")] Cq);

    pub fn serialize<S: Serializer>(value: &[Cq], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(value.iter().map(|c| Item(c.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Cq>, D::Error> {
        Ok(Vec::<Item>::deserialize(d)?.into_iter().map(|i| i.0).collect())
    }
}

/// A rational literal as it appears in input files: a string (`"p/q"`,
/// decimal) or a bare JSON number.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Text(String),
    Integer(i64),
    Float(f64),
}

impl Default for RationalText {
    fn default() -> Self {
        RationalText::Integer(0)
    }
}

impl RationalText {
    pub fn parse(&self) -> Result<BigRational, ParseScalarError> {
        match self {
            RationalText::Text(s) => parse_rational(s),
            RationalText::Integer(i) => Ok(int(*i)),
            // shortest round-trip decimal, so 0.1 means 1/10
            RationalText::Float(x) => parse_rational(&x.to_string()),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        RationalText::Text(format_rational(r))
    }
}
