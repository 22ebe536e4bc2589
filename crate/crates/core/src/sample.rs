//! Seeded random generators for exact test instances.
//!
//! All entries are small rationals so that exact arithmetic stays cheap even
//! after several wedge products.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use crate::algebra::{ComplexNilAlgebra, CoframeChange, NormalForm};
use crate::forms::{Form, Mono};
use crate::linalg::{self, Matrix};
use crate::metrics::HermitianMetric;
use crate::scalar::{rat, Cq};

/// A rational `p/q` with `|p| ≤ 3` and `q ∈ {1, 2, 3}`.
pub fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    rat(rng.random_range(-3..=3), rng.random_range(1..=3))
}

/// Gaussian rational with small parts; zero with probability `zero_prob`.
pub fn small_cq<R: Rng + ?Sized>(rng: &mut R, zero_prob: f64) -> Cq {
    if rng.random_bool(zero_prob) {
        return Cq::zero();
    }
    let im = if rng.random_bool(0.5) { small_rational(rng) } else { BigRational::zero() };
    Complex::new(small_rational(rng), im)
}

/// Normal form of shape `(n, k)`: `α^1..α^k` closed, every other generator
/// mapped into the span of `α^{rs}, α^{rs̄}` with `r, s ≤ k`. Each constant is
/// present with probability `density`.
pub fn normal_form<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, density: f64) -> NormalForm {
    build_normal_form(rng, n, k, density, false)
}

/// As [`normal_form`], with `c^l_{kk̄}` adjusted so that every residual
/// `Σ_{r≤k} c^l_{rr̄}` vanishes: the identity metric is balanced.
pub fn balanced_normal_form<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, density: f64) -> NormalForm {
    build_normal_form(rng, n, k, density, true)
}

fn build_normal_form<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, density: f64, balanced: bool) -> NormalForm {
    let mut alg = ComplexNilAlgebra::new(format!("random-{n}-{k}"), n).expect("n in range");
    let zero_prob = 1.0 - density;
    for j in k + 1..=n {
        let mut trace = Cq::zero();
        for r in 1..=k {
            for s in 1..=k {
                if r < s {
                    let c = small_cq(rng, zero_prob);
                    alg = alg.with_two_zero(j, r, s, c).expect("indices valid");
                }
                let mut c = small_cq(rng, zero_prob);
                if balanced && r == s {
                    if r == k {
                        c = -trace.clone();
                    } else {
                        trace += c.clone();
                    }
                }
                alg = alg.with_one_one(j, r, s, c).expect("indices valid");
            }
        }
    }
    NormalForm::from_shape(alg, k).expect("shape is a normal form by construction")
}

/// Random normal form with `1 ≤ n ≤ max_n` and `1 ≤ k ≤ min(max_k, n)`.
pub fn any_normal_form<R: Rng + ?Sized>(rng: &mut R, max_n: usize, max_k: usize) -> NormalForm {
    let n = rng.random_range(1..=max_n);
    let k = rng.random_range(1..=max_k.min(n));
    let density = [0.0, 0.3, 0.6, 1.0][rng.random_range(0..4)];
    normal_form(rng, n, k, density)
}

/// Invertible change with small Gaussian-rational entries.
pub fn invertible_change<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CoframeChange {
    loop {
        let m: Matrix<Cq> = (0..n).map(|_| (0..n).map(|_| small_cq(rng, 0.4)).collect()).collect();
        if linalg::inverse(&m).is_some() {
            return CoframeChange { matrix: m };
        }
    }
}

/// A valid 2-step algebra written in a random (generally non-adapted) coframe.
pub fn two_step_algebra<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> ComplexNilAlgebra {
    let nf = any_normal_form(rng, max_n, max_n);
    let change = invertible_change(rng, nf.n());
    nf.base().change_coframe(&change).expect("change is invertible")
}

/// Lower-triangular factor with small entries and positive diagonal.
pub fn lower_triangular_factor<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix<Cq> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j < i {
                        small_cq(rng, 0.3)
                    } else if j == i {
                        Complex::new(rat(rng.random_range(1..=4), rng.random_range(1..=3)), BigRational::zero())
                    } else {
                        Cq::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// `T^T T̄` for a random lower-triangular `T`; always positive definite.
pub fn pd_metric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMetric {
    let t = lower_triangular_factor(rng, n);
    let a = linalg::mat_mul(&linalg::transpose(&t), &linalg::conj_matrix(&t));
    HermitianMetric::new(a).expect("T^T T̄ with invertible T is positive definite")
}

/// Diagonal metric with small positive rational entries.
pub fn diagonal_metric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMetric {
    let d: Vec<BigRational> = (0..n).map(|_| rat(rng.random_range(1..=5), rng.random_range(1..=3))).collect();
    HermitianMetric::diagonal(&d).expect("positive diagonal")
}

/// Random form with at most `max_terms` monomials of arbitrary bidegree.
pub fn form<R: Rng + ?Sized>(rng: &mut R, n: usize, max_terms: usize) -> Form<Cq> {
    let mask = (1u64 << n) - 1;
    let mut out = Form::zero(n);
    for _ in 0..rng.random_range(0..=max_terms) {
        let m = Mono { holo: rng.random::<u64>() & mask, anti: rng.random::<u64>() & mask };
        out.add_term(m, small_cq(rng, 0.0));
    }
    out
}

/// Random homogeneous form of the given total degree.
pub fn form_of_degree<R: Rng + ?Sized>(rng: &mut R, n: usize, degree: usize, max_terms: usize) -> Form<Cq> {
    let mut out = Form::zero(n);
    if degree > 2 * n {
        return out;
    }
    for _ in 0..rng.random_range(1..=max_terms.max(1)) {
        let mut slots: Vec<usize> = (0..2 * n).collect();
        let mut m = Mono::ONE;
        for _ in 0..degree {
            let pick = slots.swap_remove(rng.random_range(0..slots.len()));
            if pick < n {
                m.holo |= 1 << pick;
            } else {
                m.anti |= 1 << (pick - n);
            }
        }
        out.add_term(m, small_cq(rng, 0.0));
    }
    out
}
