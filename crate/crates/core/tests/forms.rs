mod common;

use nilherm::forms::{Form, Mono};
use nilherm::sample;
use nilherm::scalar::{cq, Cq};
use proptest::prelude::*;

fn degree_sign(p: usize, q: usize) -> Cq {
    if (p * q).is_multiple_of(2) {
        cq(1, 0)
    } else {
        cq(-1, 0)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn wedge_is_associative(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = 1 + (seed % 4) as usize;
        let (a, b, c) = (sample::form(&mut rng, n, 3), sample::form(&mut rng, n, 3), sample::form(&mut rng, n, 3));
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = 1 + (seed % 4) as usize;
        let p = (seed / 7 % 4) as usize;
        let q = (seed / 31 % 4) as usize;
        let a = sample::form_of_degree(&mut rng, n, p, 3);
        let b = sample::form_of_degree(&mut rng, n, q, 3);
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale(&degree_sign(p, q)));
    }

    #[test]
    fn conjugation_is_an_involutive_algebra_map(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = 1 + (seed % 4) as usize;
        let (a, b) = (sample::form(&mut rng, n, 4), sample::form(&mut rng, n, 4));
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert_eq!(a.wedge(&b).conjugate(), a.conjugate().wedge(&b.conjugate()));
    }

    #[test]
    fn bidegree_projections_reassemble(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = 1 + (seed % 4) as usize;
        let a = sample::form(&mut rng, n, 6);
        let mut sum = Form::zero(n);
        for (p, q) in a.bidegrees() {
            sum = &sum + &a.project(p, q);
        }
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn serde_round_trip(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let a = sample::form(&mut rng, 4, 6);
        let text = serde_json::to_string(&a).unwrap();
        let back: Form<Cq> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn differential_identities_on_random_algebras(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let alg = sample::two_step_algebra(&mut rng, 4);
        let d = alg.differential();
        let phi = sample::form(&mut rng, alg.n(), 4);
        prop_assert!(d.apply(&d.apply(&phi)).is_zero());
        prop_assert_eq!(&d.del(&phi) + &d.delbar(&phi), d.apply(&phi));
        prop_assert_eq!(d.apply(&phi.conjugate()), d.apply(&phi).conjugate());
    }
}

#[test]
fn monomial_signs_follow_reordering() {
    // α^{2}∧α^{1} = −α^{12}
    let f = Form::<Cq>::monomial(2, &[2, 1], &[], cq(1, 0));
    assert_eq!(f.coeff(&[1, 2], &[]), cq(-1, 0));
    // repeated index vanishes
    assert!(Form::<Cq>::monomial(2, &[1, 1], &[], cq(1, 0)).is_zero());
    // ᾱ^1∧α^1 = −α^{11̄}
    let g = Form::<Cq>::anti(2, 1).wedge(&Form::holo(2, 1));
    assert_eq!(g, Form::monomial(2, &[1], &[1], cq(-1, 0)));
}

#[test]
fn display_uses_macron_for_antiholomorphic_indices() {
    let f = Form::<Cq>::monomial(3, &[1], &[2], cq(3, 0)) - Form::monomial(3, &[2], &[], cq(1, 0));
    assert_eq!(f.to_string(), "3·α^{12\u{304}} - α^{2}");
}

#[test]
fn kodaira_thurston_generator_differential() {
    let kt = common::alg("kodaira-thurston");
    assert_eq!(kt.generator_differential(2), Form::from_mono(2, Mono::from_indices(&[1], &[1]), cq(1, 0)));
    let iw = common::alg("iwasawa");
    assert_eq!(iw.generator_differential(3), Form::monomial(3, &[1, 2], &[], cq(1, 0)));
}

#[test]
fn float_mode_agrees_with_exact_mode() {
    let mut rng = common::rng(11);
    let alg = sample::two_step_algebra(&mut rng, 3);
    let phi = sample::form(&mut rng, alg.n(), 5);
    let exact = alg.d(&phi).to_float();
    let float = nilherm::Differential::<num_complex::Complex64>::new(&alg).apply(&phi.to_float());
    assert!((exact - float).coeff_norm_sq() < 1e-20);
}
