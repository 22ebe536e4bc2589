mod common;

use nilherm::algebra::{AlgebraError, AlgebraFile, NormalFormOutcome};
use nilherm::forms::Form;
use nilherm::sample;
use nilherm::scalar::cq;
use nilherm::{catalog, ComplexNilAlgebra, NormalForm};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_two_step_algebras_validate(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let alg = sample::two_step_algebra(&mut rng, 4);
        prop_assert!(alg.validate().valid);
        let step = alg.nilpotency_step().unwrap();
        prop_assert!(step <= 2);
        prop_assert_eq!(step == 1, alg.is_abelian());
    }

    #[test]
    fn normal_form_is_recovered_in_any_coframe(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let nf = sample::any_normal_form(&mut rng, 4, 4);
        let change = sample::invertible_change(&mut rng, nf.n());
        let scrambled = nf.base().change_coframe(&change).unwrap();
        let found = scrambled.to_normal_form().normal();
        prop_assert!(found.is_some());
        let found = found.unwrap();
        // k is the dimension of the closed (1,0)-forms
        if !nf.base().is_abelian() {
            let closed = (1..=nf.n()).filter(|&j| found.base().generator_differential(j).is_zero()).count();
            prop_assert_eq!(closed, found.k());
        }
        prop_assert!(NormalForm::from_shape(found.base().clone(), found.k()).is_ok());
        prop_assert!(found.base().validate().valid);
    }

    #[test]
    fn coframe_change_round_trips(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let alg = sample::two_step_algebra(&mut rng, 3);
        let change = sample::invertible_change(&mut rng, alg.n());
        let there = alg.change_coframe(&change).unwrap();
        let back = there.change_coframe(&change.inverse().unwrap()).unwrap();
        prop_assert_eq!(back.two_zero_entries().collect::<Vec<_>>(), alg.two_zero_entries().collect::<Vec<_>>());
        prop_assert_eq!(back.one_one_entries().collect::<Vec<_>>(), alg.one_one_entries().collect::<Vec<_>>());
    }

    #[test]
    fn coframe_change_preserves_invariants(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let alg = sample::two_step_algebra(&mut rng, 3);
        let n = alg.n();
        let change = sample::invertible_change(&mut rng, n);
        let moved = alg.change_coframe(&change).unwrap();
        prop_assert_eq!(moved.validate().valid, true);
        prop_assert_eq!(moved.is_abelian(), alg.is_abelian());
        prop_assert_eq!(moved.nilpotency_step().unwrap(), alg.nilpotency_step().unwrap());
    }

    #[test]
    fn file_format_round_trips(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let alg = sample::two_step_algebra(&mut rng, 4);
        let text = serde_json::to_string(&alg).unwrap();
        let back: ComplexNilAlgebra = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, alg);
    }
}

#[test]
fn iwasawa_differential() {
    let iw = common::alg("iwasawa");
    assert_eq!(iw.generator_differential(3), Form::monomial(3, &[1, 2], &[], cq(1, 0)));
    assert_eq!(iw.nilpotency_step().unwrap(), 2);
}

#[test]
fn invalid_algebra_reports_offending_generator() {
    let bad = ComplexNilAlgebra::new("bad", 3)
        .unwrap()
        .with_one_one(2, 1, 1, cq(1, 0))
        .unwrap()
        .with_one_one(3, 2, 3, cq(1, 0))
        .unwrap();
    let report = bad.validate();
    assert!(!report.valid);
    assert_eq!(report.residuals.len(), 1);
    assert_eq!(report.residuals[0].j, 3);
}

#[test]
fn solvable_algebra_is_valid_but_not_nilpotent() {
    let solv = ComplexNilAlgebra::new("solvable", 3)
        .unwrap()
        .with_two_zero(2, 1, 3, cq(1, 0))
        .unwrap()
        .with_two_zero(3, 1, 2, cq(1, 0))
        .unwrap();
    assert!(solv.validate().valid);
    assert!(matches!(solv.nilpotency_step(), Err(AlgebraError::NotNilpotent { .. })));
}

#[test]
fn catalog_normal_forms() {
    let k = |name: &str| common::alg(name).to_normal_form().normal().unwrap().k();
    assert_eq!(k("torus"), 3);
    assert_eq!(k("kodaira-thurston"), 1);
    assert_eq!(k("iwasawa"), 2);
    assert_eq!(k("h3-plus-r3"), 2);
}

#[test]
fn three_step_algebra_is_outside_normal_form_class() {
    // dα² = α^{11̄}, dα³ = α^{12̄}: α² is not closed, so step 3
    let a = ComplexNilAlgebra::new("three-step", 3)
        .unwrap()
        .with_one_one(2, 1, 1, cq(1, 0))
        .unwrap()
        .with_one_one(3, 1, 2, cq(1, 0))
        .unwrap();
    assert!(a.validate().valid);
    assert_eq!(a.nilpotency_step().unwrap(), 3);
    assert!(matches!(a.to_normal_form(), NormalFormOutcome::OutsideLemmaClass { .. }));
}

#[test]
fn file_format_rejects_bad_input() {
    let dup = r#"{"name":"x","n":2,"twoZero":[],"oneOne":[{"j":2,"r":1,"s":1,"re":"1"},{"j":2,"r":1,"s":1,"re":"2"}]}"#;
    assert!(serde_json::from_str::<ComplexNilAlgebra>(dup).is_err());
    let order = r#"{"name":"x","n":3,"twoZero":[{"j":3,"r":2,"s":1,"re":"1"}],"oneOne":[]}"#;
    assert!(serde_json::from_str::<ComplexNilAlgebra>(order).is_err());
    let range = r#"{"name":"x","n":2,"twoZero":[],"oneOne":[{"j":3,"r":1,"s":1,"re":"1"}]}"#;
    assert!(serde_json::from_str::<ComplexNilAlgebra>(range).is_err());
    let fractions = r#"{"name":"x","n":2,"twoZero":[],"oneOne":[{"j":2,"r":1,"s":1,"re":"1/2","im":0.25}]}"#;
    let a: ComplexNilAlgebra = serde_json::from_str(fractions).unwrap();
    assert_eq!(a.c11(2, 1, 1), nilherm::scalar::Cq::new(nilherm::scalar::rat(1, 2), nilherm::scalar::rat(1, 4)));
}

#[test]
fn catalog_export_round_trips() {
    for e in catalog::builtin() {
        let file = AlgebraFile::from(&e.algebra);
        let back = ComplexNilAlgebra::try_from(file).unwrap();
        assert_eq!(back, e.algebra);
    }
}
