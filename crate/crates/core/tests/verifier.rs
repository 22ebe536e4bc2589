mod common;

use nilherm::algebra::CoframeChange;
use nilherm::scalar::cq;
use nilherm::search::{self, SearchStatus};
use nilherm::verifier::{self, Hypothesis, StepName, StepOutcome, VerifierError};
use nilherm::{catalog, sample, ComplexNilAlgebra, Conclusion, HermitianMetric, NormalForm, SearchOptions};
use proptest::prelude::*;
use rand::Rng;

fn identity_chain(name: &str) -> nilherm::ProofTrace {
    let a = common::alg(name);
    let h = HermitianMetric::identity(a.n());
    verifier::proof_chain(&a, &h, &h).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn chain_never_contradicts_itself(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = rng.random_range(2..=4);
        let k = rng.random_range(1..n);
        let density = rng.random_range(0.3..=1.0);
        let nf = sample::balanced_normal_form(&mut rng, n, k, density);
        let p = CoframeChange { matrix: sample::lower_triangular_factor(&mut rng, n) };
        let alg = nf.base().change_coframe(&p).unwrap();
        let g = HermitianMetric::identity(n).in_coframe(&p).unwrap();
        let opts = SearchOptions { seeds: 4, max_iter: 200, seed, ..SearchOptions::default() };
        let skt = search::find_skt_metric(&alg, &opts);
        let g_skt = skt.witness.unwrap_or_else(|| sample::pd_metric(&mut rng, n));
        let trace = verifier::proof_chain(&alg, &g, &g_skt).unwrap();
        prop_assert!(!matches!(trace.conclusion, Conclusion::Contradiction { .. }), "{:?}", trace.conclusion);
        prop_assert_eq!(trace.steps.len(), StepName::ORDER.len());
        if skt.status == SearchStatus::Feasible {
            prop_assert!(alg.is_abelian());
            prop_assert_eq!(trace.conclusion, Conclusion::ForcedAbelian);
        }
    }

    #[test]
    fn weighted_identity_holds_on_diagonal_metrics(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let nf = sample::any_normal_form(&mut rng, 4, 4);
        let h = sample::diagonal_metric(&mut rng, nf.n());
        let id = verifier::quadratic_identity(&nf, &h).unwrap();
        prop_assert!(id.equal);
    }
}

#[test]
fn chain_outcomes_on_catalog() {
    assert_eq!(identity_chain("torus").conclusion, Conclusion::ForcedAbelian);
    let kt = identity_chain("kodaira-thurston");
    assert!(matches!(kt.conclusion, Conclusion::HypothesisFailed { which: Hypothesis::Balanced, .. }));
    let iw = identity_chain("iwasawa");
    assert!(matches!(iw.conclusion, Conclusion::HypothesisFailed { which: Hypothesis::Skt, .. }));
    let b = identity_chain("balanced-not-skt-6d");
    assert!(matches!(b.conclusion, Conclusion::HypothesisFailed { which: Hypothesis::Skt, .. }));
    let step5 = &b.steps[4];
    assert_eq!(step5.step, StepName::CoefficientIdentity);
    assert!(step5.details.contains("(1,2): -2"), "{}", step5.details);
}

#[test]
fn three_step_algebra_is_outside_the_class() {
    let a = ComplexNilAlgebra::new("three-step", 3)
        .unwrap()
        .with_one_one(2, 1, 1, cq(1, 0))
        .unwrap()
        .with_one_one(3, 1, 2, cq(1, 0))
        .unwrap();
    let h = HermitianMetric::identity(3);
    let trace = verifier::proof_chain(&a, &h, &h).unwrap();
    // identity is not balanced here, so the hypothesis failure wins
    assert!(matches!(trace.conclusion, Conclusion::HypothesisFailed { which: Hypothesis::Balanced, .. }));
    assert_eq!(trace.steps[0].outcome, StepOutcome::Fails);
    assert!(trace.steps[1..7].iter().all(|s| s.outcome == StepOutcome::Skipped));
}

#[test]
fn digests_chain_and_are_deterministic() {
    let a = identity_chain("iwasawa");
    let b = identity_chain("iwasawa");
    assert_eq!(a, b);
    let digests: std::collections::BTreeSet<_> = a.steps.iter().map(|s| &s.inputs_digest).collect();
    assert_eq!(digests.len(), a.steps.len());
    assert!(a.steps.iter().all(|s| s.inputs_digest.len() == 64));
    let kt = identity_chain("kodaira-thurston");
    assert_ne!(a.steps[0].inputs_digest, kt.steps[0].inputs_digest);
}

#[test]
fn trace_round_trips_through_json() {
    let trace = identity_chain("balanced-not-skt-6d");
    let text = serde_json::to_string(&trace).unwrap();
    let back: nilherm::ProofTrace = serde_json::from_str(&text).unwrap();
    assert_eq!(back, trace);
}

#[test]
fn dimension_mismatch_is_an_error() {
    let a = common::alg("iwasawa");
    let err = verifier::proof_chain(&a, &HermitianMetric::identity(2), &HermitianMetric::identity(3)).unwrap_err();
    assert!(matches!(err, VerifierError::DimensionMismatch { algebra: 3, balanced: 2, skt: 3 }));
}

#[test]
fn x_vectors_vanish_only_on_abelian_normal_forms() {
    for e in catalog::builtin() {
        let nf: NormalForm = e.algebra.to_normal_form().normal().unwrap();
        assert_eq!(verifier::x_vectors(&nf).all_zero(), e.expected.abelian, "{}", e.name);
    }
}

#[test]
fn sweep_excludes_invalid_algebras() {
    let bad = ComplexNilAlgebra::new("bad", 3)
        .unwrap()
        .with_one_one(2, 1, 1, cq(1, 0))
        .unwrap()
        .with_one_one(3, 2, 3, cq(1, 0))
        .unwrap();
    let mut algebras: Vec<_> = catalog::builtin().into_iter().map(|e| e.algebra).collect();
    algebras.push(bad);
    let table = verifier::theorem_sweep(&algebras, &SearchOptions::default());
    assert_eq!(table.rows.len(), catalog::names().len());
    assert_eq!(table.excluded.len(), 1);
    assert_eq!(table.excluded[0].algebra, "bad");
    assert!(table.all_consistent());
    assert_eq!(table.rows.iter().filter(|r| r.abelian).count(), 1);
}
