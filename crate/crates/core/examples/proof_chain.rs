//! The step-by-step balanced + SKT check on a metric pair.

use nilherm::verifier;
use nilherm::{catalog, HermitianMetric};

fn main() {
    for name in ["balanced-not-skt-6d", "torus"] {
        let a = catalog::by_name(name).unwrap().algebra;
        let h = HermitianMetric::identity(a.n());
        let trace = verifier::proof_chain(&a, &h, &h).unwrap();
        println!("== {}", trace.algebra);
        for (i, s) in trace.steps.iter().enumerate() {
            println!("{}. {} [{:?}] {}", i + 1, s.step.as_str(), s.outcome, s.details);
        }
        println!("{}", serde_json::to_string(&trace.conclusion).unwrap());
    }
}
