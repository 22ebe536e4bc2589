//! Flag-preserving change to a unitary coframe and the balanced residuals
//! read off there.

use nilherm::metrics;
use nilherm::scalar::{cq, format_cq, rat};
use nilherm::{catalog, HermitianMetric};

fn main() {
    let nf = catalog::by_name("h3-plus-r3").unwrap().algebra.to_normal_form().normal().unwrap();
    let h = HermitianMetric::new(vec![
        vec![cq(9, 0), cq(0, 0), cq(0, 0)],
        vec![cq(0, 0), cq(2, 0), cq(0, 2)],
        vec![cq(0, 0), cq(0, -2), cq(4, 0)],
    ])
    .unwrap();

    let diag = metrics::diagonalize(&nf, &h).unwrap();
    let pivots: Vec<String> = diag.pivots.iter().map(|p| p.to_string()).collect();
    println!("pivots: {}", pivots.join(", "));

    match metrics::unitarize(&nf, &h) {
        Ok((unitary, t)) => {
            println!("metric is the identity in the new coframe: {}", h.in_coframe(&t).unwrap().is_identity());
            for (l, v) in metrics::balanced_residuals(&unitary) {
                println!("residual at {l}: {}", format_cq(&v));
            }
        }
        Err(e) => println!("{e}"),
    }

    // a pivot of 2 has no rational square root
    let irrational = HermitianMetric::diagonal(&[rat(2, 1), rat(1, 1), rat(1, 1)]).unwrap();
    if let Err(e) = metrics::unitarize(&nf, &irrational) {
        println!("{e}");
    }
    let diag = metrics::diagonalize(&nf, &irrational).unwrap();
    for (l, v) in metrics::balanced_residuals_diagonal(&diag.normal_form, &diag.pivots) {
        println!("weighted residual at {l}: {}", format_cq(&v));
    }
}
