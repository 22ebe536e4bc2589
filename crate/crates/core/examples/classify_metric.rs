//! Kähler, SKT and balanced conditions for a few metrics.

use nilherm::metrics;
use nilherm::scalar::{cq, rat};
use nilherm::{catalog, HermitianMetric};

fn main() {
    let iw = catalog::by_name("iwasawa").unwrap().algebra;
    let metrics_to_try = [
        ("identity", HermitianMetric::identity(3)),
        ("diag(1, 2, 5)", HermitianMetric::diagonal(&[rat(1, 1), rat(2, 1), rat(5, 1)]).unwrap()),
        (
            "off-diagonal",
            HermitianMetric::new(vec![
                vec![cq(2, 0), cq(0, 1), cq(0, 0)],
                vec![cq(0, -1), cq(2, 0), cq(1, 0)],
                vec![cq(0, 0), cq(1, 0), cq(3, 0)],
            ])
            .unwrap(),
        ),
    ];
    for (label, h) in &metrics_to_try {
        let c = metrics::classify(h, &iw).unwrap();
        println!("{label}: kähler {} skt {} balanced {}", c.kahler, c.skt, c.balanced);
        println!("  ∂∂̄ω     = {}", c.ddbar_omega);
        println!("  d(ω^2)  = {}", c.d_omega_power);
    }
}
