//! Both searches over random normal forms; no row may report both metrics on
//! a non-abelian algebra.

use nilherm::{sample, verifier, SearchOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let algebras: Vec<_> = (0..24)
        .map(|i| {
            let n = rng.random_range(2..=4);
            let k = rng.random_range(1..n);
            sample::normal_form(&mut rng, n, k, 0.6).into_base().renamed(format!("random-{i}"))
        })
        .collect();
    let table = verifier::theorem_sweep(&algebras, &SearchOptions::default());
    for r in &table.rows {
        println!(
            "{:<10} skt {:<20} balanced {:<20} abelian {}",
            r.algebra,
            format!("{:?}", r.skt_status),
            format!("{:?}", r.balanced_status),
            r.abelian
        );
    }
    println!("all consistent: {}", table.all_consistent());
}
