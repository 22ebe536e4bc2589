#![allow(dead_code)]

use nilherm::catalog;
use nilherm::ComplexNilAlgebra;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn alg(name: &str) -> ComplexNilAlgebra {
    catalog::by_name(name).unwrap_or_else(|| panic!("no catalog entry {name}")).algebra
}

pub fn run(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["nilherm"];
    argv.extend_from_slice(args);
    nilherm::cli::run(argv)
}
