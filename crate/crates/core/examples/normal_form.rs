//! Validation, nilpotency step and normal form, including an algebra written
//! in a scrambled coframe.

use nilherm::algebra::CoframeChange;
use nilherm::scalar::cq;
use nilherm::{ComplexNilAlgebra, NormalFormOutcome};

fn main() {
    // Iwasawa in the coframe β1 = α1 + α3, β2 = α2, β3 = α3 + i α1
    let iwasawa = ComplexNilAlgebra::new("iwasawa", 3).unwrap().with_two_zero(3, 1, 2, cq(1, 0)).unwrap();
    let change = CoframeChange {
        matrix: vec![
            vec![cq(1, 0), cq(0, 0), cq(1, 0)],
            vec![cq(0, 0), cq(1, 0), cq(0, 0)],
            vec![cq(0, 1), cq(0, 0), cq(1, 0)],
        ],
    };
    let scrambled = iwasawa.change_coframe(&change).unwrap().renamed("iwasawa-scrambled");
    report(&scrambled);

    let broken = ComplexNilAlgebra::new("broken", 3)
        .unwrap()
        .with_one_one(2, 1, 1, cq(1, 0))
        .unwrap()
        .with_one_one(3, 2, 3, cq(1, 0))
        .unwrap();
    report(&broken);
}

fn report(a: &ComplexNilAlgebra) {
    println!("== {}", a.name());
    for j in 1..=a.n() {
        println!("  d α{j} = {}", a.generator_differential(j));
    }
    let v = a.validate();
    if !v.valid {
        for r in &v.residuals {
            println!("  d² α{} = {}", r.j, r.d_squared);
        }
        return;
    }
    println!("  nilpotency step {}", a.nilpotency_step().unwrap());
    match a.to_normal_form() {
        NormalFormOutcome::Normal(nf) => {
            println!("  normal form with k = {} (new coframe)", nf.k());
            for j in 1..=nf.n() {
                println!("    d α{j} = {}", nf.base().generator_differential(j));
            }
        }
        other => println!("  {other:?}"),
    }
}
