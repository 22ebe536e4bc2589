//! Wedge products, conjugation and the differential on a small algebra.

use nilherm::scalar::cq;
use nilherm::{catalog, Form};

fn main() {
    let kt = catalog::by_name("kodaira-thurston").unwrap().algebra;
    let n = kt.n();
    let d = kt.differential();

    let a1 = Form::holo(n, 1);
    let a2 = Form::holo(n, 2);
    let b1 = Form::anti(n, 1);
    println!("α1 ∧ α2       = {}", a1.wedge(&a2));
    println!("α2 ∧ α1       = {}", a2.wedge(&a1));
    println!("conj(α1 ∧ α2) = {}", a1.wedge(&a2).conjugate());

    for j in 1..=n {
        println!("d α{j} = {}", kt.generator_differential(j));
    }

    let omega = &a1.wedge(&b1) + &Form::monomial(n, &[2], &[2], cq(1, 0));
    println!("ω      = {omega}");
    println!("dω     = {}", d.apply(&omega));
    println!("∂∂̄ω    = {}", d.del(&d.delbar(&omega)));
    println!("d(dω)  = {}", d.apply(&d.apply(&omega)));
}
