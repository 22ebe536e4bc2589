//! Built-in example algebras with their known metric properties.

use serde::Serialize;

use crate::algebra::ComplexNilAlgebra;
use crate::scalar::cq;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExpectedProperties {
    pub skt_feasible: bool,
    pub balanced_feasible: bool,
    pub abelian: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub algebra: ComplexNilAlgebra,
    pub note: &'static str,
    pub expected: ExpectedProperties,
}

fn entry(
    name: &'static str,
    n: usize,
    note: &'static str,
    (skt, balanced): (bool, bool),
    build: impl FnOnce(ComplexNilAlgebra) -> ComplexNilAlgebra,
) -> CatalogEntry {
    let algebra = build(ComplexNilAlgebra::new(name, n).expect("catalog dimension"));
    let abelian = algebra.is_abelian();
    CatalogEntry {
        name,
        algebra,
        note,
        expected: ExpectedProperties { skt_feasible: skt, balanced_feasible: balanced, abelian },
    }
}

/// The six built-in entries, in display order.
pub fn builtin() -> Vec<CatalogEntry> {
    vec![
        entry("torus", 3, "abelian C^3; every metric is Kähler", (true, true), |a| a),
        entry(
            "kodaira-thurston",
            2,
            "h3 ⊕ R with dα² = α^{11̄}; k = 1, every metric SKT, none balanced",
            (true, false),
            |a| a.with_one_one(2, 1, 1, cq(1, 0)).unwrap(),
        ),
        entry(
            "iwasawa",
            3,
            "complex Heisenberg group, dα³ = α^{12}; the identity is balanced, no metric is SKT",
            (false, true),
            |a| a.with_two_zero(3, 1, 2, cq(1, 0)).unwrap(),
        ),
        entry(
            "h3-plus-r3",
            3,
            "h3 ⊕ R³ with dα³ = α^{11̄}; k = 2, every metric SKT, none balanced",
            (true, false),
            |a| a.with_one_one(3, 1, 1, cq(1, 0)).unwrap(),
        ),
        entry(
            "balanced-not-skt-6d",
            3,
            "dα³ = α^{11̄} − α^{22̄}; the identity is balanced, the α^{121̄2̄} coefficient of ∂∂̄ω is −2a_{33̄}",
            (false, true),
            |a| a.with_one_one(3, 1, 1, cq(1, 0)).unwrap().with_one_one(3, 2, 2, cq(-1, 0)).unwrap(),
        ),
        entry(
            "skt-not-balanced-6d",
            3,
            "dα³ = α^{11̄} + α^{12̄} + α^{21̄} + α^{22̄}; every metric SKT, none balanced",
            (true, false),
            |a| {
                a.with_one_one(3, 1, 1, cq(1, 0))
                    .unwrap()
                    .with_one_one(3, 1, 2, cq(1, 0))
                    .unwrap()
                    .with_one_one(3, 2, 1, cq(1, 0))
                    .unwrap()
                    .with_one_one(3, 2, 2, cq(1, 0))
                    .unwrap()
            },
        ),
    ]
}

pub fn names() -> Vec<&'static str> {
    builtin().into_iter().map(|e| e.name).collect()
}

pub fn by_name(name: &str) -> Option<CatalogEntry> {
    builtin().into_iter().find(|e| e.name == name)
}
