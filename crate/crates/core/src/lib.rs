//! Invariant Hermitian geometry on nilpotent Lie algebras with complex
//! structure.
//!
//! The crate works entirely at the level of the Lie algebra: an algebra is a
//! set of structure constants on a `(1,0)`-coframe ([`algebra`]), forms are
//! sparse elements of the complexified exterior algebra ([`forms`]), and
//! metrics are Hermitian positive-definite coefficient matrices
//! ([`metrics`]). On top of that sit the Kähler/SKT/balanced classifiers,
//! a metric search with exact certificates ([`search`]), and a step-by-step
//! checker showing that no non-abelian algebra carries both a balanced and an
//! SKT metric ([`verifier`]).
//!
//! All classification paths are exact (Gaussian rationals); floating point is
//! confined to the inner loops of [`search`], whose results are rationalised
//! and re-checked exactly before they are reported.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod forms;
pub mod linalg;
pub mod metrics;
pub mod sample;
pub mod scalar;
pub mod search;
pub mod verifier;

pub use algebra::{AlgebraError, ComplexNilAlgebra, CoframeChange, NormalForm, NormalFormOutcome};
pub use forms::{Differential, Form};
pub use metrics::{HermitianMetric, MetricClass, MetricError};
pub use scalar::Cq;
pub use search::{FeasibilityReport, SearchOptions, SearchStatus, SearchTarget};
pub use verifier::{Conclusion, ProofTrace};
