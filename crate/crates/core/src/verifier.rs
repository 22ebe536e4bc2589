//! Step-by-step check that a balanced metric and an SKT metric on the same
//! 2-step algebra force the algebra to be abelian.
//!
//! The chain, on an algebra `A` with metrics `g` (balanced candidate) and
//! `g'` (SKT candidate):
//!
//! 1. `A` is at most 2-step nilpotent;
//! 2. `A` has a normal form `α^1..α^k` closed, `dα^j ∈ Λ²⟨α^r, ᾱ^r : r ≤ k⟩`;
//! 3. a flag-preserving change makes `g` unitary, or diagonal with rational
//!    pivots `d_r` when the square roots are irrational (every later quantity
//!    then carries weights `w_r = 1/d_r`, which is the unitary computation
//!    with the factors `√d` cleared);
//! 4. `g` balanced ⇔ all residuals `Σ_r w_r c^l_{rr̄}` vanish;
//! 5. the `α^{rs r̄ s̄}` coefficients of `∂∂̄ω'` vanish when `g'` is SKT;
//! 6. summing them gives `Σ w_r w_s C(r,s) = 2 a'(R, R) − SKTnew`, with `R`
//!    the residual vector, so both hypotheses give `SKTnew = 0`;
//! 7. `SKTnew` is a positive combination of `ω'(X, X̄)` over the vectors
//!    `X_{rs}, X_{rs̄}` built from the structure constants, so they all vanish;
//! 8. hence every `dα^j = 0`.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::{ComplexNilAlgebra, CoframeChange, NormalForm, NormalFormOutcome};
use crate::forms::Form;
use crate::metrics::{self, HermitianMetric, MetricError};
use crate::scalar::{cq_real, format_cq, format_rational, Cq};
use crate::search::{self, SearchOptions, SearchStatus};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifierError {
    #[error("dimension mismatch: algebra has n = {algebra}, balanced metric {balanced}, SKT metric {skt}")]
    DimensionMismatch { algebra: usize, balanced: usize, skt: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum XKind {
    /// `X_{rs}`, components `c^i_{rs}`.
    Holomorphic,
    /// `X_{rs̄}`, components `c^i_{rs̄}`, counted with weight 2.
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XVector {
    pub r: usize,
    pub s: usize,
    pub kind: XKind,
    /// Components on `X_1..X_n` (zero for indices `≤ k`).
    #[serde(with = "crate::scalar::serde_cq_vec")]
    pub components: Vec<Cq>,
    /// Positive factor multiplying `ω'(X, X̄)` in the sum.
    #[serde(with = "crate::scalar::serde_rational")]
    pub weight: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XVectorFamily {
    pub n: usize,
    pub k: usize,
    pub vectors: Vec<XVector>,
}

impl XVectorFamily {
    pub fn all_zero(&self) -> bool {
        self.vectors.iter().all(|v| v.components.iter().all(Zero::is_zero))
    }

    /// `Σ weight · ω'(X, X̄)`.
    pub fn weighted_pairing(&self, h: &HermitianMetric) -> Cq {
        self.vectors
            .iter()
            .fold(Cq::zero(), |acc, v| acc + h.pairing(&v.components) * cq_real(v.weight.clone()))
    }

    pub fn get(&self, r: usize, s: usize, kind: XKind) -> Option<&XVector> {
        self.vectors.iter().find(|v| v.r == r && v.s == s && v.kind == kind)
    }
}

/// The vectors `X_{rs}` and `X_{rs̄}` for all `r, s ≤ k`.
pub fn x_vectors(nf: &NormalForm) -> XVectorFamily {
    x_vectors_weighted(nf, &vec![BigRational::one(); nf.n()])
}

/// As [`x_vectors`], with `(r, s)` weights multiplied by `w_r w_s`.
pub fn x_vectors_weighted(nf: &NormalForm, weights: &[BigRational]) -> XVectorFamily {
    let (n, k) = (nf.n(), nf.k());
    let c = nf.base();
    let two = BigRational::from_integer(2.into());
    let mut vectors = Vec::new();
    for r in 1..=k {
        for s in 1..=k {
            let w = &weights[r - 1] * &weights[s - 1];
            let holo = (1..=n).map(|i| if i > k { c.c20(i, r, s) } else { Cq::zero() }).collect();
            vectors.push(XVector { r, s, kind: XKind::Holomorphic, components: holo, weight: w.clone() });
            let mixed = (1..=n).map(|i| if i > k { c.c11(i, r, s) } else { Cq::zero() }).collect();
            vectors.push(XVector { r, s, kind: XKind::Mixed, components: mixed, weight: &two * &w });
        }
    }
    XVectorFamily { n, k, vectors }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticIdentity {
    #[serde(with = "crate::scalar::serde_cq")]
    pub lhs: Cq,
    #[serde(with = "crate::scalar::serde_cq")]
    pub rhs: Cq,
    pub equal: bool,
}

/// X-vector pairing sum against [`metrics::sktnew_value`].
pub fn quadratic_identity(nf: &NormalForm, h: &HermitianMetric) -> Result<QuadraticIdentity, MetricError> {
    quadratic_identity_weighted(nf, h, &vec![BigRational::one(); nf.n()])
}

pub fn quadratic_identity_weighted(
    nf: &NormalForm,
    h: &HermitianMetric,
    weights: &[BigRational],
) -> Result<QuadraticIdentity, MetricError> {
    let rhs = metrics::sktnew_value_weighted(nf, h, weights)?;
    let lhs = x_vectors_weighted(nf, weights).weighted_pairing(h);
    Ok(QuadraticIdentity { equal: lhs == rhs, lhs, rhs })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum StepName {
    TwoStepCheck,
    NormalForm,
    Unitarize,
    BalancedResiduals,
    CoefficientIdentity,
    SktnewIdentity,
    XVectors,
    Conclusion,
}

impl StepName {
    pub const ORDER: [StepName; 8] = [
        StepName::TwoStepCheck,
        StepName::NormalForm,
        StepName::Unitarize,
        StepName::BalancedResiduals,
        StepName::CoefficientIdentity,
        StepName::SktnewIdentity,
        StepName::XVectors,
        StepName::Conclusion,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StepName::TwoStepCheck => "twoStepCheck",
            StepName::NormalForm => "normalForm",
            StepName::Unitarize => "unitarize",
            StepName::BalancedResiduals => "balancedResiduals",
            StepName::CoefficientIdentity => "coefficientIdentity",
            StepName::SktnewIdentity => "sktnewIdentity",
            StepName::XVectors => "xVectors",
            StepName::Conclusion => "conclusion",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum StepOutcome {
    /// The step's claim holds.
    Holds,
    /// The step's claim fails (a hypothesis or class condition).
    Fails,
    /// Not reachable because an earlier gate failed.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProofStep {
    pub step: StepName,
    /// SHA-256 over the previous digest and this step's inputs.
    pub inputs_digest: String,
    pub outcome: StepOutcome,
    pub details: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Hypothesis {
    Balanced,
    Skt,
}

impl Hypothesis {
    pub fn as_str(self) -> &'static str {
        match self {
            Hypothesis::Balanced => "balanced",
            Hypothesis::Skt => "skt",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Conclusion {
    /// Both hypotheses hold and every structure constant is zero.
    ForcedAbelian,
    #[serde(rename_all = "camelCase")]
    HypothesisFailed {
        which: Hypothesis,
        #[serde(with = "crate::scalar::serde_rational")]
        defect: BigRational,
        /// `d(ω^{n-1})` for the balanced metric, `∂∂̄ω'` for the SKT metric.
        defect_form: Form<Cq>,
    },
    OutsideLemmaClass { reason: String },
    /// An exact identity of the chain failed; never expected.
    Contradiction { step: StepName, detail: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub algebra: String,
    pub steps: Vec<ProofStep>,
    pub conclusion: Conclusion,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::with_capacity(2 * bytes.len()), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

struct TraceBuilder {
    prev: String,
    steps: Vec<ProofStep>,
}

impl TraceBuilder {
    fn push(&mut self, step: StepName, inputs: &impl Serialize, outcome: StepOutcome, details: String) {
        let payload = serde_json::to_string(inputs).expect("step inputs serialise");
        let mut h = Sha256::new();
        h.update(self.prev.as_bytes());
        h.update(step.as_str().as_bytes());
        h.update(payload.as_bytes());
        let digest = hex(&h.finalize());
        self.prev.clone_from(&digest);
        self.steps.push(ProofStep { step, inputs_digest: digest, outcome, details });
    }

    fn skip_rest(&mut self, from: usize, reason: &str) {
        for &step in &StepName::ORDER[from..7] {
            self.push(step, &reason, StepOutcome::Skipped, reason.to_string());
        }
    }
}

fn holds(b: bool) -> StepOutcome {
    if b {
        StepOutcome::Holds
    } else {
        StepOutcome::Fails
    }
}

fn list_cq<'a>(items: impl Iterator<Item = (String, &'a Cq)>) -> String {
    let parts: Vec<String> = items.map(|(k, v)| format!("{k}: {}", format_cq(v))).collect();
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(", ")
    }
}

/// Runs the chain on `(algebra, g, g')`.
pub fn proof_chain(
    algebra: &ComplexNilAlgebra,
    g: &HermitianMetric,
    g_skt: &HermitianMetric,
) -> Result<ProofTrace, VerifierError> {
    let n = algebra.n();
    if g.n() != n || g_skt.n() != n {
        return Err(VerifierError::DimensionMismatch { algebra: n, balanced: g.n(), skt: g_skt.n() });
    }
    let class_g = metrics::classify(g, algebra)?;
    let class_s = metrics::classify(g_skt, algebra)?;
    let mut tb = TraceBuilder { prev: String::new(), steps: Vec::new() };
    let mut contradiction: Option<(StepName, String)> = None;

    let hypothesis_conclusion = || {
        if !class_g.balanced {
            Some(Conclusion::HypothesisFailed {
                which: Hypothesis::Balanced,
                defect: class_g.balanced_defect.clone(),
                defect_form: class_g.d_omega_power.clone(),
            })
        } else if !class_s.skt {
            Some(Conclusion::HypothesisFailed {
                which: Hypothesis::Skt,
                defect: class_s.skt_defect.clone(),
                defect_form: class_s.ddbar_omega.clone(),
            })
        } else {
            None
        }
    };

    // 1
    let step = algebra.nilpotency_step();
    let two_step = matches!(step, Ok(s) if s <= 2);
    let details = match &step {
        Ok(s) => format!("nilpotency step {s}"),
        Err(e) => e.to_string(),
    };
    tb.push(StepName::TwoStepCheck, &(algebra, g, g_skt), holds(two_step), details);
    if !two_step {
        let reason = "algebra is not 2-step nilpotent".to_string();
        tb.skip_rest(1, &reason);
        return Ok(finish(tb, algebra, hypothesis_conclusion().unwrap_or(Conclusion::OutsideLemmaClass { reason })));
    }

    // 2
    let nf = match algebra.to_normal_form() {
        NormalFormOutcome::Normal(nf) => {
            tb.push(StepName::NormalForm, algebra, StepOutcome::Holds, format!("k = {} closed generators", nf.k()));
            nf
        }
        NormalFormOutcome::OutsideLemmaClass { k, offending_generator, .. } => {
            let reason = format!("dα^{offending_generator} leaves Λ² of the {k} closed directions");
            tb.push(StepName::NormalForm, algebra, StepOutcome::Fails, reason.clone());
            tb.skip_rest(2, &reason);
            return Ok(finish(tb, algebra, hypothesis_conclusion().unwrap_or(Conclusion::OutsideLemmaClass { reason })));
        }
    };

    // 3
    let g_nf = g.in_coframe(nf.change())?;
    let (frame, change, weights, how) = match metrics::unitarize(&nf, &g_nf) {
        Ok((frame, t)) => (frame, t, vec![BigRational::one(); n], "exact unitary coframe".to_string()),
        Err(MetricError::IrrationalPivot { .. }) => {
            let diag = metrics::diagonalize(&nf, &g_nf)?;
            let w: Vec<BigRational> = diag.pivots.iter().map(|d| BigRational::one() / d).collect();
            let shown: Vec<String> = diag.pivots.iter().map(format_rational).collect();
            let how = format!("diagonal coframe, pivots ({}); weights 1/d_r", shown.join(", "));
            (diag.normal_form, diag.change, w, how)
        }
        Err(e) => return Err(e.into()),
    };
    let total: CoframeChange = frame.change().clone();
    let g_frame = g.in_coframe(&total)?;
    let s_frame = g_skt.in_coframe(&total)?;
    let flag_ok = change.is_lower_triangular() && frame.k() == nf.k();
    let balanced_after = metrics::classify(&g_frame, frame.base())?.balanced;
    let invariant = balanced_after == class_g.balanced;
    if !(flag_ok && invariant) && contradiction.is_none() {
        contradiction = Some((StepName::Unitarize, format!("flag kept: {flag_ok}, balanced flag kept: {invariant}")));
    }
    tb.push(
        StepName::Unitarize,
        &(&nf, g, &g_nf),
        holds(flag_ok && invariant),
        format!("{how}; flag preserved: {flag_ok}; balanced before/after: {}/{balanced_after}", class_g.balanced),
    );

    // 4
    let residuals = metrics::balanced_residuals_diagonal(&frame, &weights);
    let residuals_zero = residuals.values().all(Zero::is_zero);
    if residuals_zero != class_g.balanced && contradiction.is_none() {
        contradiction = Some((
            StepName::BalancedResiduals,
            format!("residuals zero: {residuals_zero}, classifier balanced: {}", class_g.balanced),
        ));
    }
    tb.push(
        StepName::BalancedResiduals,
        &(&frame, &g_frame),
        holds(residuals_zero),
        format!("residuals {}", list_cq(residuals.iter().map(|(l, v)| (format!("l={l}"), v)))),
    );

    // 5
    let coeffs = metrics::skt_reduced_coefficients(&frame, &s_frame)?;
    let ddbar = metrics::ddbar(&frame.base().differential(), &metrics::fundamental_form(&s_frame));
    let mismatched: Vec<(usize, usize)> = coeffs
        .iter()
        .filter(|((r, s), v)| ddbar.coeff(&[*r, *s], &[*r, *s]) != **v)
        .map(|(k, _)| *k)
        .collect();
    let coeffs_zero = coeffs.values().all(Zero::is_zero);
    if !mismatched.is_empty() && contradiction.is_none() {
        contradiction = Some((
            StepName::CoefficientIdentity,
            format!("coefficients differ from ∂∂̄ω' at {mismatched:?}"),
        ));
    }
    if class_s.skt && !coeffs_zero && contradiction.is_none() {
        contradiction = Some((StepName::CoefficientIdentity, "SKT metric with nonzero coefficient".into()));
    }
    tb.push(
        StepName::CoefficientIdentity,
        &(&residuals_zero, &frame, &s_frame),
        holds(coeffs_zero && mismatched.is_empty()),
        format!(
            "α^{{rs r̄ s̄}} coefficients of ∂∂̄ω' {}; match symbolic expansion: {}",
            list_cq(coeffs.iter().map(|((r, s), v)| (format!("({r},{s})"), v))),
            mismatched.is_empty()
        ),
    );

    // 6
    let k = frame.k();
    let two = cq_real(BigRational::from_integer(2.into()));
    let mut lhs = Cq::zero();
    for ((r, s), v) in &coeffs {
        // C is symmetric with zero diagonal: each unordered pair counts twice
        lhs += two.clone() * v.clone() * cq_real(&weights[r - 1] * &weights[s - 1]);
    }
    let mut rvec = vec![Cq::zero(); n];
    for (l, v) in &residuals {
        rvec[l - 1] = v.clone();
    }
    let sktnew = metrics::sktnew_value_weighted(&frame, &s_frame, &weights)?;
    let rhs = two.clone() * s_frame.pairing(&rvec) - sktnew.clone();
    let identity_ok = lhs == rhs;
    if !identity_ok && contradiction.is_none() {
        contradiction = Some((StepName::SktnewIdentity, format!("sum {} ≠ {}", format_cq(&lhs), format_cq(&rhs))));
    }
    let forced_zero = residuals_zero && coeffs_zero;
    tb.push(
        StepName::SktnewIdentity,
        &(&coeffs_zero, &residuals_zero, k),
        holds(identity_ok && (!forced_zero || sktnew.is_zero())),
        format!(
            "Σ w_r w_s C(r,s) = {} = 2a'(R,R̄) − SKTnew with SKTnew = {}; hypotheses force SKTnew = 0: {forced_zero}",
            format_cq(&lhs),
            format_cq(&sktnew)
        ),
    );
    if forced_zero && !sktnew.is_zero() && contradiction.is_none() {
        contradiction = Some((StepName::SktnewIdentity, format!("SKTnew = {} under both hypotheses", format_cq(&sktnew))));
    }

    // 7
    let family = x_vectors_weighted(&frame, &weights);
    let pairing = family.weighted_pairing(&s_frame);
    let pairing_ok = pairing == sktnew;
    let zero = family.all_zero();
    if !pairing_ok && contradiction.is_none() {
        contradiction = Some((
            StepName::XVectors,
            format!("pairing {} ≠ SKTnew {}", format_cq(&pairing), format_cq(&sktnew)),
        ));
    }
    if pairing.is_zero() != zero && contradiction.is_none() {
        contradiction = Some((StepName::XVectors, "positivity: zero pairing with nonzero vectors".into()));
    }
    tb.push(
        StepName::XVectors,
        &(&family, &s_frame),
        holds(pairing_ok && zero),
        format!(
            "{} vectors; Σ weight·ω'(X, X̄) = {}; all vectors zero: {zero}",
            family.vectors.len(),
            format_cq(&pairing)
        ),
    );

    let conclusion = if let Some((step, detail)) = contradiction {
        Conclusion::Contradiction { step, detail }
    } else if let Some(c) = hypothesis_conclusion() {
        c
    } else if frame.base().is_abelian() && zero {
        Conclusion::ForcedAbelian
    } else {
        Conclusion::Contradiction {
            step: StepName::XVectors,
            detail: "both hypotheses hold but structure constants survive".into(),
        }
    };
    Ok(finish(tb, algebra, conclusion))
}

fn finish(mut tb: TraceBuilder, algebra: &ComplexNilAlgebra, conclusion: Conclusion) -> ProofTrace {
    let details = match &conclusion {
        Conclusion::ForcedAbelian => "every dα^j vanishes: the algebra is abelian".to_string(),
        Conclusion::HypothesisFailed { which, defect, defect_form } => {
            format!("{} hypothesis fails: defect {} from {defect_form}", which.as_str(), format_rational(defect))
        }
        Conclusion::OutsideLemmaClass { reason } => format!("outside the normal-form class: {reason}"),
        Conclusion::Contradiction { step, detail } => format!("exact check failed at {}: {detail}", step.as_str()),
    };
    let outcome = holds(matches!(conclusion, Conclusion::ForcedAbelian));
    tb.push(StepName::Conclusion, &conclusion, outcome, details);
    ProofTrace { algebra: algebra.name().to_string(), steps: tb.steps, conclusion }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepRow {
    pub algebra: String,
    pub skt_status: SearchStatus,
    pub balanced_status: SearchStatus,
    pub abelian: bool,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedEntry {
    pub algebra: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub excluded: Vec<ExcludedEntry>,
}

impl SweepTable {
    pub fn all_consistent(&self) -> bool {
        self.rows.iter().all(|r| r.consistent)
    }
}

/// Runs both searches on every algebra; a row is consistent unless both
/// succeed on a non-abelian algebra. Invalid algebras are listed separately.
pub fn theorem_sweep(algebras: &[ComplexNilAlgebra], opts: &SearchOptions) -> SweepTable {
    let results: Vec<Result<SweepRow, ExcludedEntry>> = algebras
        .par_iter()
        .map(|a| {
            let report = a.validate();
            if !report.valid {
                return Err(ExcludedEntry {
                    algebra: a.name().to_string(),
                    reason: format!("fails d² = 0 on {} generator(s)", report.residuals.len()),
                });
            }
            let both = search::find_both(a, opts);
            Ok(SweepRow {
                algebra: a.name().to_string(),
                skt_status: both.skt.status,
                balanced_status: both.balanced.status,
                abelian: both.abelian,
                consistent: !both.theorem_violation,
            })
        })
        .collect();
    let mut table = SweepTable { rows: Vec::new(), excluded: Vec::new() };
    for r in results {
        match r {
            Ok(row) => table.rows.push(row),
            Err(e) => table.excluded.push(e),
        }
    }
    table
}
