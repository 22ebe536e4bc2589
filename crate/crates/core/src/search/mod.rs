//! Existence of SKT and balanced metrics: exact linear algebra first, a
//! floating-point cone search second, and an exact re-check of anything the
//! float phase proposes.
//!
//! Both conditions are linear in a suitable Hermitian unknown. `∂∂̄ω = 0` is
//! linear in the metric matrix `a`. `d(ω^{n-1}) = 0` is linear in the
//! cofactor matrix `C = det(a) a^{-T}`, which is positive definite exactly
//! when `a` is, and every positive definite `C` comes from the metric
//! `(C^T)^{-1}`. So both searches ask for a positive definite point in an
//! exactly known subspace `L` of Hermitian matrices:
//!
//! 1. the identity metric is tried exactly;
//! 2. exact certificates are read off `L` (only zero, traceless, a forced
//!    zero diagonal entry, a semidefinite equation) and, for balanced
//!    metrics, off a normal form with a single closed direction;
//! 3. `λ_min` is maximised over `L ∩ {tr = n}` from several starts; a
//!    positive optimum is rounded to rationals, mapped back into `L` exactly
//!    and accepted only if it is exactly positive definite;
//! 4. failing that, the same ascent runs over the equations themselves,
//!    looking for a semidefinite `W ≠ 0` orthogonal to `L`, which rules out
//!    any definite point;
//! 5. otherwise the answer is `unknown`.

pub mod cone;
pub mod linear;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::ComplexNilAlgebra;
use crate::forms::{Differential, Form};
use crate::linalg::{self, Matrix};
use crate::metrics::{self, HermitianMetric};
use crate::scalar::{format_cq, rationalize, Cq};
use cone::{ConeSpace, HMatrix};
use linear::{LinearSystem, Variable};

pub use linear::{balanced_linear_system, skt_linear_system};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SearchTarget {
    Skt,
    Balanced,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SearchStatus {
    Feasible,
    InfeasibleCertified,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CertificateKind {
    /// The equations admit only the zero matrix.
    OnlyZeroSolution,
    /// Every solution has trace zero.
    TracelessSolutions,
    /// A diagonal entry vanishes on every solution.
    ForcedDiagonal,
    /// Normal form with one closed direction and nonzero residual.
    SingleClosedDirection,
    /// A nonzero semidefinite `W` with `tr(W X) = 0` on every solution.
    SemidefiniteSeparator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub kind: CertificateKind,
    pub statement: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separator: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FeasibilityReport {
    pub target: SearchTarget,
    pub status: SearchStatus,
    pub witness: Option<HermitianMetric>,
    pub certificate: Option<Certificate>,
    /// Smallest float defect among the positive definite candidates that
    /// were evaluated; exactly 0 for a feasible report.
    pub defect: f64,
    pub seeds_tried: usize,
    /// Best `λ_min` over the trace-normalised solution set found by the cone
    /// search, when it ran.
    pub best_min_eigenvalue: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchOptions {
    pub seeds: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { seeds: 16, max_iter: 500, tol: 1e-9, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BothReport {
    pub target: SearchTarget,
    pub skt: FeasibilityReport,
    pub balanced: FeasibilityReport,
    pub abelian: bool,
    /// Both searches succeeded on a non-abelian algebra.
    pub theorem_violation: bool,
}

/// Ascent stops once `λ_min` exceeds this (on `tr = n`, the identity has 1).
const COMFORTABLE_MARGIN: f64 = 0.05;
const ROUNDING_DENOMINATORS: [u64; 4] = [100, 10_000, 1_000_000, 100_000_000];
const POLISH_ITERS: usize = 400;

fn float_matrix(m: &[Vec<Cq>]) -> HMatrix {
    let n = m.len();
    DMatrix::from_fn(n, n, |i, j| crate::scalar::to_complex64(&m[i][j]))
}

/// Identity, then `T†T` with `T` lower triangular, entries in `[-1, 1]` and
/// diagonal in `[0.5, 1.5]`.
fn start_matrices(n: usize, count: usize, seed: u64) -> Vec<HMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![HMatrix::identity(n, n)];
    while out.len() < count.max(1) {
        let t = DMatrix::from_fn(n, n, |i, j| {
            if j < i {
                Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
            } else if i == j {
                Complex64::new(rng.random_range(0.5..=1.5), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        out.push(t.adjoint() * t);
    }
    out
}

fn float_defect(diff: &Differential<Complex64>, target: SearchTarget, m: &HMatrix) -> f64 {
    let n = m.nrows();
    let scale = n as f64 / m.trace().re;
    let mut omega = Form::<Complex64>::zero(n);
    for i in 0..n {
        for j in 0..n {
            omega.add_term(
                crate::forms::Mono::from_indices(&[i + 1], &[j + 1]),
                m[(i, j)] * Complex64::new(scale, 0.0),
            );
        }
    }
    let form = match target {
        SearchTarget::Skt => diff.del(&diff.delbar(&omega)),
        _ if n == 1 => diff.apply(&omega),
        _ => diff.apply(&omega.wedge_pow(n - 1)),
    };
    form.coeff_norm_sq()
}

fn report(target: SearchTarget, status: SearchStatus) -> FeasibilityReport {
    FeasibilityReport {
        target,
        status,
        witness: None,
        certificate: None,
        defect: 0.0,
        seeds_tried: 0,
        best_min_eigenvalue: None,
        note: None,
    }
}

fn holds(class: &metrics::MetricClass, target: SearchTarget) -> bool {
    match target {
        SearchTarget::Skt => class.skt,
        SearchTarget::Balanced => class.balanced,
        SearchTarget::Both => class.skt && class.balanced,
    }
}

fn certificate(kind: CertificateKind, statement: String) -> Certificate {
    Certificate { kind, statement, separator: None }
}

/// Certificates visible directly in the solution space.
fn exact_certificate(system: &LinearSystem) -> Option<Certificate> {
    let n = system.n;
    let basis = system.null_basis();
    let what = match system.variable {
        Variable::Metric => "positive-definiteness",
        Variable::Cofactor => "positive-definiteness of the cofactor matrix c of any metric",
    };
    if basis.is_empty() {
        return Some(certificate(
            CertificateKind::OnlyZeroSolution,
            format!("only the zero matrix solves the linear system, contradicts {what}"),
        ));
    }
    let diag: Vec<usize> = (0..n).map(|i| linear::diag_index(n, i)).collect();
    let symbol = match system.variable {
        Variable::Metric => "a",
        Variable::Cofactor => "c",
    };
    let forced: Vec<String> = (0..n)
        .filter(|&i| basis.iter().all(|v| v[diag[i]].is_zero()))
        .map(|i| linear::param_label(symbol, linear::Param::Diag(i)))
        .collect();
    if !forced.is_empty() {
        return Some(certificate(
            CertificateKind::ForcedDiagonal,
            format!("{} = 0 forced, contradicts {what}", forced.join(", ")),
        ));
    }
    if basis.iter().all(|v| diag.iter().fold(BigRational::zero(), |acc, &d| acc + &v[d]).is_zero()) {
        return Some(certificate(
            CertificateKind::TracelessSolutions,
            format!("every solution has trace 0, contradicts {what}"),
        ));
    }
    for row in system.rows() {
        let w = linear::matrix_from_params(n, row, true);
        if linalg::is_positive_semidefinite(&w) {
            return Some(separator_certificate(&w, system.variable));
        }
    }
    None
}

fn separator_certificate(w: &[Vec<Cq>], variable: Variable) -> Certificate {
    let x = match variable {
        Variable::Metric => "a",
        Variable::Cofactor => "the cofactor matrix c",
    };
    Certificate {
        kind: CertificateKind::SemidefiniteSeparator,
        statement: format!(
            "nonzero positive semidefinite W with tr(W·X) = 0 on every solution X; a positive definite {x} would make it positive"
        ),
        separator: Some(w.iter().map(|r| r.iter().map(format_cq).collect()).collect()),
    }
}

/// Balanced obstruction for normal forms with one closed direction: a
/// flag-preserving change multiplies the residual vector `(c^l_{11̄})_{l>1}`
/// by an invertible matrix and a positive factor, so it never vanishes.
fn single_direction_certificate(algebra: &ComplexNilAlgebra) -> Option<Certificate> {
    if algebra.is_abelian() {
        return None;
    }
    let nf = algebra.to_normal_form().normal()?;
    if nf.k() != 1 {
        return None;
    }
    let residuals = metrics::balanced_residuals(&nf);
    if residuals.values().all(Zero::is_zero) {
        return None;
    }
    let shown: Vec<String> = residuals.values().map(format_cq).collect();
    Some(certificate(
        CertificateKind::SingleClosedDirection,
        format!(
            "normal form with k = 1: residual vector ({}) ≠ 0 is rescaled by a positive factor and an invertible matrix under every flag-preserving change, so no unitary coframe makes it vanish",
            shown.join(", ")
        ),
    ))
}

/// Rounds the free coordinates of a float solution and rebuilds an exact
/// solution from the null basis; accepts the first rounding that is exactly
/// positive definite and passes the exact classifier.
fn round_primal(
    system: &LinearSystem,
    basis: &Matrix<BigRational>,
    point: &HMatrix,
    algebra: &ComplexNilAlgebra,
    target: SearchTarget,
) -> Option<HermitianMetric> {
    let n = system.n;
    let free = system.free_params();
    let x_float = linear::float_params_from_matrix(point, false);
    for den in ROUNDING_DENOMINATORS {
        let y: Vec<BigRational> = free.iter().map(|&f| rationalize(x_float[f], den)).collect();
        let mut x = vec![BigRational::zero(); n * n];
        for (coef, v) in y.iter().zip(basis) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += coef * vi;
            }
        }
        let m = linear::matrix_from_params(n, &x, false);
        if !linalg::is_positive_definite(&m) {
            continue;
        }
        let Some(metric) = linear::metric_from_solution(system, m) else { continue };
        if metrics::classify(&metric, algebra).map(|c| holds(&c, target)).unwrap_or(false) {
            return Some(metric);
        }
    }
    None
}

/// Dual search over the equations for a semidefinite separator.
fn dual_separator(system: &LinearSystem, opts: &SearchOptions) -> Option<Certificate> {
    let n = system.n;
    let rows = system.rows();
    if rows.is_empty() {
        return None;
    }
    let float_rows = system.to_float_rows();
    let basis: Vec<HMatrix> = float_rows.iter().map(|r| linear::float_matrix_from_params(n, r, true)).collect();
    let space = ConeSpace::new(n, &basis);
    if space.dim() == 0 || space.traceless() {
        return None;
    }
    let starts = start_matrices(n, opts.seeds.clamp(1, 4), opts.seed ^ 0x5eed);
    let runs = space.multistart(&starts, 1.0, opts.max_iter, f64::INFINITY);
    let best = runs.into_iter().fold(None::<cone::Ascent>, |acc, r| match acc {
        Some(b) if b.value >= r.value => Some(b),
        _ => Some(r),
    })?;
    if best.value < -1e-3 {
        return None;
    }
    let polished = space.polish_semidefinite(&best.point, 1.0, POLISH_ITERS);
    let r_float = linear::float_params_from_matrix(&polished, true);
    let pivots = system.pivots();
    for den in ROUNDING_DENOMINATORS {
        let y: Vec<BigRational> = pivots.iter().map(|&p| rationalize(r_float[p], den)).collect();
        let mut r = vec![BigRational::zero(); n * n];
        for (coef, row) in y.iter().zip(rows) {
            for (ri, vi) in r.iter_mut().zip(row) {
                *ri += coef * vi;
            }
        }
        if r.iter().all(Zero::is_zero) {
            continue;
        }
        let w = linear::matrix_from_params(n, &r, true);
        if linalg::is_positive_semidefinite(&w) {
            return Some(separator_certificate(&w, system.variable));
        }
    }
    None
}

fn solve(
    algebra: &ComplexNilAlgebra,
    target: SearchTarget,
    system: &LinearSystem,
    opts: &SearchOptions,
) -> FeasibilityReport {
    let n = algebra.n();
    let identity = HermitianMetric::identity(n);
    if metrics::classify(&identity, algebra).map(|c| holds(&c, target)).unwrap_or(false) {
        let mut r = report(target, SearchStatus::Feasible);
        r.witness = Some(identity);
        r.note = Some("identity metric satisfies the condition exactly".into());
        return r;
    }

    let starts = start_matrices(n, opts.seeds, opts.seed);
    let diff = Differential::<Complex64>::new(algebra);
    let defect = starts.iter().map(|m| float_defect(&diff, target, m)).fold(f64::INFINITY, f64::min);
    let certified = |c: Certificate| {
        let mut r = report(target, SearchStatus::InfeasibleCertified);
        r.certificate = Some(c);
        r.defect = defect;
        r
    };

    if target == SearchTarget::Balanced {
        if let Some(c) = single_direction_certificate(algebra) {
            return certified(c);
        }
    }
    if let Some(c) = exact_certificate(system) {
        return certified(c);
    }

    let basis = system.null_basis();
    let float_basis: Vec<HMatrix> = basis
        .iter()
        .map(|v| float_matrix(&linear::matrix_from_params(n, v, false)))
        .collect();
    let space = ConeSpace::new(n, &float_basis);
    let runs = space.multistart(&starts, n as f64, opts.max_iter, COMFORTABLE_MARGIN);
    let best = runs
        .into_iter()
        .fold(None::<cone::Ascent>, |acc, r| match acc {
            Some(b) if b.value >= r.value => Some(b),
            _ => Some(r),
        })
        .expect("at least one start");

    let mut out = report(target, SearchStatus::Unknown);
    out.seeds_tried = starts.len();
    out.best_min_eigenvalue = Some(best.value);
    out.defect = defect;

    if best.value > opts.tol {
        if let Some(w) = round_primal(system, &basis, &best.point, algebra, target) {
            out.status = SearchStatus::Feasible;
            out.witness = Some(w);
            out.defect = 0.0;
            return out;
        }
        out.note = Some("rounded search point failed the exact check".into());
        return out;
    }
    if let Some(c) = dual_separator(system, opts) {
        out.status = SearchStatus::InfeasibleCertified;
        out.certificate = Some(c);
        return out;
    }
    out.note = Some(format!("no positive definite solution found; best λ_min = {:.6e}", best.value));
    out
}

/// Searches for a metric with `∂∂̄ω = 0`.
pub fn find_skt_metric(algebra: &ComplexNilAlgebra, opts: &SearchOptions) -> FeasibilityReport {
    solve(algebra, SearchTarget::Skt, &skt_linear_system(algebra), opts)
}

/// Searches for a metric with `d(ω^{n-1}) = 0`.
pub fn find_balanced_metric(algebra: &ComplexNilAlgebra, opts: &SearchOptions) -> FeasibilityReport {
    solve(algebra, SearchTarget::Balanced, &balanced_linear_system(algebra), opts)
}

pub fn find_both(algebra: &ComplexNilAlgebra, opts: &SearchOptions) -> BothReport {
    let skt = find_skt_metric(algebra, opts);
    let balanced = find_balanced_metric(algebra, opts);
    let abelian = algebra.is_abelian();
    let both = skt.status == SearchStatus::Feasible && balanced.status == SearchStatus::Feasible;
    BothReport { target: SearchTarget::Both, skt, balanced, abelian, theorem_violation: both && !abelian }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn alg(name: &str) -> ComplexNilAlgebra {
        catalog::by_name(name).unwrap().algebra
    }

    #[test]
    fn catalog_search_outcomes() {
        let opts = SearchOptions::default();
        let kt = find_skt_metric(&alg("kodaira-thurston"), &opts);
        assert_eq!(kt.status, SearchStatus::Feasible);
        assert!(kt.witness.unwrap().is_identity());

        let iw = find_skt_metric(&alg("iwasawa"), &opts);
        assert_eq!(iw.status, SearchStatus::InfeasibleCertified);
        assert_eq!(
            iw.certificate.unwrap().statement,
            "a_{33\u{304}} = 0 forced, contradicts positive-definiteness"
        );

        let kt_bal = find_balanced_metric(&alg("kodaira-thurston"), &opts);
        assert_eq!(kt_bal.status, SearchStatus::InfeasibleCertified);
        assert_eq!(kt_bal.certificate.unwrap().kind, CertificateKind::SingleClosedDirection);

        for e in catalog::builtin() {
            let both = find_both(&e.algebra, &opts);
            assert!(!both.theorem_violation, "{}", e.name);
            let skt_ok = both.skt.status == SearchStatus::Feasible;
            let bal_ok = both.balanced.status == SearchStatus::Feasible;
            assert_eq!(skt_ok, e.expected.skt_feasible, "{} skt: {:?}", e.name, both.skt);
            assert_eq!(bal_ok, e.expected.balanced_feasible, "{} balanced: {:?}", e.name, both.balanced);
            if !skt_ok {
                assert_eq!(both.skt.status, SearchStatus::InfeasibleCertified, "{}", e.name);
            }
            if !bal_ok {
                assert_eq!(both.balanced.status, SearchStatus::InfeasibleCertified, "{}", e.name);
            }
        }
    }

    #[test]
    fn cofactor_form_reproduces_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..=4 {
            let h = crate::sample::pd_metric(&mut rng, n);
            let omega = metrics::fundamental_form(&h);
            let a = h.matrix();
            let det = linalg::hermitian_pivots(a).unwrap().into_iter().fold(BigRational::from_integer(1.into()), |x, y| x * y);
            let inv_t = linalg::transpose(&linalg::inverse(a).unwrap());
            let cof: Matrix<Cq> = inv_t
                .iter()
                .map(|r| r.iter().map(|c| c.clone() * crate::scalar::cq_real(det.clone())).collect())
                .collect();
            let m = n - 1;
            let fact: i64 = (1..=m as i64).product();
            let sign = if (m * (m.saturating_sub(1)) / 2) % 2 == 0 { 1 } else { -1 };
            let expected = linear::cofactor_form(&cof).scale(&crate::scalar::cq(sign * fact, 0));
            assert_eq!(omega.wedge_pow(m), expected, "n = {n}");
        }
    }
}
