//! Exact linear constraint systems over the real parameters of a Hermitian
//! matrix.
//!
//! A Hermitian `n×n` matrix has `n²` real parameters, ordered row by row over
//! the upper triangle: the diagonal entry `(i, i)`, then `Re` and `Im` of each
//! `(i, j)` with `j > i`.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::ComplexNilAlgebra;
use crate::forms::{Form, Mono};
use crate::linalg::{self, Matrix};
use crate::metrics::{self, HermitianMetric};
use crate::scalar::{format_rational, rat_to_f64, Cq};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    Diag(usize),
    Re(usize, usize),
    Im(usize, usize),
}

pub fn params(n: usize) -> Vec<Param> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        out.push(Param::Diag(i));
        for j in i + 1..n {
            out.push(Param::Re(i, j));
            out.push(Param::Im(i, j));
        }
    }
    out
}

pub fn diag_index(n: usize, i: usize) -> usize {
    params(n).iter().position(|p| *p == Param::Diag(i)).expect("diagonal parameter")
}

/// Which symmetric matrix the parameters describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Variable {
    /// The metric coefficients `a_{ij̄}`.
    Metric,
    /// The cofactor matrix of `a`, in which `ω^{n-1}` is linear.
    Cofactor,
}

impl Variable {
    fn symbol(self) -> &'static str {
        match self {
            Variable::Metric => "a",
            Variable::Cofactor => "c",
        }
    }
}

fn entry_label(symbol: &str, i: usize, j: usize) -> String {
    format!("{symbol}_{{{}{}\u{304}}}", i + 1, j + 1)
}

pub fn param_label(symbol: &str, p: Param) -> String {
    match p {
        Param::Diag(i) => entry_label(symbol, i, i),
        Param::Re(i, j) => format!("Re {}", entry_label(symbol, i, j)),
        Param::Im(i, j) => format!("Im {}", entry_label(symbol, i, j)),
    }
}

/// Hermitian matrix with the given parameters. `half_off_diagonal` builds the
/// matrix whose trace pairing reproduces the parameters as a functional:
/// `tr(W H(x)) = Σ_p r_p x_p` for `W = matrix(r, true)`.
pub fn matrix_from_params(n: usize, x: &[BigRational], half_off_diagonal: bool) -> Matrix<Cq> {
    let mut m = linalg::zeros(n, n);
    let half = if half_off_diagonal { BigRational::new(1.into(), 2.into()) } else { BigRational::one() };
    for (p, v) in params(n).into_iter().zip(x) {
        match p {
            Param::Diag(i) => m[i][i] = Complex::new(v.clone(), BigRational::zero()),
            Param::Re(i, j) => {
                m[i][j].re = v * &half;
                m[j][i].re = v * &half;
            }
            Param::Im(i, j) => {
                m[i][j].im = v * &half;
                m[j][i].im = -(v * &half);
            }
        }
    }
    m
}

pub fn params_from_matrix(m: &[Vec<Cq>]) -> Vec<BigRational> {
    params(m.len())
        .into_iter()
        .map(|p| match p {
            Param::Diag(i) => m[i][i].re.clone(),
            Param::Re(i, j) => m[i][j].re.clone(),
            Param::Im(i, j) => m[i][j].im.clone(),
        })
        .collect()
}

pub fn float_matrix_from_params(n: usize, x: &[f64], half_off_diagonal: bool) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(n, n);
    let half = if half_off_diagonal { 0.5 } else { 1.0 };
    for (p, v) in params(n).into_iter().zip(x) {
        match p {
            Param::Diag(i) => m[(i, i)] = Complex64::new(*v, 0.0),
            Param::Re(i, j) => {
                m[(i, j)].re = v * half;
                m[(j, i)].re = v * half;
            }
            Param::Im(i, j) => {
                m[(i, j)].im = v * half;
                m[(j, i)].im = -v * half;
            }
        }
    }
    m
}

pub fn float_params_from_matrix(m: &DMatrix<Complex64>, half_off_diagonal: bool) -> Vec<f64> {
    let scale = if half_off_diagonal { 2.0 } else { 1.0 };
    params(m.nrows())
        .into_iter()
        .map(|p| match p {
            Param::Diag(i) => m[(i, i)].re,
            Param::Re(i, j) => m[(i, j)].re * scale,
            Param::Im(i, j) => m[(i, j)].im * scale,
        })
        .collect()
}

/// `Σ_{p,q} (-1)^{p+q} c_{pq̄} α^{p̂}∧ᾱ^{q̂}` where `p̂` omits index `p`.
/// For a metric `a` with cofactor matrix `C`, `ω^{n-1}` is
/// `(-1)^{m(m-1)/2} m!` times this form at `C`, `m = n - 1`.
pub fn cofactor_form(c: &[Vec<Cq>]) -> Form<Cq> {
    let n = c.len();
    let mut out = Form::zero(n);
    for p in 0..n {
        let hp: Vec<usize> = (1..=n).filter(|&i| i != p + 1).collect();
        for q in 0..n {
            if c[p][q].is_zero() {
                continue;
            }
            let hq: Vec<usize> = (1..=n).filter(|&i| i != q + 1).collect();
            let v = if (p + q) % 2 == 0 { c[p][q].clone() } else { -c[p][q].clone() };
            out.add_term(Mono::from_indices(&hp, &hq), v);
        }
    }
    out
}

/// Metric whose cofactor matrix is a positive multiple of `c`: `(c^T)^{-1}`.
pub fn metric_from_cofactor(c: &[Vec<Cq>]) -> Option<Matrix<Cq>> {
    linalg::inverse(&linalg::transpose(c))
}

/// Homogeneous exact system `rows · x = 0` in reduced row echelon form.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub n: usize,
    pub variable: Variable,
    rows: Matrix<BigRational>,
    pivots: Vec<usize>,
}

impl LinearSystem {
    /// Builds the system `F(H(x)) = 0` for a form-valued map `F` that is
    /// linear in the matrix, by evaluating it on each parameter direction.
    pub fn from_linear_map(n: usize, variable: Variable, f: impl Fn(&Matrix<Cq>) -> Form<Cq>) -> Self {
        let ps = params(n);
        let mut columns: Vec<Form<Cq>> = Vec::with_capacity(ps.len());
        for idx in 0..ps.len() {
            let mut x = vec![BigRational::zero(); ps.len()];
            x[idx] = BigRational::one();
            columns.push(f(&matrix_from_params(n, &x, false)));
        }
        let monos: std::collections::BTreeSet<Mono> =
            columns.iter().flat_map(|c| c.terms().map(|(m, _)| *m)).collect();
        let mut rows = Vec::with_capacity(2 * monos.len());
        for m in monos {
            let re: Vec<BigRational> = columns.iter().map(|c| c.coeff_of(m).re).collect();
            let im: Vec<BigRational> = columns.iter().map(|c| c.coeff_of(m).im).collect();
            rows.push(re);
            rows.push(im);
        }
        let pivots = linalg::rref(&mut rows);
        LinearSystem { n, variable, rows, pivots }
    }

    pub fn num_params(&self) -> usize {
        self.n * self.n
    }

    pub fn rows(&self) -> &Matrix<BigRational> {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// No effective constraint.
    pub fn is_trivial(&self) -> bool {
        self.rows.is_empty()
    }

    /// Basis of solutions; each vector is 1 on its own free parameter and 0 on
    /// the other free parameters.
    pub fn null_basis(&self) -> Matrix<BigRational> {
        linalg::kernel(&self.rows, self.num_params())
    }

    pub fn free_params(&self) -> Vec<usize> {
        (0..self.num_params()).filter(|c| !self.pivots.contains(c)).collect()
    }

    pub fn satisfied_by_params(&self, x: &[BigRational]) -> bool {
        self.rows
            .iter()
            .all(|r| r.iter().zip(x).fold(BigRational::zero(), |acc, (a, b)| acc + a * b).is_zero())
    }

    pub fn satisfied_by_matrix(&self, m: &[Vec<Cq>]) -> bool {
        self.satisfied_by_params(&params_from_matrix(m))
    }

    /// Human-readable equations, one per row.
    pub fn equations(&self) -> Vec<String> {
        let ps = params(self.n);
        let symbol = self.variable.symbol();
        self.rows
            .iter()
            .map(|row| {
                let mut s = String::new();
                for (p, c) in ps.iter().zip(row) {
                    if c.is_zero() {
                        continue;
                    }
                    let neg = c.is_negative();
                    let mag = c.abs();
                    if s.is_empty() {
                        if neg {
                            s.push('-');
                        }
                    } else {
                        s.push_str(if neg { " - " } else { " + " });
                    }
                    if !mag.is_one() {
                        let _ = write!(s, "{}·", format_rational(&mag));
                    }
                    s.push_str(&param_label(symbol, *p));
                }
                s.push_str(" = 0");
                s
            })
            .collect()
    }

    pub fn to_float_rows(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.iter().map(rat_to_f64).collect()).collect()
    }
}

/// Equations on `a_{ij̄}` equivalent to `∂∂̄ω = 0`.
pub fn skt_linear_system(algebra: &ComplexNilAlgebra) -> LinearSystem {
    let d = algebra.differential();
    LinearSystem::from_linear_map(algebra.n(), Variable::Metric, |a| {
        metrics::ddbar(&d, &metrics::form_of_matrix(a))
    })
}

/// Equations equivalent to balancedness. For `n ≥ 2` the unknown is the
/// cofactor matrix (`d(ω^{n-1})` is linear in it); for `n = 1` it is the
/// metric itself and the condition is `dω = 0`.
pub fn balanced_linear_system(algebra: &ComplexNilAlgebra) -> LinearSystem {
    let d = algebra.differential();
    let n = algebra.n();
    if n == 1 {
        LinearSystem::from_linear_map(n, Variable::Metric, |a| d.apply(&metrics::form_of_matrix(a)))
    } else {
        LinearSystem::from_linear_map(n, Variable::Cofactor, |c| d.apply(&cofactor_form(c)))
    }
}

/// Turns a positive-definite solution of a system into a metric of the target
/// class.
pub fn metric_from_solution(system: &LinearSystem, m: Matrix<Cq>) -> Option<HermitianMetric> {
    let a = match system.variable {
        Variable::Metric => m,
        Variable::Cofactor => metric_from_cofactor(&m)?,
    };
    HermitianMetric::new(a).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cq;

    #[test]
    fn params_round_trip() {
        let m = vec![
            vec![cq(2, 0), cq(1, 3), cq(0, -1)],
            vec![cq(1, -3), cq(5, 0), cq(4, 4)],
            vec![cq(0, 1), cq(4, -4), cq(7, 0)],
        ];
        let x = params_from_matrix(&m);
        assert_eq!(x.len(), 9);
        assert_eq!(matrix_from_params(3, &x, false), m);
        let f = float_matrix_from_params(3, &x.iter().map(rat_to_f64).collect::<Vec<_>>(), true);
        let back = float_params_from_matrix(&f, true);
        assert!(back.iter().zip(&x).all(|(a, b)| (a - rat_to_f64(b)).abs() < 1e-12));
    }

    #[test]
    fn trace_pairing_matches_functional() {
        // tr(W(r) H(x)) = r · x
        let r = [cq(1, 0), cq(2, 1), cq(1, 0)];
        let x = [cq(3, 0), cq(-1, 2), cq(2, 0)];
        let rp = params_from_matrix(&[vec![r[0].clone(), r[1].clone()], vec![r[1].conj(), r[2].clone()]]);
        let xp = params_from_matrix(&[vec![x[0].clone(), x[1].clone()], vec![x[1].conj(), x[2].clone()]]);
        let w = matrix_from_params(2, &rp, true);
        let h = matrix_from_params(2, &xp, false);
        let prod = linalg::mat_mul(&w, &h);
        let tr = prod[0][0].clone() + prod[1][1].clone();
        let dot = rp.iter().zip(&xp).fold(BigRational::zero(), |acc, (a, b)| acc + a * b);
        assert_eq!(tr, Complex::new(dot, BigRational::zero()));
    }

    #[test]
    fn iwasawa_system_forces_a33() {
        let alg = crate::catalog::by_name("iwasawa").unwrap().algebra;
        let sys = skt_linear_system(&alg);
        assert_eq!(sys.equations(), vec!["a_{33\u{304}} = 0".to_string()]);
        let kt = crate::catalog::by_name("kodaira-thurston").unwrap().algebra;
        assert!(skt_linear_system(&kt).is_trivial());
        let torus = crate::catalog::by_name("torus").unwrap().algebra;
        assert!(skt_linear_system(&torus).is_trivial());
        assert!(balanced_linear_system(&torus).is_trivial());
    }
}
