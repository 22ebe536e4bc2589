//! Floating-point search for positive (semi)definite matrices in a linear
//! subspace of Hermitian matrices.
//!
//! The subspace is given by a basis; it is orthonormalised in the Frobenius
//! inner product and the search runs in those coordinates on the affine slice
//! `tr X = target`. The objective `λ_min(X)` is concave, so projected
//! supergradient ascent with a diminishing step converges to its maximum.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

pub type HMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone)]
pub struct ConeSpace {
    n: usize,
    q: Vec<HMatrix>,
    t: Vec<f64>,
}

fn frobenius(a: &HMatrix, b: &HMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

fn trace(a: &HMatrix) -> f64 {
    (0..a.nrows()).map(|i| a[(i, i)].re).sum()
}

/// Smallest eigenvalue and a unit eigenvector.
pub fn min_eigenpair(m: &HMatrix) -> (f64, DVector<Complex64>) {
    let eig = m.clone().symmetric_eigen();
    let (idx, val) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, v)| if *v < best.1 { (i, *v) } else { best });
    (val, eig.eigenvectors.column(idx).into_owned())
}

pub fn min_eigenvalue(m: &HMatrix) -> f64 {
    m.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

impl ConeSpace {
    /// Orthonormalises `basis` (Hermitian matrices); near-dependent members
    /// are dropped.
    pub fn new(n: usize, basis: &[HMatrix]) -> Self {
        let mut q: Vec<HMatrix> = Vec::new();
        for b in basis {
            let mut v = b.clone();
            for _ in 0..2 {
                for u in &q {
                    let c = frobenius(u, &v);
                    v -= u * Complex64::new(c, 0.0);
                }
            }
            let norm = frobenius(&v, &v).sqrt();
            if norm > 1e-10 {
                q.push(v / Complex64::new(norm, 0.0));
            }
        }
        let t = q.iter().map(trace).collect();
        ConeSpace { n, q, t }
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    /// Whether every member of the subspace has (numerically) zero trace.
    pub fn traceless(&self) -> bool {
        self.t.iter().map(|x| x * x).sum::<f64>().sqrt() < 1e-12
    }

    pub fn coords(&self, m: &HMatrix) -> Vec<f64> {
        self.q.iter().map(|u| frobenius(u, m)).collect()
    }

    pub fn matrix(&self, z: &[f64]) -> HMatrix {
        let mut m = HMatrix::zeros(self.n, self.n);
        for (u, c) in self.q.iter().zip(z) {
            m += u * Complex64::new(*c, 0.0);
        }
        m
    }

    fn t_norm_sq(&self) -> f64 {
        self.t.iter().map(|x| x * x).sum()
    }

    /// Moves `z` onto `t·z = target` along `t`.
    fn onto_slice(&self, z: &mut [f64], target: f64) {
        let tn = self.t_norm_sq();
        let gap = target - z.iter().zip(&self.t).map(|(a, b)| a * b).sum::<f64>();
        for (zi, ti) in z.iter_mut().zip(&self.t) {
            *zi += gap / tn * ti;
        }
    }

    /// Removes the component of `g` along `t`.
    fn tangent(&self, g: &mut [f64]) {
        let tn = self.t_norm_sq();
        let dot: f64 = g.iter().zip(&self.t).map(|(a, b)| a * b).sum();
        for (gi, ti) in g.iter_mut().zip(&self.t) {
            *gi -= dot / tn * ti;
        }
    }

    /// Projected supergradient ascent of `λ_min` from `start` (projected into
    /// the subspace and onto the trace slice). Stops early once the value
    /// exceeds `stop_at`.
    pub fn ascend(&self, start: &HMatrix, target: f64, max_iter: usize, stop_at: f64) -> Ascent {
        let mut z = self.coords(start);
        self.onto_slice(&mut z, target);
        let step0 = 0.5 * target / self.n as f64;
        let mut best = Ascent { value: f64::NEG_INFINITY, point: self.matrix(&z), iterations: 0 };
        for it in 0..=max_iter {
            let x = self.matrix(&z);
            let (lam, v) = min_eigenpair(&x);
            if lam > best.value {
                best = Ascent { value: lam, point: x, iterations: it };
            }
            if lam > stop_at || it == max_iter {
                break;
            }
            let mut g: Vec<f64> = self.q.iter().map(|u| (v.adjoint() * u * &v)[(0, 0)].re).collect();
            self.tangent(&mut g);
            let gn = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if gn < 1e-14 {
                break;
            }
            let eta = step0 / ((it + 1) as f64).sqrt();
            for (zi, gi) in z.iter_mut().zip(&g) {
                *zi += eta * gi / gn;
            }
        }
        best
    }

    /// Runs [`ConeSpace::ascend`] from every start concurrently; results come
    /// back in start order.
    pub fn multistart(&self, starts: &[HMatrix], target: f64, max_iter: usize, stop_at: f64) -> Vec<Ascent> {
        starts.par_iter().map(|s| self.ascend(s, target, max_iter, stop_at)).collect()
    }

    /// Alternating projections between the positive semidefinite cone and the
    /// subspace, renormalised to `tr = target`. Sharpens a nearly
    /// semidefinite point so that rational rounding can land on the cone.
    pub fn polish_semidefinite(&self, start: &HMatrix, target: f64, iters: usize) -> HMatrix {
        let mut x = start.clone();
        for _ in 0..iters {
            let eig = x.clone().symmetric_eigen();
            let clipped = DVector::from_iterator(
                self.n,
                eig.eigenvalues.iter().map(|&l| Complex64::new(l.max(0.0), 0.0)),
            );
            let psd = &eig.eigenvectors * DMatrix::from_diagonal(&clipped) * eig.eigenvectors.adjoint();
            let mut z = self.coords(&psd);
            let tz: f64 = z.iter().zip(&self.t).map(|(a, b)| a * b).sum();
            if tz.abs() < 1e-14 {
                break;
            }
            for zi in z.iter_mut() {
                *zi *= target / tz;
            }
            x = self.matrix(&z);
        }
        x
    }
}

#[derive(Debug, Clone)]
pub struct Ascent {
    pub value: f64,
    pub point: HMatrix,
    pub iterations: usize,
}
