//! Exact dense linear algebra over a field (rationals or Gaussian rationals).
//!
//! Matrices are plain row-major `Vec<Vec<T>>`; sizes here never exceed a few
//! dozen rows, so there is no point in anything cleverer.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, Signed, Zero};

use crate::scalar::Cq;

pub type Matrix<T> = Vec<Vec<T>>;

pub fn identity<T: Clone + Num>(n: usize) -> Matrix<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

pub fn zeros<T: Clone + Num>(rows: usize, cols: usize) -> Matrix<T> {
    vec![vec![T::zero(); cols]; rows]
}

/// Reduced row echelon form in place. Zero rows are dropped; returns the pivot
/// column of each remaining row. Pivots are chosen left to right, the first
/// nonzero entry in the column winning.
pub fn rref<T: Clone + Num>(rows: &mut Matrix<T>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = T::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let delta = f.clone() * rows[r][j].clone();
                    rows[i][j] = rows[i][j].clone() - delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<T: Clone + Num>(rows: &[Vec<T>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : rows · x = 0}`. One vector per free column, carrying a 1 in
/// that column and zeros in the other free columns.
pub fn kernel<T: Clone + Num>(rows: &[Vec<T>], ncols: usize) -> Matrix<T> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); ncols];
            v[f] = T::one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = T::zero() - row[f].clone();
            }
            v
        })
        .collect()
}

/// Whether `v` is a linear combination of `reduced` (which must be in reduced
/// row echelon form with the given pivots).
pub fn in_row_space<T: Clone + Num>(reduced: &[Vec<T>], pivots: &[usize], v: &[T]) -> bool {
    let mut rest = v.to_vec();
    for (row, &pc) in reduced.iter().zip(pivots) {
        if rest[pc].is_zero() {
            continue;
        }
        let f = rest[pc].clone();
        for (x, y) in rest.iter_mut().zip(row) {
            *x = x.clone() - f.clone() * y.clone();
        }
    }
    rest.iter().all(Zero::is_zero)
}

pub fn inverse<T: Clone + Num>(m: &[Vec<T>]) -> Option<Matrix<T>> {
    let n = m.len();
    let mut aug: Matrix<T> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul<T: Clone + Num>(a: &[Vec<T>], b: &[Vec<T>]) -> Matrix<T> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(T::zero(), |acc, k| acc + row[k].clone() * b[k][j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Matrix<T> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn conj_matrix(a: &[Vec<Cq>]) -> Matrix<Cq> {
    a.iter().map(|row| row.iter().map(Complex::conj).collect()).collect()
}

pub fn conj_transpose(a: &[Vec<Cq>]) -> Matrix<Cq> {
    conj_matrix(&transpose(a))
}

pub fn is_hermitian(a: &[Vec<Cq>]) -> bool {
    let n = a.len();
    a.iter().all(|r| r.len() == n)
        && (0..n).all(|i| (0..n).all(|j| a[i][j] == a[j][i].conj()))
}

/// Pivots `d_1, …, d_n` of the Hermitian `LDL†` factorisation taken in the
/// natural order. `None` as soon as a pivot vanishes (the factorisation then
/// needs pivoting, which a positive-definiteness test never does).
pub fn hermitian_pivots(a: &[Vec<Cq>]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m = a.to_vec();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let d = m[k][k].re.clone();
        if d.is_zero() {
            return None;
        }
        for i in k + 1..n {
            let f = m[i][k].clone() / Complex::new(d.clone(), BigRational::zero());
            for j in k + 1..n {
                let delta = f.clone() * m[k][j].clone();
                m[i][j] = m[i][j].clone() - delta;
            }
        }
        out.push(d);
    }
    Some(out)
}

/// Exact positive-definiteness of a Hermitian matrix (all pivots positive,
/// equivalently all leading principal minors positive).
pub fn is_positive_definite(a: &[Vec<Cq>]) -> bool {
    if !is_hermitian(a) {
        return false;
    }
    let n = a.len();
    let mut m = a.to_vec();
    for k in 0..n {
        let d = m[k][k].re.clone();
        if !d.is_positive() {
            return false;
        }
        let dc = Complex::new(d, BigRational::zero());
        for i in k + 1..n {
            let f = m[i][k].clone() / dc.clone();
            for j in k + 1..n {
                let delta = f.clone() * m[k][j].clone();
                m[i][j] = m[i][j].clone() - delta;
            }
        }
    }
    true
}

/// Exact positive-semidefiniteness of a Hermitian matrix, by symmetric
/// elimination on any strictly positive diagonal entry.
pub fn is_positive_semidefinite(a: &[Vec<Cq>]) -> bool {
    if !is_hermitian(a) {
        return false;
    }
    let mut m = a.to_vec();
    loop {
        let n = m.len();
        if n == 0 {
            return true;
        }
        if m.iter().enumerate().any(|(i, r)| r[i].re.is_negative()) {
            return false;
        }
        let Some(p) = (0..n).find(|&i| m[i][i].re.is_positive()) else {
            // zero diagonal: a PSD matrix must then vanish entirely
            return m.iter().all(|r| r.iter().all(Zero::is_zero));
        };
        let dc = m[p][p].clone();
        let keep: Vec<usize> = (0..n).filter(|&i| i != p).collect();
        m = keep
            .iter()
            .map(|&i| {
                keep.iter()
                    .map(|&j| m[i][j].clone() - m[i][p].clone() * m[p][j].clone() / dc.clone())
                    .collect()
            })
            .collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cq, int, rat};

    #[test]
    fn kernel_and_rank() {
        let rows = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)]];
        assert_eq!(rank(&rows), 1);
        let k = kernel(&rows, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot = (0..3).fold(int(0), |a, j| a + rows[0][j].clone() * v[j].clone());
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = vec![vec![cq(1, 1), cq(2, 0)], vec![cq(0, -1), cq(3, 0)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
        let singular = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(inverse(&singular).is_none());
    }

    #[test]
    fn definiteness() {
        let pd = vec![vec![cq(2, 0), cq(1, 1)], vec![cq(1, -1), cq(2, 0)]];
        assert!(is_positive_definite(&pd));
        assert_eq!(hermitian_pivots(&pd).unwrap(), vec![int(2), int(1)]);
        let psd = vec![vec![cq(1, 0), cq(1, 0)], vec![cq(1, 0), cq(1, 0)]];
        assert!(!is_positive_definite(&psd));
        assert!(is_positive_semidefinite(&psd));
        let indefinite = vec![vec![cq(0, 0), cq(1, 0)], vec![cq(1, 0), cq(0, 0)]];
        assert!(!is_positive_semidefinite(&indefinite));
        let e33 = vec![
            vec![cq(0, 0), cq(0, 0)],
            vec![cq(0, 0), Complex::new(rat(1, 3), int(0))],
        ];
        assert!(is_positive_semidefinite(&e33));
        assert!(!is_positive_definite(&e33));
    }

    #[test]
    fn row_space_membership() {
        let mut rows = vec![vec![int(1), int(1), int(0)], vec![int(0), int(1), int(1)]];
        let piv = rref(&mut rows);
        assert!(in_row_space(&rows, &piv, &[int(1), int(2), int(1)]));
        assert!(!in_row_space(&rows, &piv, &[int(1), int(0), int(0)]));
    }
}
