//! Small dense complex linear algebra.
//!
//! Every space in this crate has dimension at most 16, so matrices are dense,
//! row-major and allocated on the heap. Hermitian eigenproblems go through the
//! real symmetric embedding `[[Re A, -Im A], [Im A, Re A]]` and a cyclic
//! Jacobi sweep, which is exact to roundoff at these sizes.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Shorthand for a real complex number.
#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Row-major construction; panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Self { rows, cols, data }
    }

    pub fn from_rows<const C: usize>(rows: &[[Complex64; C]]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * C);
        for r in rows {
            data.extend_from_slice(r);
        }
        Self { rows: rows.len(), cols: C, data }
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// Outer product |a⟩⟨b|.
    pub fn outer(a: &[Complex64], b: &[Complex64]) -> Self {
        Self::from_fn(a.len(), b.len(), |r, c| a[r] * b[c].conj())
    }

    /// Column vector |a⟩ as an n×1 matrix.
    pub fn column(a: &[Complex64]) -> Self {
        Self::from_vec(a.len(), 1, a.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |r, c| {
            self[(r / other.rows, c / other.cols)] * other[(r % other.rows, c % other.cols)]
        })
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension");
        (0..self.rows).map(|r| (0..self.cols).map(|c| self[(r, c)] * v[c]).sum()).collect()
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|x| x.norm_sqr()).sum())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (r..self.cols).all(|c| (self[(r, c)] - self[(c, r)].conj()).norm() <= tol))
    }

    /// `self` is unitary within `tol` (entry-wise on U†U - 1).
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && (&self.adjoint() * self).max_abs_diff(&Self::identity(self.rows)) <= tol
    }

    /// Hermitian part (A + A†)/2, used to scrub roundoff asymmetry.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| (self[(r, c)] + self[(c, r)].conj()) * 0.5)
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.rows;
        let (vals, _) = jacobi_eigen(embed(self));
        let mut vals = vals;
        vals.sort_by(f64::total_cmp);
        // The embedding doubles every eigenvalue.
        (0..n).map(|i| 0.5 * (vals[2 * i] + vals[2 * i + 1])).collect()
    }

    /// Applies a real function to the spectrum of a Hermitian matrix.
    pub fn hermitian_map(&self, f: impl Fn(f64) -> f64) -> Self {
        let n = self.rows;
        let m = 2 * n;
        let (vals, vecs) = jacobi_eigen(embed(self));
        let fv: Vec<f64> = vals.iter().map(|&v| f(v)).collect();
        let mut real = vec![0.0; m * m];
        for r in 0..m {
            for c in 0..m {
                real[r * m + c] = (0..m).map(|k| vecs[r * m + k] * fv[k] * vecs[c * m + k]).sum();
            }
        }
        Self::from_fn(n, n, |r, c| Complex64::new(real[r * m + c], real[(r + n) * m + c]))
    }

    /// Principal square root of a positive semidefinite Hermitian matrix;
    /// negative roundoff eigenvalues are clamped to zero.
    pub fn sqrt_psd(&self) -> Self {
        self.hermitian_map(|v| libm::sqrt(v.max(0.0)))
    }

    /// Moore-Penrose pseudo-inverse, discarding singular values below
    /// `rel_tol` times the largest.
    pub fn pseudo_inverse(&self, rel_tol: f64) -> Self {
        let gram = &self.adjoint() * self;
        let top = gram.hermitian_eigenvalues().last().copied().unwrap_or(0.0);
        let cut = rel_tol * rel_tol * top;
        let inv = gram.hermitian_map(|v| if v > cut && v > 0.0 { 1.0 / v } else { 0.0 });
        &inv * &self.adjoint()
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        let gram = &self.adjoint() * self;
        let mut s: Vec<f64> = gram.hermitian_eigenvalues().into_iter().map(|v| libm::sqrt(v.max(0.0))).collect();
        s.reverse();
        s
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs[(k, c)];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// ⟨a|b⟩.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

fn embed(a: &CMatrix) -> (usize, Vec<f64>) {
    assert!(a.is_square(), "Hermitian routines need a square matrix");
    let n = a.rows;
    let m = 2 * n;
    let mut out = vec![0.0; m * m];
    for r in 0..n {
        for c in 0..n {
            // Symmetrize so roundoff asymmetry never reaches the solver.
            let z = (a[(r, c)] + a[(c, r)].conj()) * 0.5;
            out[r * m + c] = z.re;
            out[(r + n) * m + c + n] = z.re;
            out[(r + n) * m + c] = z.im;
            out[r * m + c + n] = -z.im;
        }
    }
    (m, out)
}

/// Cyclic Jacobi on a real symmetric matrix. Returns eigenvalues and the
/// row-major eigenvector matrix whose columns are the eigenvectors.
fn jacobi_eigen((n, mut a): (usize, Vec<f64>)) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum();
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v)
}

/// Index bookkeeping for operators acting on a subset of tensor factors.
///
/// Factor 0 is the most significant digit of the flat index.
#[derive(Debug, Clone)]
pub struct LocalIndex {
    /// Flat index -> (target sub-index, rest sub-index).
    split: Vec<(usize, usize)>,
    /// (target, rest) -> flat index, row-major in target.
    join: Vec<usize>,
    target_dim: usize,
    rest_dim: usize,
}

impl LocalIndex {
    pub fn new(dims: &[usize], targets: &[usize]) -> Self {
        let total: usize = dims.iter().product();
        let target_dim: usize = targets.iter().map(|&t| dims[t]).product();
        let rest: Vec<usize> = (0..dims.len()).filter(|i| !targets.contains(i)).collect();
        let rest_dim: usize = rest.iter().map(|&t| dims[t]).product();
        let mut split = Vec::with_capacity(total);
        let mut join = vec![0; total];
        let mut digits = vec![0usize; dims.len()];
        for flat in 0..total {
            let mut rem = flat;
            for k in (0..dims.len()).rev() {
                digits[k] = rem % dims[k];
                rem /= dims[k];
            }
            let t = targets.iter().fold(0, |acc, &k| acc * dims[k] + digits[k]);
            let r = rest.iter().fold(0, |acc, &k| acc * dims[k] + digits[k]);
            split.push((t, r));
            join[t * rest_dim + r] = flat;
        }
        Self { split, join, target_dim, rest_dim }
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn rest_dim(&self) -> usize {
        self.rest_dim
    }

    /// Flat index of (target sub-index, rest sub-index).
    #[inline]
    pub fn flat(&self, t: usize, r: usize) -> usize {
        self.join[t * self.rest_dim + r]
    }

    /// (op ⊗ 1) |ψ⟩ for a square `op` on the targets.
    pub fn apply_vec(&self, op: &CMatrix, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; psi.len()];
        for (i, &(t, r)) in self.split.iter().enumerate() {
            out[i] = (0..self.target_dim).map(|tp| op[(t, tp)] * psi[self.flat(tp, r)]).sum();
        }
        out
    }

    /// (op ⊗ 1) ρ (op ⊗ 1)†.
    pub fn conjugate(&self, op: &CMatrix, rho: &CMatrix) -> CMatrix {
        let d = rho.rows();
        let td = self.target_dim;
        // Left multiply.
        let mut left = CMatrix::zeros(d, d);
        for i in 0..d {
            let (t, r) = self.split[i];
            for tp in 0..td {
                let a = op[(t, tp)];
                if a == ZERO {
                    continue;
                }
                let src = self.flat(tp, r);
                for j in 0..d {
                    left[(i, j)] += a * rho[(src, j)];
                }
            }
        }
        // Right multiply by op†.
        let mut out = CMatrix::zeros(d, d);
        for j in 0..d {
            let (t, r) = self.split[j];
            for tp in 0..td {
                let a = op[(t, tp)].conj();
                if a == ZERO {
                    continue;
                }
                let src = self.flat(tp, r);
                for i in 0..d {
                    out[(i, j)] += left[(i, src)] * a;
                }
            }
        }
        out
    }

    /// Σ_k K_k ρ K_k† with the Kraus operators acting on the targets.
    pub fn kraus_sum(&self, kraus: &[CMatrix], rho: &CMatrix) -> CMatrix {
        let mut acc = CMatrix::zeros(rho.rows(), rho.cols());
        for k in kraus {
            acc = &acc + &self.conjugate(k, rho);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigenvalues_of_pauli_y() {
        let y = CMatrix::from_rows(&[[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]]);
        let ev = y.hermitian_eigenvalues();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sqrt_squares_back() {
        let a = CMatrix::from_rows(&[[c(2.0, 0.0), c(0.5, 0.3)], [c(0.5, -0.3), c(1.0, 0.0)]]);
        let s = a.sqrt_psd();
        assert!((&s * &s).max_abs_diff(&a) < 1e-13);
    }

    #[test]
    fn pseudo_inverse_of_rank_one() {
        let a = CMatrix::from_rows(&[[ONE, ZERO], [ZERO, ZERO]]);
        let p = a.pseudo_inverse(1e-9);
        assert!(p.max_abs_diff(&a) < 1e-14);
    }

    #[test]
    fn local_conjugate_matches_kron() {
        let x = CMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]]);
        let rho = CMatrix::from_fn(4, 4, |r, col| c((r * 4 + col) as f64, (r as f64) - (col as f64)));
        let full = x.kron(&CMatrix::identity(2));
        let expect = &(&full * &rho) * &full.adjoint();
        let idx = LocalIndex::new(&[2, 2], &[0]);
        assert!(idx.conjugate(&x, &rho).max_abs_diff(&expect) < 1e-12);
        let full1 = CMatrix::identity(2).kron(&x);
        let expect1 = &(&full1 * &rho) * &full1.adjoint();
        let idx1 = LocalIndex::new(&[2, 2], &[1]);
        assert!(idx1.conjugate(&x, &rho).max_abs_diff(&expect1) < 1e-12);
    }
}
