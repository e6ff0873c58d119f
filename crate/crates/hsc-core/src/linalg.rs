//! Small dense complex linear algebra: matrices, the matrix exponential,
//! Krylov-free exponential actions of sparse generators, and a Hermitian
//! eigensolver.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

#[allow(unused_imports)]
use num_traits::Float;

use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    /// All-zero `rows × cols` matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    /// Identity of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix entry by entry.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Wraps row-major data.
    ///
    /// # Panics
    /// If `data.len() != rows * cols`.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Self { rows, cols, data }
    }

    /// Diagonal matrix.
    pub fn diag(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    /// Matrix product.
    ///
    /// # Panics
    /// On incompatible shapes.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let brow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    ///
    /// # Panics
    /// On incompatible shapes.
    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "mul_vec shape");
        (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Entrywise sum.
    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    /// Entrywise difference.
    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(-ONE))
    }

    /// Scalar multiple.
    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (r, c) = (self.rows * rhs.rows, self.cols * rhs.cols);
        Self::from_fn(r, c, |i, j| {
            self[(i / rhs.rows, j / rhs.cols)] * rhs[(i % rhs.rows, j % rhs.cols)]
        })
    }

    /// Trace.
    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self[(r, c)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Top-left `rows × cols` block.
    pub fn crop(&self, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |r, c| self[(r, c)])
    }

    /// Matrix exponential by scaling and squaring with a Taylor kernel.
    ///
    /// # Panics
    /// If the matrix is not square.
    pub fn expm(&self) -> Self {
        assert_eq!(self.rows, self.cols, "expm needs a square matrix");
        let norm = self.norm_one();
        let mut s = 0u32;
        if norm > 0.5 {
            s = (norm / 0.5).log2().ceil() as u32;
        }
        let a = self.scale(C64::new(0.5f64.powi(s as i32), 0.0));
        let mut result = Self::identity(self.rows);
        let mut term = Self::identity(self.rows);
        for k in 1..40 {
            term = term.matmul(&a).scale(C64::new(1.0 / k as f64, 0.0));
            result = result.add(&term);
            if term.max_abs() < 1e-18 * result.max_abs() {
                break;
            }
        }
        for _ in 0..s {
            result = result.matmul(&result);
        }
        result
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Sparse square matrix stored as coordinate triplets.
///
/// Generators of displacements and squeezers are banded, so applying their
/// exponential to a vector is far cheaper than forming the dense exponential.
#[derive(Debug, Clone, Default)]
pub struct Sparse {
    dim: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl Sparse {
    /// Empty `dim × dim` matrix.
    pub fn new(dim: usize) -> Self {
        Self { dim, entries: Vec::new() }
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `value` at `(row, col)`.
    pub fn push(&mut self, row: usize, col: usize, value: C64) {
        if value != ZERO {
            self.entries.push((row, col, value));
        }
    }

    /// Sum of two sparse matrices of equal size.
    pub fn plus(mut self, rhs: &Sparse) -> Sparse {
        assert_eq!(self.dim, rhs.dim, "sparse dims");
        self.entries.extend_from_slice(&rhs.entries);
        self
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![ZERO; self.dim];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }

    /// Upper bound on the induced 1-norm.
    pub fn norm_one(&self) -> f64 {
        let mut cols = vec![0.0; self.dim];
        for &(_, c, v) in &self.entries {
            cols[c] += v.norm();
        }
        cols.into_iter().fold(0.0, f64::max)
    }

    /// Dense copy.
    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    /// Computes `exp(A) x` by splitting into steps of norm ≤ 1 and summing
    /// the Taylor series of each step to machine precision.
    pub fn expm_apply(&self, x: &[C64]) -> Vec<C64> {
        let norm = self.norm_one();
        let steps = norm.ceil().max(1.0) as usize;
        let h = C64::new(1.0 / steps as f64, 0.0);
        let mut v = x.to_vec();
        for _ in 0..steps {
            let mut term = v.clone();
            let mut acc = v.clone();
            let scale = vec_norm(&v).max(f64::MIN_POSITIVE);
            for k in 1..60 {
                term = self.apply(&term);
                let f = h / k as f64;
                for t in term.iter_mut() {
                    *t *= f;
                }
                for (a, t) in acc.iter_mut().zip(&term) {
                    *a += t;
                }
                if vec_norm(&term) < 1e-18 * scale {
                    break;
                }
            }
            v = acc;
        }
        v
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨a|b⟩`, conjugating the left argument.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Returns ascending eigenvalues and the unitary whose columns are the
/// matching eigenvectors. The complex problem `A + iB` is embedded in the
/// real symmetric matrix `[[A, -B], [B, A]]`, diagonalized by cyclic Jacobi
/// sweeps, and every eigenvalue appears twice there; one vector per pair is
/// kept by Gram-Schmidt against those already chosen.
pub fn eigh(h: &Matrix) -> (Vec<f64>, Matrix) {
    let n = h.rows();
    assert_eq!(n, h.cols(), "eigh needs a square matrix");
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for r in 0..n {
        for c in 0..n {
            let z = (h[(r, c)] + h[(c, r)].conj()) * 0.5;
            a[r * m + c] = z.re;
            a[(r + n) * m + c + n] = z.re;
            a[r * m + c + n] = -z.im;
            a[(r + n) * m + c] = z.im;
        }
    }
    let mut v = vec![0.0; m * m];
    for i in 0..m {
        v[i * m + i] = 1.0;
    }
    jacobi(&mut a, &mut v, m);

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| a[i * m + i].partial_cmp(&a[j * m + j]).unwrap_or(core::cmp::Ordering::Equal));
    let mut vals = Vec::with_capacity(n);
    let mut vecs: Vec<Vec<C64>> = Vec::with_capacity(n);
    for &k in &order {
        if vecs.len() == n {
            break;
        }
        let mut z: Vec<C64> = (0..n).map(|r| C64::new(v[r * m + k], v[(r + n) * m + k])).collect();
        for u in &vecs {
            let p = inner(u, &z);
            for (zi, ui) in z.iter_mut().zip(u) {
                *zi -= p * ui;
            }
        }
        let nz = vec_norm(&z);
        if nz < 0.5 {
            continue;
        }
        for zi in z.iter_mut() {
            *zi /= nz;
        }
        vals.push(a[k * m + k]);
        vecs.push(z);
    }
    let u = Matrix::from_fn(n, n, |r, c| vecs[c][r]);
    (vals, u)
}

fn jacobi(a: &mut [f64], v: &mut [f64], m: usize) {
    for _sweep in 0..100 {
        let mut off = 0.0;
        let mut total = 0.0;
        for i in 0..m {
            for j in 0..m {
                let x = a[i * m + j] * a[i * m + j];
                total += x;
                if i != j {
                    off += x;
                }
            }
        }
        if off <= 1e-30 * total.max(f64::MIN_POSITIVE) {
            return;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let apq = a[p * m + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
                for k in 0..m {
                    let vkp = v[k * m + p];
                    let vkq = v[k * m + q];
                    v[k * m + p] = c * vkp - s * vkq;
                    v[k * m + q] = s * vkp + c * vkq;
                }
            }
        }
    }
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_map(h: &Matrix, f: impl Fn(f64) -> f64) -> Matrix {
    let (vals, u) = eigh(h);
    let d: Vec<C64> = vals.iter().map(|&x| C64::new(f(x), 0.0)).collect();
    u.matmul(&Matrix::diag(&d)).matmul(&u.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Matrix, b: &Matrix) -> f64 {
        a.sub(b).max_abs()
    }

    #[test]
    fn expm_of_rotation_generator() {
        let mut g = Matrix::zeros(2, 2);
        g[(0, 1)] = C64::new(-1.2, 0.0);
        g[(1, 0)] = C64::new(1.2, 0.0);
        let e = g.expm();
        let (c, s) = (1.2f64.cos(), 1.2f64.sin());
        let want = Matrix::from_rows(2, 2, vec![c.into(), (-s).into(), s.into(), c.into()]);
        assert!(close(&e, &want) < 1e-14);
    }

    #[test]
    fn expm_of_large_diagonal() {
        let d = Matrix::diag(&[C64::new(3.0, 0.0), C64::new(-2.0, 1.0)]);
        let e = d.expm();
        assert!((e[(0, 0)] - C64::new(3.0f64.exp(), 0.0)).norm() < 1e-12);
        assert!((e[(1, 1)] - C64::new(-2.0, 1.0).exp()).norm() < 1e-14);
    }

    #[test]
    fn sparse_action_matches_dense_exponential() {
        let mut s = Sparse::new(6);
        for i in 0..5 {
            let x = C64::new(0.3 * (i as f64 + 1.0).sqrt(), 0.1);
            s.push(i + 1, i, x);
            s.push(i, i + 1, -x.conj());
        }
        let v: Vec<C64> = (0..6).map(|i| C64::new(i as f64, 1.0)).collect();
        let a = s.expm_apply(&v);
        let b = s.to_dense().expm().mul_vec(&v);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn eigh_reconstructs_hermitian() {
        let h = Matrix::from_rows(
            3,
            3,
            vec![
                C64::new(2.0, 0.0),
                C64::new(0.5, 0.3),
                C64::new(0.0, -1.0),
                C64::new(0.5, -0.3),
                C64::new(1.0, 0.0),
                C64::new(0.2, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.2, 0.0),
                C64::new(-1.0, 0.0),
            ],
        );
        let (vals, u) = eigh(&h);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let d: Vec<C64> = vals.iter().map(|&x| x.into()).collect();
        let back = u.matmul(&Matrix::diag(&d)).matmul(&u.adjoint());
        assert!(close(&back, &h) < 1e-12);
        assert!(close(&u.adjoint().matmul(&u), &Matrix::identity(3)) < 1e-12);
    }

    #[test]
    fn eigh_handles_degenerate_spectrum() {
        let h = Matrix::identity(4).scale(C64::new(0.25, 0.0));
        let (vals, u) = eigh(&h);
        assert!(vals.iter().all(|v| (v - 0.25).abs() < 1e-14));
        assert!(close(&u.adjoint().matmul(&u), &Matrix::identity(4)) < 1e-12);
    }
}
