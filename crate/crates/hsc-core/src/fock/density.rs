use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::state::DenseState;
use crate::linalg::{eigh, hermitian_map, Matrix};
use crate::{Error, Result, C64};

/// Possibly sub-normalized mixed state on a product of truncated modes.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: Matrix,
}

impl DensityMatrix {
    /// Wraps a square matrix on the given modes.
    pub fn new(dims: Vec<usize>, matrix: Matrix) -> Result<Self> {
        let n: usize = dims.iter().product();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch("density matrix does not match dims"));
        }
        Ok(Self { dims, matrix })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(psi: &DenseState) -> Self {
        let a = psi.amps();
        let matrix = Matrix::from_fn(a.len(), a.len(), |r, c| a[r] * a[c].conj());
        Self { dims: psi.dims().to_vec(), matrix }
    }

    /// Per-mode dimensions.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr(ρ O)`.
    pub fn expectation(&self, op: &Matrix) -> C64 {
        self.matrix.matmul(op).trace()
    }

    /// Largest `|ρ − ρ†|` entry.
    pub fn hermiticity_defect(&self) -> f64 {
        self.matrix.sub(&self.matrix.adjoint()).max_abs()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.matrix).0
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn overlap_pure(&self, psi: &DenseState) -> Result<f64> {
        if psi.dims() != self.dims.as_slice() {
            return Err(Error::DimensionMismatch("state and density matrix dims differ"));
        }
        let a = psi.amps();
        let ra = self.matrix.mul_vec(a);
        Ok(crate::linalg::inner(a, &ra).re)
    }

    /// `Σ_k K_k ρ K_k†` with each `K_k` acting on `mode`.
    pub fn apply_local_kraus(&self, mode: usize, ops: &[Matrix]) -> Result<Self> {
        let d = *self.dims.get(mode).ok_or(Error::InvalidArgument("mode index out of range"))?;
        let n = self.matrix.rows();
        let mut acc = Matrix::zeros(n, n);
        for k in ops {
            if k.rows() != d || k.cols() != d {
                return Err(Error::DimensionMismatch("Kraus operator dimension"));
            }
            let left = apply_rows(&self.dims, mode, k, &self.matrix);
            let both = apply_rows(&self.dims, mode, k, &left.adjoint()).adjoint();
            acc = acc.add(&both);
        }
        Ok(Self { dims: self.dims.clone(), matrix: acc })
    }

    /// Reduced state on the modes in `keep` (listed in ascending order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        partial_trace(self, keep)
    }
}

fn apply_rows(dims: &[usize], mode: usize, k: &Matrix, m: &Matrix) -> Matrix {
    let d = dims[mode];
    let inner_size: usize = dims[mode + 1..].iter().product();
    let outer: usize = dims[..mode].iter().product();
    let cols = m.cols();
    let mut out = Matrix::zeros(m.rows(), cols);
    for o in 0..outer {
        for i in 0..inner_size {
            for r in 0..d {
                let row = (o * d + r) * inner_size + i;
                for c in 0..d {
                    let kv = k[(r, c)];
                    if kv == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let src = (o * d + c) * inner_size + i;
                    for j in 0..cols {
                        out[(row, j)] += kv * m[(src, j)];
                    }
                }
            }
        }
    }
    out
}

/// Traces out every mode not listed in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::InvalidArgument("keep-set must not be empty"));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&m| m >= rho.dims.len()) {
        return Err(Error::InvalidArgument("keep-set must be ascending valid modes"));
    }
    let dims = &rho.dims;
    let gone: Vec<usize> = (0..dims.len()).filter(|m| !keep.contains(m)).collect();
    let kdims: Vec<usize> = keep.iter().map(|&m| dims[m]).collect();
    let gdims: Vec<usize> = gone.iter().map(|&m| dims[m]).collect();
    let (kn, gn): (usize, usize) = (kdims.iter().product(), gdims.iter().product());
    let compose = |ki: usize, gi: usize| -> usize {
        let mut idx = vec![0usize; dims.len()];
        let mut r = ki;
        for (j, &m) in keep.iter().enumerate().rev() {
            idx[m] = r % kdims[j];
            r /= kdims[j];
        }
        let mut r = gi;
        for (j, &m) in gone.iter().enumerate().rev() {
            idx[m] = r % gdims[j];
            r /= gdims[j];
        }
        idx.iter().zip(dims).fold(0, |acc, (&i, &d)| acc * d + i)
    };
    let mut out = Matrix::zeros(kn, kn);
    for g in 0..gn {
        for r in 0..kn {
            let fr = compose(r, g);
            for c in 0..kn {
                out[(r, c)] += rho.matrix[(fr, compose(c, g))];
            }
        }
    }
    DensityMatrix::new(kdims, out)
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²` of two normalized states.
pub fn fidelity_mixed(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dims != sigma.dims {
        return Err(Error::DimensionMismatch("fidelity of differently shaped states"));
    }
    // Roundoff eigenvalues of order 1e-16 would contribute 1e-8 each
    // through the square roots, so they are dropped relative to the largest.
    let floor = |vals: &[f64]| 1e-13 * vals.iter().fold(0.0f64, |m, &x| m.max(x));
    let cut = floor(&eigh(&rho.matrix).0);
    let sr = hermitian_map(&rho.matrix, |x| if x > cut { x.sqrt() } else { 0.0 });
    let m = sr.matmul(&sigma.matrix).matmul(&sr);
    let (vals, _) = eigh(&m);
    let cut = floor(&vals);
    let s: f64 = vals.iter().filter(|&&x| x > cut).map(|&x| x.sqrt()).sum();
    Ok((s * s).min(1.0))
}
