use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{Matrix, Sparse};
use crate::{Error, Result, C64, GUARD, TAIL_TOL};

/// Truncation controls shared by operator and state constructors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorOptions {
    /// Extra levels on each side of the cutoff used while exponentiating;
    /// the generator is built at `cutoff + 2·guard` and the result cropped.
    pub guard: usize,
    /// Largest tolerated probability beyond the cutoff.
    pub tail_tol: f64,
}

impl Default for OperatorOptions {
    fn default() -> Self {
        Self { guard: GUARD, tail_tol: TAIL_TOL }
    }
}

/// Operator on a product of truncated modes.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dims: Vec<usize>,
    matrix: Matrix,
}

impl DenseOperator {
    /// Wraps a square matrix acting on modes of the given dimensions.
    pub fn new(dims: Vec<usize>, matrix: Matrix) -> Result<Self> {
        let n: usize = dims.iter().product();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch("operator matrix does not match dims"));
        }
        Ok(Self { dims, matrix })
    }

    /// Identity on the given modes.
    pub fn identity(dims: Vec<usize>) -> Self {
        let n = dims.iter().product();
        Self { dims, matrix: Matrix::identity(n) }
    }

    /// Per-mode dimensions.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims, matrix: self.matrix.kron(&other.matrix) }
    }

    /// Operator product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch("composing operators on different spaces"));
        }
        Ok(Self { dims: self.dims.clone(), matrix: self.matrix.matmul(&other.matrix) })
    }

    /// Hermitian conjugate.
    pub fn adjoint(&self) -> Self {
        Self { dims: self.dims.clone(), matrix: self.matrix.adjoint() }
    }

    /// Largest deviation of `U†U` from the identity over the block of
    /// multi-indices whose every entry is at most `limit[m]`.
    pub fn unitarity_defect(&self, limit: &[usize]) -> f64 {
        let g = self.matrix.adjoint().matmul(&self.matrix);
        let idx: Vec<usize> = (0..g.rows()).filter(|&i| within(i, &self.dims, limit)).collect();
        let mut worst = 0.0f64;
        for &r in &idx {
            for &c in &idx {
                let want = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((g[(r, c)] - C64::new(want, 0.0)).norm());
            }
        }
        worst
    }
}

pub(crate) fn within(flat: usize, dims: &[usize], limit: &[usize]) -> bool {
    let mut rem = flat;
    for (d, l) in dims.iter().zip(limit).rev() {
        if rem % d > *l {
            return false;
        }
        rem /= d;
    }
    true
}

/// `â`, `â†` and `n̂` at a given cutoff.
#[derive(Debug, Clone)]
pub struct Ladder {
    /// Annihilation operator, `⟨n−1|â|n⟩ = √n`.
    pub annihilate: DenseOperator,
    /// Creation operator `â†`.
    pub create: DenseOperator,
    /// Number operator `â†â`.
    pub number: DenseOperator,
}

/// Ladder operators on `0..=cutoff`.
pub fn ladder_operators(cutoff: usize) -> Result<Ladder> {
    if cutoff < 1 {
        return Err(Error::InvalidArgument("cutoff must be at least 1"));
    }
    let d = cutoff + 1;
    let a = Matrix::from_fn(d, d, |r, c| if c == r + 1 { C64::new((c as f64).sqrt(), 0.0) } else { C64::new(0.0, 0.0) });
    let ad = a.adjoint();
    let n = ad.matmul(&a);
    Ok(Ladder {
        annihilate: DenseOperator { dims: vec![d], matrix: a },
        create: DenseOperator { dims: vec![d], matrix: ad },
        number: DenseOperator { dims: vec![d], matrix: n },
    })
}

/// `αâ† − α*â` on `0..=cutoff`.
pub fn displacement_generator(alpha: C64, cutoff: usize) -> Sparse {
    let mut g = Sparse::new(cutoff + 1);
    for n in 0..cutoff {
        let s = ((n + 1) as f64).sqrt();
        g.push(n + 1, n, alpha * s);
        g.push(n, n + 1, -alpha.conj() * s);
    }
    g
}

/// `½(ξ*â² − ξâ†²)` on `0..=cutoff`.
pub fn squeeze_generator(xi: C64, cutoff: usize) -> Sparse {
    let mut g = Sparse::new(cutoff + 1);
    for n in 0..cutoff.saturating_sub(1) {
        let s = (((n + 1) * (n + 2)) as f64).sqrt();
        g.push(n + 2, n, -xi * (0.5 * s));
        g.push(n, n + 2, xi.conj() * (0.5 * s));
    }
    g
}

/// `½(ξ*â₁â₂ − ξâ₁†â₂†)` on two modes truncated at `c1`, `c2`.
pub fn two_mode_squeeze_generator(xi: C64, c1: usize, c2: usize) -> Sparse {
    let d2 = c2 + 1;
    let mut g = Sparse::new((c1 + 1) * d2);
    for n in 0..c1 {
        for m in 0..c2 {
            let s = (((n + 1) * (m + 1)) as f64).sqrt();
            let lo = n * d2 + m;
            let hi = (n + 1) * d2 + m + 1;
            g.push(hi, lo, -xi * (0.5 * s));
            g.push(lo, hi, xi.conj() * (0.5 * s));
        }
    }
    g
}

fn single_mode_unitary(generator: Sparse, cutoff: usize, opts: &OperatorOptions) -> Result<DenseOperator> {
    let full = generator.to_dense().expm();
    let tail: f64 = (cutoff + 1..full.rows()).map(|r| full[(r, 0)].norm_sqr()).sum();
    if tail > opts.tail_tol {
        return Err(Error::Truncation { tail, cutoff, tol: opts.tail_tol });
    }
    Ok(DenseOperator { dims: vec![cutoff + 1], matrix: full.crop(cutoff + 1, cutoff + 1) })
}

/// `D(α) = exp(αâ† − α*â)` with default truncation options.
pub fn displacement_operator(alpha: C64, cutoff: usize) -> Result<DenseOperator> {
    OperatorOptions::default().displacement(alpha, cutoff)
}

/// `S(ξ) = exp(½(ξ*â² − ξâ†²))` with default truncation options.
pub fn squeeze_operator(xi: C64, cutoff: usize) -> Result<DenseOperator> {
    OperatorOptions::default().squeeze(xi, cutoff)
}

/// Two-mode squeezer `exp(½(ξ*â₁â₂ − ξâ₁†â₂†))` with default options.
pub fn two_mode_squeeze_unitary(xi: C64, c1: usize, c2: usize) -> Result<DenseOperator> {
    OperatorOptions::default().two_mode_squeeze(xi, c1, c2)
}

impl OperatorOptions {
    /// Displacement operator; fails if `D(α)|0⟩` leaks past the cutoff.
    pub fn displacement(&self, alpha: C64, cutoff: usize) -> Result<DenseOperator> {
        single_mode_unitary(displacement_generator(alpha, cutoff + 2 * self.guard), cutoff, self)
    }

    /// Squeeze operator; fails if `S(ξ)|0⟩` leaks past the cutoff.
    pub fn squeeze(&self, xi: C64, cutoff: usize) -> Result<DenseOperator> {
        single_mode_unitary(squeeze_generator(xi, cutoff + 2 * self.guard), cutoff, self)
    }

    /// Two-mode squeezer; fails if `S₂(ξ)|0,0⟩` leaks past the cutoffs.
    pub fn two_mode_squeeze(&self, xi: C64, c1: usize, c2: usize) -> Result<DenseOperator> {
        let (b1, b2) = (c1 + 2 * self.guard, c2 + 2 * self.guard);
        let full = two_mode_squeeze_generator(xi, b1, b2).to_dense().expm();
        let big = [b1 + 1, b2 + 1];
        let keep: Vec<usize> = (0..full.rows()).filter(|&i| within(i, &big, &[c1, c2])).collect();
        let tail: f64 = (0..full.rows()).filter(|i| !keep.contains(i)).map(|r| full[(r, 0)].norm_sqr()).sum();
        if tail > self.tail_tol {
            return Err(Error::Truncation { tail, cutoff: c1.min(c2), tol: self.tail_tol });
        }
        let m = Matrix::from_fn(keep.len(), keep.len(), |r, c| full[(keep[r], keep[c])]);
        Ok(DenseOperator { dims: vec![c1 + 1, c2 + 1], matrix: m })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_entries_at_cutoff_two() {
        let l = ladder_operators(2).unwrap();
        let a = l.annihilate.matrix();
        assert_eq!(a[(0, 1)], C64::new(1.0, 0.0));
        assert!((a[(1, 2)].re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(a[(1, 0)], C64::new(0.0, 0.0));
        let n = l.number.matrix();
        for i in 0..3 {
            assert!((n[(i, i)].re - i as f64).abs() < 1e-14);
        }
        assert!(ladder_operators(0).is_err());
    }

    #[test]
    fn zero_arguments_give_identity() {
        let d = displacement_operator(C64::new(0.0, 0.0), 8).unwrap();
        let s = squeeze_operator(C64::new(0.0, 0.0), 8).unwrap();
        let id = Matrix::identity(9);
        assert!(d.matrix().sub(&id).max_abs() < 1e-15);
        assert!(s.matrix().sub(&id).max_abs() < 1e-15);
    }

    #[test]
    fn truncation_is_reported() {
        let err = displacement_operator(C64::new(3.0, 0.0), 5).unwrap_err();
        assert!(matches!(err, Error::Truncation { .. }));
    }
}
