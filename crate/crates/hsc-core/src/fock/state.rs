use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::operators::{displacement_generator, squeeze_generator, DenseOperator, OperatorOptions};
use crate::linalg::{inner, vec_norm, Matrix};
use crate::{Error, Result, C64};

/// Single-mode pure state with amplitudes for photon numbers `0..=cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<C64>,
}

impl FockVector {
    /// Wraps amplitudes; the cutoff is `amps.len() - 1`.
    ///
    /// # Panics
    /// If `amps` is empty.
    pub fn new(amps: Vec<C64>) -> Self {
        assert!(!amps.is_empty(), "a Fock vector needs at least one level");
        Self { amps }
    }

    /// The vacuum `|0⟩`.
    pub fn vacuum(cutoff: usize) -> Self {
        Self::number(0, cutoff)
    }

    /// The number state `|n⟩`.
    ///
    /// # Panics
    /// If `n > cutoff`.
    pub fn number(n: usize, cutoff: usize) -> Self {
        assert!(n <= cutoff, "number state above cutoff");
        let mut amps = vec![C64::new(0.0, 0.0); cutoff + 1];
        amps[n] = C64::new(1.0, 0.0);
        Self { amps }
    }

    /// Photon-number truncation.
    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    /// Amplitudes `c_0..c_N`.
    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    /// Consumes the vector, returning its amplitudes.
    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    /// `Σ|c_n|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Unit-norm copy.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n < 1e-300 {
            return Err(Error::Degenerate("cannot normalize the zero vector"));
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    /// Scalar multiple.
    pub fn scaled(&self, s: C64) -> Self {
        Self { amps: self.amps.iter().map(|a| a * s).collect() }
    }

    /// `⟨self|other⟩`; a shorter vector is padded with zeros.
    pub fn inner(&self, other: &Self) -> C64 {
        inner(&self.amps, &other.amps)
    }

    /// `⟨n̂⟩ / ⟨ψ|ψ⟩`.
    pub fn mean_photon(&self) -> f64 {
        let num: f64 = self.amps.iter().enumerate().map(|(n, a)| n as f64 * a.norm_sqr()).sum();
        num / self.norm_sqr()
    }

    /// Mass on photon numbers above `cutoff`.
    pub fn tail_mass(&self, cutoff: usize) -> f64 {
        self.amps.iter().skip(cutoff + 1).map(|a| a.norm_sqr()).sum()
    }

    /// Copy resized to `cutoff`, zero-padding or dropping levels.
    pub fn resized(&self, cutoff: usize) -> Self {
        let mut amps = self.amps.clone();
        amps.resize(cutoff + 1, C64::new(0.0, 0.0));
        Self { amps }
    }

    /// `â|ψ⟩` in the same cutoff.
    pub fn annihilate(&self) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); self.amps.len()];
        for n in 1..self.amps.len() {
            amps[n - 1] = self.amps[n] * (n as f64).sqrt();
        }
        Self { amps }
    }

    /// Applies a single-mode operator of matching dimension.
    pub fn apply(&self, op: &DenseOperator) -> Self {
        Self { amps: op.matrix().mul_vec(&self.amps) }
    }
}

/// Closed-form coherent amplitudes `e^{-|α|²/2} αⁿ/√n!`.
pub fn coherent_amplitudes(alpha: C64, cutoff: usize) -> FockVector {
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut c = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    amps.push(c);
    for n in 1..=cutoff {
        c = c * alpha / (n as f64).sqrt();
        amps.push(c);
    }
    FockVector::new(amps)
}

/// `|α,ξ⟩ = D(α)S(ξ)|0⟩`, evolved at `cutoff + 2·guard` and cropped.
///
/// Fails when more than `opts.tail_tol` of the probability lies beyond the
/// cutoff.
pub fn displaced_squeezed_vacuum(alpha: C64, xi: C64, cutoff: usize, opts: &OperatorOptions) -> Result<FockVector> {
    let big = cutoff + 2 * opts.guard;
    let mut v = vec![C64::new(0.0, 0.0); big + 1];
    v[0] = C64::new(1.0, 0.0);
    if xi != C64::new(0.0, 0.0) {
        v = squeeze_generator(xi, big).expm_apply(&v);
    }
    if alpha != C64::new(0.0, 0.0) {
        v = displacement_generator(alpha, big).expm_apply(&v);
    }
    let full = FockVector::new(v);
    let tail = full.tail_mass(cutoff);
    if tail > opts.tail_tol {
        return Err(Error::Truncation { tail, cutoff, tol: opts.tail_tol });
    }
    Ok(full.resized(cutoff))
}

/// Pure state of several modes, stored row-major with the first mode most
/// significant.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    dims: Vec<usize>,
    amps: Vec<C64>,
}

/// Result of projecting part of a state onto a measurement pattern.
#[derive(Debug, Clone)]
pub struct Projection<S> {
    /// Probability of the pattern.
    pub probability: f64,
    /// Renormalized state of the unmeasured modes, `None` when the
    /// probability vanishes.
    pub state: Option<S>,
}

impl DenseState {
    /// Wraps amplitudes for the given per-mode dimensions.
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        if dims.iter().product::<usize>() != amps.len() {
            return Err(Error::DimensionMismatch("amplitude count does not match dims"));
        }
        Ok(Self { dims, amps })
    }

    /// Per-mode dimensions.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Amplitudes.
    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    /// `Σ|c|²`.
    pub fn norm_sqr(&self) -> f64 {
        vec_norm(&self.amps).powi(2)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch("inner product of differently shaped states"));
        }
        Ok(inner(&self.amps, &other.amps))
    }

    /// Applies an operator on the full space.
    pub fn apply(&self, op: &DenseOperator) -> Result<Self> {
        if op.dims() != self.dims.as_slice() {
            return Err(Error::DimensionMismatch("operator and state dims differ"));
        }
        Ok(Self { dims: self.dims.clone(), amps: op.matrix().mul_vec(&self.amps) })
    }

    /// Applies a single-mode matrix to `mode`.
    pub fn apply_local(&self, mode: usize, m: &Matrix) -> Result<Self> {
        let d = *self.dims.get(mode).ok_or(Error::InvalidArgument("mode index out of range"))?;
        if m.rows() != d || m.cols() != d {
            return Err(Error::DimensionMismatch("local operator dimension"));
        }
        let inner_size: usize = self.dims[mode + 1..].iter().product();
        let outer: usize = self.dims[..mode].iter().product();
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        for o in 0..outer {
            for i in 0..inner_size {
                for r in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for c in 0..d {
                        acc += m[(r, c)] * self.amps[(o * d + c) * inner_size + i];
                    }
                    out[(o * d + r) * inner_size + i] = acc;
                }
            }
        }
        Ok(Self { dims: self.dims.clone(), amps: out })
    }

    /// Projects the listed modes onto number states `(mode, n)` and returns
    /// the probability with the renormalized state of the remaining modes.
    pub fn project(&self, pattern: &[(usize, usize)]) -> Result<Projection<DenseState>> {
        for (k, &(m, n)) in pattern.iter().enumerate() {
            let d = *self.dims.get(m).ok_or(Error::InvalidArgument("pattern mode out of range"))?;
            if n >= d {
                return Err(Error::DimensionMismatch("pattern level exceeds mode dimension"));
            }
            if pattern[..k].iter().any(|&(m2, _)| m2 == m) {
                return Err(Error::InvalidArgument("mode listed twice in pattern"));
            }
        }
        let keep: Vec<usize> = (0..self.dims.len()).filter(|m| !pattern.iter().any(|&(pm, _)| pm == *m)).collect();
        let kdims: Vec<usize> = keep.iter().map(|&m| self.dims[m]).collect();
        let mut out = vec![C64::new(0.0, 0.0); kdims.iter().product()];
        let mut idx = vec![0usize; self.dims.len()];
        for &(m, n) in pattern {
            idx[m] = n;
        }
        for (flat, slot) in out.iter_mut().enumerate() {
            let mut rem = flat;
            for (j, &m) in keep.iter().enumerate().rev() {
                idx[m] = rem % kdims[j];
                rem /= kdims[j];
            }
            *slot = self.amps[self.flat_index(&idx)];
        }
        let p: f64 = out.iter().map(|a| a.norm_sqr()).sum::<f64>() / self.norm_sqr();
        let state = if p > 0.0 {
            let s = (p * self.norm_sqr()).sqrt();
            Some(Self { dims: kdims, amps: out.into_iter().map(|a| a / s).collect() })
        } else {
            None
        };
        Ok(Projection { probability: p, state })
    }

    fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| acc * d + i)
    }
}

impl From<FockVector> for DenseState {
    fn from(v: FockVector) -> Self {
        let d = v.amps.len();
        Self { dims: vec![d], amps: v.amps }
    }
}

/// Kronecker composition of two states.
pub fn tensor_product(a: &DenseState, b: &DenseState) -> DenseState {
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    let amps = a.amps.iter().flat_map(|x| b.amps.iter().map(move |y| x * y)).collect();
    DenseState { dims, amps }
}
