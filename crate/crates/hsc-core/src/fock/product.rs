use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::state::{DenseState, Projection};
use crate::linalg::{inner, Matrix};
use crate::{Error, Result, C64};

/// One weighted product `w · |f₁⟩⊗|f₂⟩⊗…`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    /// Complex weight.
    pub weight: C64,
    /// One vector per mode.
    pub factors: Vec<Vec<C64>>,
}

/// Multi-mode pure state stored as a sum of product terms.
///
/// Inner products contract mode by mode, so the cost grows with the number
/// of terms squared rather than with the full Hilbert-space dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTermState {
    dims: Vec<usize>,
    labels: Vec<String>,
    terms: Vec<Term>,
}

impl ProductTermState {
    /// Zero state on modes with the given dimensions and labels.
    pub fn new(dims: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        if dims.len() != labels.len() {
            return Err(Error::DimensionMismatch("one label per mode"));
        }
        Ok(Self { dims, labels, terms: Vec::new() })
    }

    /// Single product term with unit weight.
    pub fn product(factors: Vec<Vec<C64>>, labels: Vec<String>) -> Result<Self> {
        let dims = factors.iter().map(Vec::len).collect();
        let mut s = Self::new(dims, labels)?;
        s.push(C64::new(1.0, 0.0), factors)?;
        Ok(s)
    }

    /// Appends a term.
    pub fn push(&mut self, weight: C64, factors: Vec<Vec<C64>>) -> Result<()> {
        if factors.len() != self.dims.len() || factors.iter().zip(&self.dims).any(|(f, &d)| f.len() != d) {
            return Err(Error::DimensionMismatch("term arity or factor dimension"));
        }
        self.terms.push(Term { weight, factors });
        Ok(())
    }

    /// Per-mode dimensions.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Mode labels.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Index of the mode with this label.
    pub fn mode(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Same state with new mode labels.
    pub fn relabeled(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dims.len() {
            return Err(Error::DimensionMismatch("one label per mode"));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Terms.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// `⟨self|other⟩ = Σ_jk w̄_j v_k Π_m ⟨f_jm|g_km⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch("inner product of differently shaped states"));
        }
        let mut acc = C64::new(0.0, 0.0);
        for a in &self.terms {
            for b in &other.terms {
                let mut p = a.weight.conj() * b.weight;
                for (f, g) in a.factors.iter().zip(&b.factors) {
                    if p == C64::new(0.0, 0.0) {
                        break;
                    }
                    p *= inner(f, g);
                }
                acc += p;
            }
        }
        Ok(acc)
    }

    /// Squared norm.
    pub fn norm_sqr(&self) -> f64 {
        self.inner(self).map(|z| z.re).unwrap_or(0.0)
    }

    /// Scalar multiple.
    pub fn scaled(&self, s: C64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.weight *= s;
        }
        out
    }

    /// Superposition `self + other`.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch("adding differently shaped states"));
        }
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().cloned());
                terms.push(Term { weight: a.weight * b.weight, factors });
            }
        }
        Self { dims, labels, terms }
    }

    /// Applies a single-mode matrix to `mode` in every term.
    pub fn apply_local(&self, mode: usize, m: &Matrix) -> Result<Self> {
        let d = *self.dims.get(mode).ok_or(Error::InvalidArgument("mode index out of range"))?;
        if m.cols() != d {
            return Err(Error::DimensionMismatch("local operator dimension"));
        }
        let mut out = self.clone();
        out.dims[mode] = m.rows();
        for t in &mut out.terms {
            t.factors[mode] = m.mul_vec(&t.factors[mode]);
        }
        Ok(out)
    }

    /// Contracts `mode` with `⟨bra|` in every term, removing the mode.
    pub fn contract(&self, mode: usize, bra: &[C64]) -> Result<Self> {
        let d = *self.dims.get(mode).ok_or(Error::InvalidArgument("mode index out of range"))?;
        if bra.len() != d {
            return Err(Error::DimensionMismatch("bra dimension"));
        }
        let mut out = self.clone();
        out.dims.remove(mode);
        out.labels.remove(mode);
        for t in &mut out.terms {
            let f = t.factors.remove(mode);
            t.weight *= inner(bra, &f);
        }
        out.terms.retain(|t| t.weight != C64::new(0.0, 0.0));
        Ok(out)
    }

    /// Projects modes onto number states `(mode, n)`.
    pub fn project(&self, pattern: &[(usize, usize)]) -> Result<Projection<ProductTermState>> {
        let mut order: Vec<(usize, usize)> = pattern.to_vec();
        order.sort_unstable();
        if order.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument("mode listed twice in pattern"));
        }
        let mut post = self.clone();
        for &(m, n) in order.iter().rev() {
            let d = *self.dims.get(m).ok_or(Error::InvalidArgument("pattern mode out of range"))?;
            if n >= d {
                return Err(Error::DimensionMismatch("pattern level exceeds mode dimension"));
            }
            let mut bra = vec![C64::new(0.0, 0.0); d];
            bra[n] = C64::new(1.0, 0.0);
            post = post.contract(m, &bra)?;
        }
        let total = self.norm_sqr();
        let kept = post.norm_sqr();
        let probability = if total > 0.0 { kept / total } else { 0.0 };
        let state = if probability > 0.0 {
            Some(post.scaled(C64::new(1.0 / kept.sqrt(), 0.0)))
        } else {
            None
        };
        Ok(Projection { probability, state })
    }

    /// Unnormalized branches `⟨i|_mode |ψ⟩` for every basis level `i`.
    ///
    /// Summing the branches' projectors reproduces the partial trace over
    /// `mode`, so an environment mode can be traced out by keeping the list.
    pub fn trace_out(&self, mode: usize) -> Result<Vec<Self>> {
        let d = *self.dims.get(mode).ok_or(Error::InvalidArgument("mode index out of range"))?;
        let mut out = Vec::new();
        for i in 0..d {
            let mut bra = vec![C64::new(0.0, 0.0); d];
            bra[i] = C64::new(1.0, 0.0);
            let b = self.contract(mode, &bra)?;
            if !b.terms.is_empty() {
                out.push(b);
            }
        }
        Ok(out)
    }

    /// Dense amplitudes (first mode most significant).
    pub fn to_dense(&self) -> DenseState {
        let n: usize = self.dims.iter().product();
        let mut amps = vec![C64::new(0.0, 0.0); n];
        for t in &self.terms {
            let mut cur = vec![t.weight];
            for f in &t.factors {
                cur = cur.iter().flat_map(|a| f.iter().map(move |b| a * b)).collect();
            }
            for (x, y) in amps.iter_mut().zip(cur) {
                *x += y;
            }
        }
        DenseState::new(self.dims.clone(), amps).expect("dims are consistent")
    }
}
