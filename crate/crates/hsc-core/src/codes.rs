//! Cat, squeezed-cat and hybrid codewords.
//!
//! Polarization is carried in a three-level rail space `{vacuum, H, V}` so the
//! same vectors survive photon loss; see [`pol`].

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::fock::{squeeze_generator, displacement_generator, FockVector, OperatorOptions, ProductTermState};
use crate::linalg::inner;
use crate::{Error, Result, C64};

/// Polarization rail vectors in the basis `{vacuum, H, V}`.
pub mod pol {
    use crate::C64;
    use core::f64::consts::FRAC_1_SQRT_2;

    /// Rail dimension.
    pub const DIM: usize = 3;
    /// Index of the no-photon level.
    pub const VAC: usize = 0;
    /// Index of a horizontally polarized photon.
    pub const H: usize = 1;
    /// Index of a vertically polarized photon.
    pub const V: usize = 2;

    const Z: C64 = C64::new(0.0, 0.0);
    const O: C64 = C64::new(1.0, 0.0);
    const S: C64 = C64::new(FRAC_1_SQRT_2, 0.0);

    /// `|H⟩`.
    pub fn h() -> [C64; 3] {
        [Z, O, Z]
    }
    /// `|V⟩`.
    pub fn v() -> [C64; 3] {
        [Z, Z, O]
    }
    /// `|+⟩ = (|H⟩ + |V⟩)/√2`.
    pub fn plus() -> [C64; 3] {
        [Z, S, S]
    }
    /// `|−⟩ = (|H⟩ − |V⟩)/√2`.
    pub fn minus() -> [C64; 3] {
        [Z, S, -S]
    }
    /// `|+⟩` for bit 0 and `|−⟩` for bit 1.
    pub fn logical(bit: u8) -> [C64; 3] {
        if bit == 0 {
            plus()
        } else {
            minus()
        }
    }
}

/// Photon-number parity of a cat superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    /// `|α,ξ⟩ + |−α,ξ⟩`, even photon numbers only.
    Even,
    /// `|α,ξ⟩ − |−α,ξ⟩`, odd photon numbers only.
    Odd,
}

impl Parity {
    /// `Even` for logical 0, `Odd` for logical 1.
    pub fn of_bit(bit: u8) -> Self {
        if bit == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// The other parity.
    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    fn keeps(self, n: usize) -> bool {
        (n % 2 == 0) == (self == Parity::Even)
    }
}

/// Code family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `(|α⟩ ± |−α⟩)/N±`.
    Cat,
    /// `(|α,ξ⟩ ± |−α,ξ⟩)/N±`.
    SqueezedCat,
    /// Polarization qubit hybridized with a cat code.
    HCat,
    /// Polarization qubit hybridized with a squeezed-cat code.
    Hsc,
}

impl Family {
    /// Whether the family carries a polarization qubit.
    pub fn is_hybrid(self) -> bool {
        matches!(self, Family::HCat | Family::Hsc)
    }
}

/// Parameters of a codeword family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeParams {
    /// Coherent amplitude `α`.
    pub alpha: C64,
    /// Squeezing `ξ`.
    pub xi: C64,
    /// Family; `Cat` and `HCat` require `ξ = 0`.
    pub family: Family,
    /// Fock cutoff of the bosonic mode.
    pub cutoff: usize,
    /// Truncation options.
    pub opts: OperatorOptions,
}

impl CodeParams {
    /// H-SC parameters with default truncation options.
    pub fn hsc(alpha: f64, xi: f64, cutoff: usize) -> Self {
        Self { alpha: alpha.into(), xi: xi.into(), family: Family::Hsc, cutoff, opts: OperatorOptions::default() }
    }

    /// Squeezed-cat parameters with default truncation options.
    pub fn sc(alpha: f64, xi: f64, cutoff: usize) -> Self {
        Self { family: Family::SqueezedCat, ..Self::hsc(alpha, xi, cutoff) }
    }

    /// Rejects inconsistent combinations.
    pub fn validate(&self) -> Result<()> {
        if matches!(self.family, Family::Cat | Family::HCat) && self.xi != C64::new(0.0, 0.0) {
            return Err(Error::InvalidArgument("cat families require xi = 0"));
        }
        if self.cutoff < 1 {
            return Err(Error::InvalidArgument("cutoff must be at least 1"));
        }
        if self.alpha == C64::new(0.0, 0.0) {
            return Err(Error::Degenerate("odd codeword vanishes at alpha = 0"));
        }
        Ok(())
    }

    /// Both bosonic codewords `(C⁺, C⁻)`.
    pub fn sc_codewords(&self) -> Result<(FockVector, FockVector)> {
        self.validate()?;
        let fam = DisplacedFamily::new(self.xi, self.cutoff, self.opts);
        Ok((fam.cat(self.alpha, Parity::Even)?, fam.cat(self.alpha, Parity::Odd)?))
    }
}

/// `D(α)S(ξ)|0⟩` for many `α` at fixed `ξ`, reusing the squeezed vacuum.
#[derive(Debug, Clone)]
pub struct DisplacedFamily {
    squeezed: Vec<C64>,
    cutoff: usize,
    opts: OperatorOptions,
}

impl DisplacedFamily {
    /// Prepares `S(ξ)|0⟩` on the guard-banded space.
    pub fn new(xi: C64, cutoff: usize, opts: OperatorOptions) -> Self {
        let big = cutoff + 2 * opts.guard;
        let mut v = vec![C64::new(0.0, 0.0); big + 1];
        v[0] = C64::new(1.0, 0.0);
        if xi != C64::new(0.0, 0.0) {
            v = squeeze_generator(xi, big).expm_apply(&v);
        }
        Self { squeezed: v, cutoff, opts }
    }

    /// Cutoff of produced states.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Uncropped `|α,ξ⟩` on the guard-banded space.
    fn padded(&self, alpha: C64) -> Vec<C64> {
        if alpha == C64::new(0.0, 0.0) {
            return self.squeezed.clone();
        }
        displacement_generator(alpha, self.squeezed.len() - 1).expm_apply(&self.squeezed)
    }

    fn crop(&self, v: Vec<C64>) -> Result<FockVector> {
        let full = FockVector::new(v);
        let tail = full.tail_mass(self.cutoff);
        if tail > self.opts.tail_tol * full.norm_sqr() {
            return Err(Error::Truncation { tail, cutoff: self.cutoff, tol: self.opts.tail_tol });
        }
        Ok(full.resized(self.cutoff))
    }

    /// `|α,ξ⟩`.
    pub fn displaced(&self, alpha: C64) -> Result<FockVector> {
        self.crop(self.padded(alpha))
    }

    /// Normalized `(|α,ξ⟩ ± |−α,ξ⟩)/N±`.
    ///
    /// Since `(−1)^n̂` maps `|α,ξ⟩` to `|−α,ξ⟩`, the superposition is twice
    /// the even or odd part of `|α,ξ⟩`; the parity is therefore exact.
    pub fn cat(&self, alpha: C64, parity: Parity) -> Result<FockVector> {
        let mut v = self.padded(alpha);
        for (n, a) in v.iter_mut().enumerate() {
            *a = if parity.keeps(n) { *a * 2.0 } else { C64::new(0.0, 0.0) };
        }
        let norm2: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        if norm2 < 1e-24 {
            return Err(Error::Degenerate("cat superposition cancels"));
        }
        let s = 1.0 / norm2.sqrt();
        self.crop(v.into_iter().map(|a| a * s).collect())
    }

    /// Unnormalized norm `N± = ‖|α,ξ⟩ ± |−α,ξ⟩‖`.
    pub fn cat_norm(&self, alpha: C64, parity: Parity) -> f64 {
        let v = self.padded(alpha);
        let s: f64 = v.iter().enumerate().filter(|(n, _)| parity.keeps(*n)).map(|(_, a)| a.norm_sqr()).sum();
        2.0 * s.sqrt()
    }
}

/// Normalized cat state `(|α⟩ ± |−α⟩)/N±`.
pub fn cat_state(alpha: C64, parity: Parity, cutoff: usize) -> Result<FockVector> {
    squeezed_cat_state(alpha, C64::new(0.0, 0.0), parity, cutoff)
}

/// Normalized squeezed cat state `(|α,ξ⟩ ± |−α,ξ⟩)/N±`.
pub fn squeezed_cat_state(alpha: C64, xi: C64, parity: Parity, cutoff: usize) -> Result<FockVector> {
    DisplacedFamily::new(xi, cutoff, OperatorOptions::default()).cat(alpha, parity)
}

/// Pure state of one polarization rail space and one bosonic mode, stored
/// as the bosonic vector attached to each rail level `{vacuum, H, V}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridState {
    comps: [Vec<C64>; 3],
}

impl HybridState {
    /// Builds `Σ_p |p⟩ ⊗ comps[p]`.
    ///
    /// # Panics
    /// If the components have different lengths.
    pub fn new(comps: [Vec<C64>; 3]) -> Self {
        assert!(comps[1].len() == comps[0].len() && comps[2].len() == comps[0].len(), "component lengths");
        Self { comps }
    }

    /// `|p⟩ ⊗ |f⟩`.
    pub fn product(p: &[C64; 3], f: &FockVector) -> Self {
        let comps = [0, 1, 2].map(|i| f.amps().iter().map(|a| a * p[i]).collect());
        Self { comps }
    }

    /// Bosonic cutoff.
    pub fn cutoff(&self) -> usize {
        self.comps[0].len() - 1
    }

    /// Bosonic vector on rail level `p`.
    pub fn component(&self, p: usize) -> &[C64] {
        &self.comps[p]
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        (0..3).map(|p| inner(&self.comps[p], &other.comps[p])).sum()
    }

    /// Squared norm.
    pub fn norm_sqr(&self) -> f64 {
        self.inner(self).re
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
        Self { comps: self.comps.clone().map(|c| c.into_iter().map(|a| a * s).collect()) }
    }

    /// Superposition.
    pub fn plus(&self, other: &Self) -> Self {
        let comps = [0, 1, 2].map(|p| self.comps[p].iter().zip(&other.comps[p]).map(|(a, b)| a + b).collect());
        Self { comps }
    }

    /// Mean photon number of the bosonic mode.
    pub fn mean_photon_sc(&self) -> f64 {
        let num: f64 = self.comps.iter().flat_map(|c| c.iter().enumerate()).map(|(n, a)| n as f64 * a.norm_sqr()).sum();
        num / self.norm_sqr()
    }

    /// Probability that the polarization rail holds a photon.
    pub fn photon_probability(&self) -> f64 {
        let p: f64 = self.comps[1..].iter().flat_map(|c| c.iter()).map(|a| a.norm_sqr()).sum();
        p / self.norm_sqr()
    }

    /// Two-mode product-term form with modes `[pol_label, sc_label]`.
    pub fn to_product_terms(&self, pol_label: &str, sc_label: &str) -> ProductTermState {
        let mut s = ProductTermState::new(
            vec![3, self.cutoff() + 1],
            vec![String::from(pol_label), String::from(sc_label)],
        )
        .expect("two labels");
        for p in 0..3 {
            if self.comps[p].iter().any(|a| *a != C64::new(0.0, 0.0)) {
                let mut e = vec![C64::new(0.0, 0.0); 3];
                e[p] = C64::new(1.0, 0.0);
                s.push(C64::new(1.0, 0.0), vec![e, self.comps[p].clone()]).expect("dims");
            }
        }
        s
    }
}

/// H-SC codeword `|0_L⟩ = |+⟩|C⁺⟩` or `|1_L⟩ = |−⟩|C⁻⟩`.
pub fn hybrid_codeword(bit: u8, alpha: C64, xi: C64, cutoff: usize) -> Result<HybridState> {
    if bit > 1 {
        return Err(Error::InvalidArgument("bit must be 0 or 1"));
    }
    let c = squeezed_cat_state(alpha, xi, Parity::of_bit(bit), cutoff)?;
    Ok(HybridState::product(&pol::logical(bit), &c))
}

/// Normalized `|H⟩|α_f,ξ⟩ + |V⟩|−α_f,ξ⟩`.
pub fn hybrid_entangled_state(alpha_f: C64, xi: C64, cutoff: usize) -> Result<HybridState> {
    let fam = DisplacedFamily::new(xi, cutoff, OperatorOptions::default());
    let plus = fam.displaced(alpha_f)?;
    let minus = fam.displaced(-alpha_f)?;
    HybridState::product(&pol::h(), &plus).plus(&HybridState::product(&pol::v(), &minus)).normalized()
}

/// `â|C±⟩ = c|C∓⟩ + d|C̃±⟩` with `d ≥ 0` and `|C̃±⟩` orthogonal to both codewords.
#[derive(Debug, Clone, PartialEq)]
pub struct LossDecomposition {
    /// `⟨C∓|â|C±⟩`.
    pub c: C64,
    /// Norm of the component outside the code space.
    pub d: C64,
    /// Unit vector `|C̃±⟩`, or the zero vector when `d` vanishes.
    pub error_component: FockVector,
}

/// Splits `â|C±_{α,ξ}⟩` into its code-space and error-space parts.
pub fn loss_decomposition(alpha: C64, xi: C64, parity: Parity, cutoff: usize) -> Result<LossDecomposition> {
    let fam = DisplacedFamily::new(xi, cutoff, OperatorOptions::default());
    let cw = fam.cat(alpha, parity)?;
    let other = fam.cat(alpha, parity.flip())?;
    let lowered = cw.annihilate();
    let c = other.inner(&lowered);
    let same = cw.inner(&lowered);
    let resid: Vec<C64> = lowered
        .amps()
        .iter()
        .zip(other.amps())
        .zip(cw.amps())
        .map(|((l, o), s)| l - c * o - same * s)
        .collect();
    let d = resid.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let error_component = if d > 1e-14 {
        FockVector::new(resid.into_iter().map(|a| a / d).collect())
    } else {
        FockVector::new(vec![C64::new(0.0, 0.0); cutoff + 1])
    };
    Ok(LossDecomposition { c, d: C64::new(d, 0.0), error_component })
}

/// `⟨n̂⟩` of `|C±_{α,ξ}⟩`.
pub fn mean_photon(alpha: f64, xi: f64, parity: Parity, cutoff: usize) -> Result<f64> {
    Ok(squeezed_cat_state(alpha.into(), xi.into(), parity, cutoff)?.mean_photon())
}

/// Real `α ≥ 0` with `⟨n̂⟩(|C±_{α,ξ}⟩) = nbar`, found by bisection on the
/// monotone map `α ↦ ⟨n̂⟩`.
pub fn amplitude_for_mean_photon(nbar: f64, xi: f64, parity: Parity, cutoff: usize) -> Result<f64> {
    amplitude_for_mean_photon_with(nbar, xi, parity, cutoff, OperatorOptions::default())
}

/// [`amplitude_for_mean_photon`] with explicit truncation options.
pub fn amplitude_for_mean_photon_with(
    nbar: f64,
    xi: f64,
    parity: Parity,
    cutoff: usize,
    opts: OperatorOptions,
) -> Result<f64> {
    let fam = DisplacedFamily::new(xi.into(), cutoff, opts);
    let lo0 = if parity == Parity::Even { 0.0 } else { 1e-6 };
    let mean = |a: f64| -> Result<f64> { Ok(fam.cat(C64::new(a, 0.0), parity)?.mean_photon()) };
    let floor = mean(lo0)?;
    if nbar < floor - 1e-12 {
        return Err(Error::InfeasibleTarget { target: nbar, floor });
    }
    if (nbar - floor).abs() <= 1e-12 {
        return Ok(lo0);
    }
    let mut lo = lo0;
    // Small steps keep the bracket from overshooting into amplitudes the
    // cutoff cannot hold.
    let mut hi = nbar.sqrt() + 0.1;
    while mean(hi)? < nbar {
        lo = hi;
        hi = hi * 1.2 + 0.1;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let m = mean(mid)?;
        if (m - nbar).abs() < 1e-13 {
            return Ok(mid);
        }
        if m < nbar {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Smallest cutoff `N ≤ max_cutoff` at which `|α,ξ⟩` leaves less than
/// `opts.tail_tol` of its probability above `N`. The same cutoff serves
/// `|−α,ξ⟩` and every cat built from the pair.
pub fn minimal_cutoff(alpha: C64, xi: C64, max_cutoff: usize, opts: OperatorOptions) -> Result<usize> {
    let fam = DisplacedFamily::new(xi, max_cutoff, opts);
    let v = fam.padded(alpha);
    let mut tail = 0.0;
    let mut best = None;
    for n in (0..v.len()).rev() {
        if tail > opts.tail_tol {
            break;
        }
        if n <= max_cutoff {
            best = Some(n);
        }
        tail += v[n].norm_sqr();
    }
    best.ok_or(Error::Truncation { tail, cutoff: max_cutoff, tol: opts.tail_tol })
}
