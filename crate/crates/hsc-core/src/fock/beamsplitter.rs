use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::operators::DenseOperator;
use super::state::DenseState;
use crate::linalg::Matrix;
use crate::{Error, Result, C64};

/// Two-mode beam splitter of transmittance `t` in the real orthogonal
/// convention `â₁† → √t â₁† + √r â₂†`, `â₂† → −√r â₁† + √t â₂†`, `r = 1 − t`.
///
/// The unitary conserves total photon number, so it is stored as one real
/// orthogonal block per total photon number `N`. Block `N` is filled column
/// by column from block `N − 1` by applying the substituted creation
/// operators, which is exact at any truncation.
#[derive(Debug, Clone)]
pub struct BeamSplitter {
    t: f64,
    blocks: Vec<Vec<f64>>,
}

impl BeamSplitter {
    /// Builds the blocks for every total photon number up to `max_total`.
    pub fn new(t: f64, max_total: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) || t.is_nan() {
            return Err(Error::InvalidArgument("transmittance must lie in [0, 1]"));
        }
        let (st, sr) = (t.sqrt(), (1.0 - t).sqrt());
        let mut blocks: Vec<Vec<f64>> = Vec::with_capacity(max_total + 1);
        blocks.push(vec![1.0]);
        for total in 1..=max_total {
            let prev = &blocks[total - 1];
            let w = total + 1;
            let mut blk = vec![0.0; w * w];
            for n in 0..=total {
                // Column (n, total - n) is A†/√n applied to column (n-1, total-n),
                // or B†/√total applied to column (0, total-1) when n = 0.
                let (src, cx, cy, norm) = if n > 0 { (n - 1, st, sr, n) } else { (0, -sr, st, total) };
                let f = 1.0 / (norm as f64).sqrt();
                for k in 0..total {
                    let v = prev[src * total + k];
                    if v == 0.0 {
                        continue;
                    }
                    blk[n * w + k + 1] += f * cx * ((k + 1) as f64).sqrt() * v;
                    blk[n * w + k] += f * cy * ((total - k) as f64).sqrt() * v;
                }
            }
            blocks.push(blk);
        }
        Ok(Self { t, blocks })
    }

    /// Half beam splitter (`t = ½`).
    pub fn half(max_total: usize) -> Self {
        Self::new(0.5, max_total).expect("t = 1/2 is valid")
    }

    /// Transmittance.
    pub fn transmittance(&self) -> f64 {
        self.t
    }

    /// Largest total photon number covered.
    pub fn max_total(&self) -> usize {
        self.blocks.len() - 1
    }

    /// `⟨k,l|U|n,m⟩`.
    pub fn element(&self, (k, l): (usize, usize), (n, m): (usize, usize)) -> f64 {
        let total = n + m;
        if k + l != total || total > self.max_total() {
            return 0.0;
        }
        self.blocks[total][n * (total + 1) + k]
    }

    /// Applies the beam splitter to `|f⟩⊗|g⟩`; see [`BeamSplitter::apply`].
    pub fn apply_product(&self, f: &[C64], g: &[C64]) -> Result<DenseState> {
        let amps = f.iter().flat_map(|x| g.iter().map(move |y| x * y)).collect();
        self.apply(&DenseState::new(vec![f.len(), g.len()], amps)?)
    }

    /// Applies the beam splitter to a two-mode state without truncation:
    /// the output modes have dimension `N_max + 1` with `N_max` the largest
    /// total photon number present in the input.
    pub fn apply(&self, input: &DenseState) -> Result<DenseState> {
        let dims = input.dims();
        if dims.len() != 2 {
            return Err(Error::DimensionMismatch("beam splitter acts on two modes"));
        }
        let nmax = dims[0] + dims[1] - 2;
        if nmax > self.max_total() {
            return Err(Error::InvalidArgument("beam splitter built for too few photons"));
        }
        let d = nmax + 1;
        let mut out = vec![C64::new(0.0, 0.0); d * d];
        for n in 0..dims[0] {
            for m in 0..dims[1] {
                let a = input.amps()[n * dims[1] + m];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let total = n + m;
                let col = &self.blocks[total][n * (total + 1)..(n + 1) * (total + 1)];
                for (k, &u) in col.iter().enumerate() {
                    out[k * d + total - k] += a * u;
                }
            }
        }
        DenseState::new(vec![d, d], out)
    }
}

/// Dense two-mode beam-splitter matrix on `0..=cut_a` × `0..=cut_b`.
///
/// Entries are exact; the truncated matrix is unitary on every block of total
/// photon number `≤ min(cut_a, cut_b)`.
pub fn beam_splitter_unitary(t: f64, cut_a: usize, cut_b: usize) -> Result<DenseOperator> {
    let bs = BeamSplitter::new(t, cut_a + cut_b)?;
    let db = cut_b + 1;
    let m = Matrix::from_fn((cut_a + 1) * db, (cut_a + 1) * db, |r, c| {
        C64::new(bs.element((r / db, r % db), (c / db, c % db)), 0.0)
    });
    DenseOperator::new(vec![cut_a + 1, db], m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_photon_on_half_beam_splitter() {
        let bs = BeamSplitter::half(2);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((bs.element((1, 0), (1, 0)) - h).abs() < 1e-15);
        assert!((bs.element((0, 1), (1, 0)) - h).abs() < 1e-15);
        assert!((bs.element((1, 0), (0, 1)) + h).abs() < 1e-15);
        assert!((bs.element((0, 1), (0, 1)) - h).abs() < 1e-15);
    }

    #[test]
    fn hong_ou_mandel_dip() {
        let bs = BeamSplitter::half(2);
        assert!(bs.element((1, 1), (1, 1)).abs() < 1e-15);
        assert!((bs.element((2, 0), (1, 1)).abs() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn full_transmission_is_identity() {
        let u = beam_splitter_unitary(1.0, 4, 4).unwrap();
        assert!(u.matrix().sub(&Matrix::identity(25)).max_abs() < 1e-14);
        assert!(BeamSplitter::new(1.2, 2).is_err());
    }

    #[test]
    fn blocks_are_orthogonal() {
        let bs = BeamSplitter::new(0.3, 40);
        let bs = bs.unwrap();
        for total in [5usize, 20, 40] {
            let w = total + 1;
            let b = &bs.blocks[total];
            for i in 0..w {
                for j in 0..w {
                    let dot: f64 = (0..w).map(|k| b[i * w + k] * b[j * w + k]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-10, "block {total} ({i},{j}) = {dot}");
                }
            }
        }
    }
}
