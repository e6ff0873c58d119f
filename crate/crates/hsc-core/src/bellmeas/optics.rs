use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

#[allow(unused_imports)]
use num_traits::Float;

use crate::codes::pol;
use crate::fock::{BeamSplitter, DenseState};
use crate::{Error, Result, C64};

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellState {
    /// `(|00⟩ + |11⟩)/√2`.
    PhiPlus,
    /// `(|00⟩ − |11⟩)/√2`.
    PhiMinus,
    /// `(|01⟩ + |10⟩)/√2`.
    PsiPlus,
    /// `(|01⟩ − |10⟩)/√2`.
    PsiMinus,
}

impl BellState {
    /// All four, in declaration order.
    pub const ALL: [BellState; 4] = [BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus];

    /// Bell letter.
    pub fn letter(self) -> Letter {
        match self {
            BellState::PhiPlus | BellState::PhiMinus => Letter::Phi,
            _ => Letter::Psi,
        }
    }

    /// Amplitudes on `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn amplitudes(self) -> [f64; 4] {
        let h = FRAC_1_SQRT_2;
        match self {
            BellState::PhiPlus => [h, 0.0, 0.0, h],
            BellState::PhiMinus => [h, 0.0, 0.0, -h],
            BellState::PsiPlus => [0.0, h, h, 0.0],
            BellState::PsiMinus => [0.0, h, -h, 0.0],
        }
    }
}

/// `Φ` or `Ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// Even-parity pair.
    Phi,
    /// Odd-parity pair.
    Psi,
}

/// Classification of one detector pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// The pattern singles out one Bell state.
    Identified(BellState),
    /// The letter is known but the sign is not.
    LetterOnly(Letter),
    /// No Bell information.
    Failure,
}

/// One detector pattern with its probability and verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<P> {
    /// Raw detector counts.
    pub pattern: P,
    /// Probability of the pattern.
    pub probability: f64,
    /// Classification.
    pub verdict: Verdict,
}

/// Distribution over detector patterns, ordered by pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution<P> {
    /// Outcomes with nonzero probability.
    pub outcomes: Vec<Outcome<P>>,
}

impl<P> OutcomeDistribution<P> {
    /// Sum of all probabilities.
    pub fn total(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    /// Probability of the verdicts accepted by `pred`.
    pub fn mass(&self, pred: impl Fn(&Verdict) -> bool) -> f64 {
        self.outcomes.iter().filter(|o| pred(&o.verdict)).map(|o| o.probability).sum()
    }

    /// Probability of an `Identified` verdict.
    pub fn identified(&self) -> f64 {
        self.mass(|v| matches!(v, Verdict::Identified(_)))
    }
}

/// Photon counts at the four polarization-analyzer detectors
/// `[c_H, c_V, d_H, d_V]`.
pub type BdPattern = [u8; 4];

/// Detector pattern amplitudes for two polarization rails in the product
/// state `|u⟩ ⊗ |v⟩`.
///
/// The half beam splitter sends `â₁ₚ† → (ĉₚ† + d̂ₚ†)/√2` and
/// `â₂ₚ† → (−ĉₚ† + d̂ₚ†)/√2`; polarizing beam splitters then separate H and V.
pub fn bd_amplitudes(u: &[C64; 3], v: &[C64; 3]) -> Vec<(BdPattern, C64)> {
    let h = FRAC_1_SQRT_2;
    let mut out: BTreeMap<BdPattern, C64> = BTreeMap::new();
    for (p, &cu) in u.iter().enumerate() {
        if cu == C64::new(0.0, 0.0) {
            continue;
        }
        let first: &[(usize, f64)] = match p {
            pol::VAC => &[(usize::MAX, 1.0)],
            _ => &[(p - 1, h), (p + 1, h)],
        };
        for (q, &cv) in v.iter().enumerate() {
            if cv == C64::new(0.0, 0.0) {
                continue;
            }
            let second: &[(usize, f64)] = match q {
                pol::VAC => &[(usize::MAX, 1.0)],
                _ => &[(q - 1, -h), (q + 1, h)],
            };
            for &(d1, a1) in first {
                for &(d2, a2) in second {
                    let mut counts = [0u8; 4];
                    for d in [d1, d2] {
                        if d != usize::MAX {
                            counts[d] += 1;
                        }
                    }
                    let bunch = if counts.iter().any(|&c| c == 2) { core::f64::consts::SQRT_2 } else { 1.0 };
                    *out.entry(counts).or_insert(C64::new(0.0, 0.0)) += cu * cv * (a1 * a2 * bunch);
                }
            }
        }
    }
    out.into_iter().filter(|(_, a)| *a != C64::new(0.0, 0.0)).collect()
}

/// Analyzer verdict: coincidences between orthogonal polarizations reveal
/// `Ψ±`, two photons in one detector reveal only the letter `Φ`, and fewer
/// than two photons reveal nothing.
pub fn bd_verdict(p: &BdPattern) -> Verdict {
    let [ch, cv, dh, dv] = *p;
    if ch + cv + dh + dv != 2 {
        return Verdict::Failure;
    }
    match (ch, cv, dh, dv) {
        (1, 1, 0, 0) | (0, 0, 1, 1) => Verdict::Identified(BellState::PsiPlus),
        (1, 0, 0, 1) | (0, 1, 1, 0) => Verdict::Identified(BellState::PsiMinus),
        _ => Verdict::LetterOnly(Letter::Phi),
    }
}

/// Polarization Bell measurement of a joint rail state `amps[p][q]`, where
/// `p`, `q` index `{vacuum, H, V}` of the two rails.
pub fn bd_measure(amps: &[[C64; 3]; 3]) -> Result<OutcomeDistribution<BdPattern>> {
    let vac: f64 = (0..3).map(|k| amps[0][k].norm_sqr() + amps[k][0].norm_sqr()).sum();
    if vac > 1e-24 {
        return Err(Error::InvalidArgument("polarization analyzer needs one photon per rail"));
    }
    let mut acc: BTreeMap<BdPattern, C64> = BTreeMap::new();
    let mut norm = 0.0;
    for p in 1..3 {
        for q in 1..3 {
            norm += amps[p][q].norm_sqr();
            let mut u = [C64::new(0.0, 0.0); 3];
            let mut v = [C64::new(0.0, 0.0); 3];
            u[p] = C64::new(1.0, 0.0);
            v[q] = C64::new(1.0, 0.0);
            for (pat, a) in bd_amplitudes(&u, &v) {
                *acc.entry(pat).or_insert(C64::new(0.0, 0.0)) += amps[p][q] * a;
            }
        }
    }
    if norm <= 0.0 {
        return Err(Error::Degenerate("zero input state"));
    }
    let outcomes = acc
        .into_iter()
        .map(|(pattern, a)| Outcome { pattern, probability: a.norm_sqr() / norm, verdict: bd_verdict(&pattern) })
        .filter(|o| o.probability > 0.0)
        .collect();
    Ok(OutcomeDistribution { outcomes })
}

/// Squeezed-cat analyzer verdict for counts `(n₅, n₆)` behind the half beam
/// splitter: exactly one empty output is required; the lit output gives the
/// letter and the parity of its count gives the sign.
pub fn bc_verdict(n5: usize, n6: usize) -> Verdict {
    match (n5, n6) {
        (0, 0) => Verdict::Failure,
        (0, n) => Verdict::Identified(if n % 2 == 0 { BellState::PhiPlus } else { BellState::PsiPlus }),
        (n, 0) => Verdict::Identified(if n % 2 == 0 { BellState::PhiMinus } else { BellState::PsiMinus }),
        _ => Verdict::Failure,
    }
}

/// Squeezed-cat Bell measurement of a two-mode state: half beam splitter
/// then photon counting on both outputs.
pub fn bc_measure(state: &DenseState) -> Result<OutcomeDistribution<(usize, usize)>> {
    if state.dims().len() != 2 {
        return Err(Error::DimensionMismatch("squeezed-cat analyzer acts on two modes"));
    }
    let norm = state.norm_sqr();
    if norm <= 0.0 {
        return Err(Error::Degenerate("zero input state"));
    }
    let bs = BeamSplitter::half(state.dims()[0] + state.dims()[1] - 2);
    let out = bs.apply(state)?;
    let d = out.dims()[1];
    let outcomes = out
        .amps()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > 0.0)
        .map(|(i, a)| {
            let (n5, n6) = (i / d, i % d);
            Outcome { pattern: (n5, n6), probability: a.norm_sqr() / norm, verdict: bc_verdict(n5, n6) }
        })
        .collect();
    Ok(OutcomeDistribution { outcomes })
}
