//! Heralded generation of `|H⟩|α_f,ξ⟩ + |V⟩|−α_f,ξ⟩`.
//!
//! A squeezed cat `|C⁺_{α_i,ξ}⟩` is split on a beam splitter of transmittance
//! `t` against `|0,ξ⟩`. Mode B keeps `|±√t α_i,ξ⟩` and mode 4 carries
//! `|±√r α_i,ξ⟩`. One photon of a `|Ψ⁺⟩` pair (the partner stays in mode A)
//! is displaced by `D₃(√r α_i)` and interfered with mode 4 on a half beam
//! splitter. Detecting one photon in each of modes 5 and 6, with orthogonal
//! polarizations, heralds the target.
//!
//! The light in modes 3 and 4 is diagonally polarized. Writing every
//! polarization mode in the diagonal/antidiagonal basis leaves the classical
//! light in the diagonal rails, and the antidiagonal rails only ever hold
//! the injected photon, which makes the projection exact without a
//! four-rail Fock space.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

#[allow(unused_imports)]
use num_traits::Float;

use crate::codes::{amplitude_for_mean_photon_with, pol, DisplacedFamily, HybridState, Parity};
use crate::fock::{coherent_amplitudes, BeamSplitter, OperatorOptions};
use crate::{Error, Result, C64};

/// Detector pattern on modes 5 and 6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pattern {
    /// `|0_H 1_V⟩₅ |1_H 0_V⟩₆`.
    Pi,
    /// `|1_H 0_V⟩₅ |0_H 1_V⟩₆`, followed by a polarization bit flip on A.
    PiPrime,
    /// Either of the two, counted together.
    Both,
}

/// How `α_i` is tied to a target mean photon number in sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NbarVariant {
    /// The input cat `|C⁺_{α_i,ξ}⟩` has mean photon number `n̄`.
    #[default]
    Initial,
    /// The output cat `|C⁺_{√t α_i,ξ}⟩` has mean photon number `n̄`.
    Final,
}

/// Circuit parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationConfig {
    /// Transmittance of the variable beam splitter, in `(0, 1)`.
    pub t: f64,
    /// Input cat amplitude `α_i`.
    pub alpha_i: f64,
    /// Squeezing `ξ`.
    pub xi: f64,
    /// Fock cutoff of the output mode B.
    pub cutoff: usize,
    /// Pattern whose state is reported.
    pub pattern: Pattern,
    /// Truncation options.
    pub opts: OperatorOptions,
}

impl GenerationConfig {
    /// Configuration with `Pattern::Both` and default truncation options.
    pub fn new(t: f64, alpha_i: f64, xi: f64, cutoff: usize) -> Self {
        Self { t, alpha_i, xi, cutoff, pattern: Pattern::Both, opts: OperatorOptions::default() }
    }

    /// Output amplitude `α_f = √t α_i`.
    pub fn alpha_f(&self) -> f64 {
        self.t.sqrt() * self.alpha_i
    }

    fn validate(&self) -> Result<()> {
        if !(self.t > 0.0 && self.t < 1.0) {
            return Err(Error::InvalidArgument("transmittance must lie in (0, 1)"));
        }
        if !self.alpha_i.is_finite() || !self.xi.is_finite() {
            return Err(Error::InvalidArgument("alpha_i and xi must be finite"));
        }
        Ok(())
    }
}

/// Heralded output for one pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct Heralded {
    /// Pattern probability `⟨ψ|Π|ψ⟩`.
    pub probability: f64,
    /// Normalized, corrected state of modes A and B; `None` if the pattern
    /// never fires.
    pub state: Option<HybridState>,
    /// Fidelity of `state` to the target.
    pub fidelity: Option<f64>,
}

/// Result of [`run_generation`].
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationResult {
    /// Outcome for `Π`.
    pub pi: Heralded,
    /// Outcome for `Π′` after the bit-flip correction.
    pub pi_prime: Heralded,
    /// Pattern requested in the configuration.
    pub pattern: Pattern,
    /// Target `|H⟩|α_f,ξ⟩ + |V⟩|−α_f,ξ⟩`, normalized.
    pub target: HybridState,
}

impl GenerationResult {
    /// Probability of the requested pattern (`Π + Π′` for `Both`).
    pub fn success_probability(&self) -> f64 {
        match self.pattern {
            Pattern::Pi => self.pi.probability,
            Pattern::PiPrime => self.pi_prime.probability,
            Pattern::Both => self.pi.probability + self.pi_prime.probability,
        }
    }

    /// Fidelity of the requested pattern's state to the target. For `Both`
    /// the two heralded states are mixed with their probabilities.
    pub fn target_fidelity(&self) -> Option<f64> {
        match self.pattern {
            Pattern::Pi => self.pi.fidelity,
            Pattern::PiPrime => self.pi_prime.fidelity,
            Pattern::Both => {
                let (a, b) = (&self.pi, &self.pi_prime);
                let p = a.probability + b.probability;
                if p <= 0.0 {
                    return None;
                }
                Some((a.probability * a.fidelity.unwrap_or(0.0) + b.probability * b.fidelity.unwrap_or(0.0)) / p)
            }
        }
    }

    /// Heralded output state of the requested pattern (`Π` for `Both`).
    pub fn output_state(&self) -> Option<&HybridState> {
        match self.pattern {
            Pattern::PiPrime => self.pi_prime.state.as_ref(),
            _ => self.pi.state.as_ref(),
        }
    }
}

/// Amplitudes `⟨k,l|HBS|ψ⟩` for `k + l = 2` or less, from the first three
/// Fock levels of two input modes.
fn hbs_low(bs: &BeamSplitter, f: &[C64], g: &[C64], k: usize, l: usize) -> C64 {
    let total = k + l;
    let mut acc = C64::new(0.0, 0.0);
    for n in 0..=total {
        let m = total - n;
        if n < f.len() && m < g.len() {
            acc += f[n] * g[m] * bs.element((k, l), (n, m));
        }
    }
    acc
}

/// `D(γ)|1⟩ = (â† − γ*)D(γ)|0⟩`, first three levels.
fn displaced_photon(gamma: C64) -> Vec<C64> {
    let c = coherent_amplitudes(gamma, 3);
    let c = c.amps();
    (0..3).map(|n| (n as f64).sqrt() * if n > 0 { c[n - 1] } else { C64::new(0.0, 0.0) } - gamma.conj() * c[n]).collect()
}

/// Simulates the circuit for both detector patterns.
pub fn run_generation(config: &GenerationConfig) -> Result<GenerationResult> {
    config.validate()?;
    let (t, r) = (config.t, 1.0 - config.t);
    let fam = DisplacedFamily::new(C64::new(config.xi, 0.0), config.cutoff, config.opts);
    let g = C64::new(r.sqrt() * config.alpha_i, 0.0);
    let af = C64::new(t.sqrt() * config.alpha_i, 0.0);
    let bs = BeamSplitter::half(2);

    let norm_in = fam.cat_norm(C64::new(config.alpha_i, 0.0), Parity::Even);
    if norm_in < 1e-300 {
        return Err(Error::Degenerate("input cat vanishes"));
    }
    let photon = displaced_photon(g);
    let light = coherent_amplitudes(g, 2);
    let light = light.amps();
    let b_plus = fam.displaced(af)?;
    let b_minus = fam.displaced(-af)?;

    let zero = vec![C64::new(0.0, 0.0); config.cutoff + 1];
    // out[pattern][A polarization] as a vector on mode B.
    let mut out = [[zero.clone(), zero.clone()], [zero.clone(), zero]];
    for (s, b) in [(1.0, &b_plus), (-1.0, &b_minus)] {
        let m4 = fam.displaced(g * s)?;
        let m4 = &m4.amps()[..3.min(m4.amps().len())];
        let psi_d = hbs_low(&bs, &photon, m4, 1, 1);
        let split = (hbs_low(&bs, light, m4, 1, 0) - hbs_low(&bs, light, m4, 0, 1)) * FRAC_1_SQRT_2;
        // Photon H in mode 3 leaves V in A, and vice versa; a_H = (a_D + a_A)/√2.
        for (a_pol, c_a) in [(1usize, FRAC_1_SQRT_2), (0usize, -FRAC_1_SQRT_2)] {
            let d_part = psi_d * FRAC_1_SQRT_2;
            let a_part = split * c_a;
            let amps = [(d_part + a_part) * 0.5, (d_part - a_part) * 0.5];
            for (k, amp) in amps.into_iter().enumerate() {
                let w = amp * (FRAC_1_SQRT_2 / norm_in);
                for (o, x) in out[k][a_pol].iter_mut().zip(b.amps()) {
                    *o += w * x;
                }
            }
        }
    }

    let target = HybridState::product(&pol::h(), &b_plus).plus(&HybridState::product(&pol::v(), &b_minus)).normalized()?;
    let herald = |h: &[Vec<C64>; 2], flip: bool| -> Heralded {
        let (hc, vc) = if flip { (&h[1], &h[0]) } else { (&h[0], &h[1]) };
        let st = HybridState::new([vec![C64::new(0.0, 0.0); hc.len()], hc.clone(), vc.clone()]);
        let probability = st.norm_sqr();
        match st.normalized() {
            Ok(s) if probability > 0.0 => {
                let f = target.inner(&s).norm_sqr();
                Heralded { probability, state: Some(s), fidelity: Some(f.min(1.0)) }
            }
            _ => Heralded { probability, state: None, fidelity: None },
        }
    };
    let pi = herald(&out[0], false);
    let pi_prime = herald(&out[1], true);
    Ok(GenerationResult { pi, pi_prime, pattern: config.pattern, target })
}

/// One row of [`sweep_transmittance`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Transmittance.
    pub t: f64,
    /// Squeezing.
    pub xi: f64,
    /// Resolved input amplitude.
    pub alpha_i: f64,
    /// `P^Π`.
    pub p_pi: f64,
    /// `P^Π′`.
    pub p_piprime: f64,
    /// `P^Π + P^Π′`.
    pub p_total: f64,
    /// Fidelity of the `Π` output to the target.
    pub fidelity: f64,
}

/// Evaluates every `(t, ξ)` with `α_i` fixed by `nbar` through `variant`.
/// Infeasible or truncated points yield an `Err` in their slot.
pub fn sweep_transmittance(
    t_grid: &[f64],
    nbar: f64,
    xi_list: &[f64],
    cutoff: usize,
    variant: NbarVariant,
) -> Vec<Result<SweepRow>> {
    let opts = OperatorOptions::default();
    let mut rows = Vec::with_capacity(t_grid.len() * xi_list.len());
    for &xi in xi_list {
        let base = amplitude_for_mean_photon_with(nbar, xi, Parity::Even, cutoff, opts);
        for &t in t_grid {
            rows.push(base.clone().and_then(|a| sweep_point(t, xi, a, cutoff, variant)));
        }
    }
    rows
}

/// One sweep point given the amplitude that realizes `n̄`.
pub fn sweep_point(t: f64, xi: f64, alpha_nbar: f64, cutoff: usize, variant: NbarVariant) -> Result<SweepRow> {
    sweep_point_with(t, xi, alpha_nbar, cutoff, variant, OperatorOptions::default())
}

/// [`sweep_point`] with explicit truncation options.
pub fn sweep_point_with(
    t: f64,
    xi: f64,
    alpha_nbar: f64,
    cutoff: usize,
    variant: NbarVariant,
    opts: OperatorOptions,
) -> Result<SweepRow> {
    let alpha_i = match variant {
        NbarVariant::Initial => alpha_nbar,
        NbarVariant::Final => alpha_nbar / t.sqrt(),
    };
    let res = run_generation(&GenerationConfig { opts, ..GenerationConfig::new(t, alpha_i, xi, cutoff) })?;
    Ok(SweepRow {
        t,
        xi,
        alpha_i,
        p_pi: res.pi.probability,
        p_piprime: res.pi_prime.probability,
        p_total: res.pi.probability + res.pi_prime.probability,
        fidelity: res.pi.fidelity.unwrap_or(f64::NAN),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn displaced_photon_matches_definition() {
        let g = C64::new(0.7, 0.0);
        let v = displaced_photon(g);
        let c = coherent_amplitudes(g, 3);
        // D(g)|1⟩ has ⟨0|D(g)|1⟩ = −g* e^{−|g|²/2}.
        assert!((v[0] + g * c.amps()[0]).norm() < 1e-15);
        assert!((v[1] - (c.amps()[0] - g * c.amps()[1])).norm() < 1e-15);
    }

    #[test]
    fn rejects_edge_transmittance() {
        assert!(run_generation(&GenerationConfig::new(1.0, 1.0, 0.0, 20)).is_err());
        assert!(run_generation(&GenerationConfig::new(0.0, 1.0, 0.0, 20)).is_err());
    }
}
