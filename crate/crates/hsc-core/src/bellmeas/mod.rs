//! Bell measurements, single-qubit gates and gate teleportation on H-SC
//! qubits.
//!
//! The polarization analyzer (`B_D`) and the squeezed-cat analyzer (`B_C`)
//! are simulated by exact projection. Their joint outcome key is the raw
//! polarization pattern together with the squeezed-cat verdict; each key is
//! decoded by maximum likelihood, which is how the hybrid measurement is
//! defined here.

mod engine;
mod gates;
mod optics;
mod teleport;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

pub use engine::{KeyedStates, LogicalBasis, PairKey, QubitKind, Register};
pub use gates::{apply_x_gate, apply_z_gate, default_x_magnitude, x_gate_fidelity, x_gate_magnitude_scan};
pub use optics::{
    bc_measure, bc_verdict, bd_amplitudes, bd_measure, bd_verdict, BdPattern, BellState, Letter, Outcome,
    OutcomeDistribution, Verdict,
};
pub use teleport::{
    choi_input, derive_decoder, derive_table, logical_amplitudes, pauli, run_teleport, teleport_gate,
    AncillaResource, DecodeTable, GateKind, TeleportResult,
};

use crate::codes::{amplitude_for_mean_photon_with, Parity};
use crate::fock::OperatorOptions;
use crate::optimize::{maximize_on_grid, GridMaximum};
use crate::{Result, C64};

/// Which code the Bell measurement acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Encoding {
    /// Hybrid qubits, measured with both analyzers.
    Hybrid,
    /// Squeezed-cat qubits, measured with `B_C` alone.
    SqueezedCat,
}

impl Encoding {
    /// Register qubit kind.
    pub fn kind(self) -> QubitKind {
        match self {
            Encoding::Hybrid => QubitKind::Hybrid,
            Encoding::SqueezedCat => QubitKind::Cat,
        }
    }
}

/// Maximum-likelihood decoding of a Bell measurement on the four logical
/// Bell states.
#[derive(Debug, Clone, PartialEq)]
pub struct BellReport {
    /// Average probability of a correct identification.
    pub success: f64,
    /// Average probability of a wrong identification.
    pub error: f64,
    /// Average probability of a rejected outcome (failed verdict or tie).
    pub failure: f64,
    /// Per key: likelihoods `P(key | Bell state)` in [`BellState::ALL`]
    /// order and the decoded state.
    pub keys: Vec<(Vec<PairKey>, [f64; 4], Option<BellState>)>,
}

/// Simulates the Bell measurement on each logical Bell state and decodes
/// every outcome key by maximum likelihood.
pub fn bell_report(encoding: Encoding, basis: &LogicalBasis) -> Result<BellReport> {
    let kinds = [encoding.kind(); 2];
    let mut like: BTreeMap<Vec<PairKey>, [f64; 4]> = BTreeMap::new();
    let mut totals = [0.0; 4];
    for (b, bell) in BellState::ALL.into_iter().enumerate() {
        let amps: Vec<(C64, Vec<u8>)> = bell
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != 0.0)
            .map(|(i, a)| (C64::new(*a, 0.0), vec![(i >> 1) as u8, (i & 1) as u8]))
            .collect();
        let reg = Register::logical(&kinds, basis, &amps)?;
        let keyed = reg.measure(basis, &[(0, 1)], &[])?;
        totals[b] = keyed.total;
        for (key, sigma) in keyed.states {
            like.entry(key).or_insert([0.0; 4])[b] += sigma[(0, 0)].re;
        }
    }
    let (mut success, mut error, mut keyed_mass) = (0.0, 0.0, 0.0);
    let mut keys = Vec::with_capacity(like.len());
    for (key, l) in like {
        let mut order = [0usize, 1, 2, 3];
        order.sort_by(|&a, &b| l[b].partial_cmp(&l[a]).expect("finite").then(a.cmp(&b)));
        let best = l[order[0]];
        let decoded = if best > 0.0 && (best - l[order[1]]).abs() > 1e-12 * best {
            Some(BellState::ALL[order[0]])
        } else {
            None
        };
        if let Some(d) = decoded {
            for (b, bell) in BellState::ALL.into_iter().enumerate() {
                keyed_mass += l[b] / 4.0;
                if bell == d {
                    success += l[b] / 4.0;
                } else {
                    error += l[b] / 4.0;
                }
            }
        }
        keys.push((key, l, decoded));
    }
    let total: f64 = totals.iter().sum::<f64>() / 4.0;
    Ok(BellReport { success, error, failure: total - keyed_mass, keys })
}

/// Average success probability of the hybrid Bell measurement on H-SC
/// qubits with amplitude `alpha` and squeezing `xi`.
pub fn hybrid_bell_success(alpha: f64, xi: f64, cutoff: usize) -> Result<f64> {
    Ok(bell_report(Encoding::Hybrid, &LogicalBasis::new(alpha, xi, cutoff)?)?.success)
}

/// Result of [`optimal_squeezing`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalSqueezing {
    /// Maximizing squeezing.
    pub xi_star: f64,
    /// Success probability at `xi_star`.
    pub p_star: f64,
    /// Amplitude realizing the target `n̄` at `xi_star`.
    pub alpha_star: f64,
    /// Grid points and their values (`None` where infeasible).
    pub grid: Vec<(f64, Option<f64>)>,
}

/// Bell success and amplitude at fixed mean photon number `nbar` of
/// `|C⁺_{α,ξ}⟩`.
pub fn bell_success_at_nbar(encoding: Encoding, nbar: f64, xi: f64, cutoff: usize) -> Result<(f64, f64)> {
    bell_success_at_nbar_with(encoding, nbar, xi, cutoff, OperatorOptions::default())
}

/// [`bell_success_at_nbar`] with explicit truncation options.
pub fn bell_success_at_nbar_with(
    encoding: Encoding,
    nbar: f64,
    xi: f64,
    cutoff: usize,
    opts: OperatorOptions,
) -> Result<(f64, f64)> {
    let alpha = amplitude_for_mean_photon_with(nbar, xi, Parity::Even, cutoff, opts)?;
    let basis = LogicalBasis::with_options(alpha, xi, cutoff, opts)?;
    Ok((bell_report(encoding, &basis)?.success, alpha))
}

/// Squeezing on `xi_grid` maximizing the hybrid Bell success at fixed `n̄`,
/// refined by a quadratic fit through the best grid point.
pub fn optimal_squeezing(nbar: f64, xi_grid: &[f64], cutoff: usize) -> Result<OptimalSqueezing> {
    optimal_squeezing_with(nbar, xi_grid, cutoff, OperatorOptions::default())
}

/// [`optimal_squeezing`] with explicit truncation options.
pub fn optimal_squeezing_with(nbar: f64, xi_grid: &[f64], cutoff: usize, opts: OperatorOptions) -> Result<OptimalSqueezing> {
    let f = |xi: f64| bell_success_at_nbar_with(Encoding::Hybrid, nbar, xi, cutoff, opts).map(|r| r.0);
    let GridMaximum { x_star, f_star, grid } = maximize_on_grid(xi_grid, f)?;
    let alpha_star = amplitude_for_mean_photon_with(nbar, x_star, Parity::Even, cutoff, opts)?;
    Ok(OptimalSqueezing { xi_star: x_star, p_star: f_star, alpha_star, grid })
}
