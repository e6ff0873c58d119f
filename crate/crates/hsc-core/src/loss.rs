//! Pure photon loss and teleportation-based loss compensation.
//!
//! The master equation `dρ/dt = γ Σᵢ (âᵢρâᵢ† − ½{âᵢ†âᵢ, ρ})` integrates to
//! the Kraus map `E_k = √((1−η)^k/k!) η^{n̂/2} â^k` with `η = e^{−γt}`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::bellmeas::{choi_input, run_teleport, AncillaResource, GateKind, LogicalBasis, QubitKind, Register};
use crate::codes::{amplitude_for_mean_photon_with, pol, Parity};
use crate::fock::{DensityMatrix, OperatorOptions, ProductTermState};
use crate::linalg::Matrix;
use crate::optimize::maximize_on_grid;
use crate::{Error, Result, C64};

/// Loss strength and the modes it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct LossChannelParams {
    /// Transmissivity `η ∈ (0, 1]`.
    pub eta: f64,
    /// Affected mode indices.
    pub modes: Vec<usize>,
}

impl LossChannelParams {
    /// Checks `η ∈ (0, 1]`.
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::InvalidArgument("eta must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// Kraus operators and their completeness residual `‖Σ E†E − I‖_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    /// `E_0 … E_kmax`.
    pub ops: Vec<Matrix>,
    /// Completeness defect; zero up to roundoff once `kmax ≥ cutoff`.
    pub residual: f64,
}

fn check_eta(eta: f64) -> Result<()> {
    LossChannelParams { eta, modes: Vec::new() }.validate()
}

/// Pure-loss Kraus operators on `0..=cutoff`.
pub fn loss_kraus(eta: f64, cutoff: usize, kmax: usize) -> Result<KrausSet> {
    check_eta(eta)?;
    let d = cutoff + 1;
    if eta == 1.0 {
        return Ok(KrausSet { ops: vec![Matrix::identity(d)], residual: 0.0 });
    }
    let mut ops = Vec::with_capacity(kmax.min(cutoff) + 1);
    let mut pref = 1.0;
    for k in 0..=kmax.min(cutoff) {
        if k > 0 {
            pref *= (1.0 - eta) / k as f64;
        }
        // ⟨n−k| E_k |n⟩ = √(pref · n!/(n−k)!) · η^{(n−k)/2}
        let e = Matrix::from_fn(d, d, |r, c| {
            if c != r + k {
                return C64::new(0.0, 0.0);
            }
            let falling: f64 = ((r + 1)..=c).map(|j| j as f64).product();
            C64::new((pref * falling).sqrt() * eta.powf(r as f64 / 2.0), 0.0)
        });
        ops.push(e);
    }
    let mut sum = Matrix::zeros(d, d);
    for e in &ops {
        sum = sum.add(&e.adjoint().matmul(e));
    }
    let residual = sum.sub(&Matrix::identity(d)).max_abs();
    Ok(KrausSet { ops, residual })
}

/// Loss on a polarization rail space `{vacuum, H, V}`: the photon survives
/// with probability `η`, otherwise the rail is left empty and the
/// environment keeps its polarization.
pub fn pol_loss_kraus(eta: f64) -> Result<Vec<Matrix>> {
    check_eta(eta)?;
    let s = C64::new(eta.sqrt(), 0.0);
    let mut ops = vec![Matrix::diag(&[C64::new(1.0, 0.0), s, s])];
    if eta < 1.0 {
        let l = C64::new((1.0 - eta).sqrt(), 0.0);
        for p in [pol::H, pol::V] {
            let mut m = Matrix::zeros(3, 3);
            m[(pol::VAC, p)] = l;
            ops.push(m);
        }
    }
    Ok(ops)
}

/// Applies pure loss to each listed bosonic mode of a density matrix.
pub fn apply_loss(rho: &DensityMatrix, params: &LossChannelParams) -> Result<DensityMatrix> {
    params.validate()?;
    let mut out = rho.clone();
    for &m in &params.modes {
        let d = *rho.dims().get(m).ok_or(Error::InvalidArgument("mode index out of range"))?;
        out = out.apply_local_kraus(m, &loss_kraus(params.eta, d - 1, d - 1)?.ops)?;
    }
    Ok(out)
}

/// Purified loss on a product-term state: each returned branch is the
/// unnormalized state conditioned on one environment record, and the
/// branches together reproduce the mixed output.
pub fn apply_loss_purified(state: &ProductTermState, params: &LossChannelParams) -> Result<Vec<ProductTermState>> {
    params.validate()?;
    let mut branches = vec![state.clone()];
    for &m in &params.modes {
        let d = *state.dims().get(m).ok_or(Error::InvalidArgument("mode index out of range"))?;
        let ops = loss_kraus(params.eta, d - 1, d - 1)?.ops;
        let mut next = Vec::with_capacity(branches.len() * ops.len());
        for b in &branches {
            for e in &ops {
                let nb = b.apply_local(m, e)?;
                if nb.norm_sqr() > 0.0 {
                    next.push(nb);
                }
            }
        }
        branches = next;
    }
    Ok(branches)
}

/// Code protected by the compensation circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    /// Hybrid squeezed-cat qubits with the hybrid Bell measurement.
    Hsc,
    /// Squeezed-cat qubits with the squeezed-cat Bell measurement alone.
    Sc,
}

impl Code {
    fn kind(self) -> QubitKind {
        match self {
            Code::Hsc => QubitKind::Hybrid,
            Code::Sc => QubitKind::Cat,
        }
    }

    /// Lower-case name used in tables.
    pub fn name(self) -> &'static str {
        match self {
            Code::Hsc => "hsc",
            Code::Sc => "sc",
        }
    }
}

/// Result of [`run_compensation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Compensation {
    /// Probability that the teleportation heralds success and restores the
    /// input (entanglement-fidelity weighted).
    pub success_probability: f64,
    /// Probability of an accepted outcome.
    pub identified: f64,
    /// `success_probability / identified`.
    pub conditional_fidelity: f64,
}

/// Sends one logical qubit through loss `η` and teleports it through a
/// lossless Bell pair. The input is half of a logical Bell pair whose other
/// half is an ideal reference, so the figures of merit average over inputs.
/// The decoding table is derived at the same `η`.
pub fn run_compensation(code: Code, alpha: f64, xi: f64, eta: f64, cutoff: usize) -> Result<Compensation> {
    run_compensation_with(code, alpha, xi, eta, cutoff, OperatorOptions::default())
}

/// [`run_compensation`] with explicit truncation options.
pub fn run_compensation_with(
    code: Code,
    alpha: f64,
    xi: f64,
    eta: f64,
    cutoff: usize,
    opts: OperatorOptions,
) -> Result<Compensation> {
    check_eta(eta)?;
    let basis = LogicalBasis::with_options(alpha, xi, cutoff, opts)?;
    let kind = code.kind();
    let (mut reg, ideal): (Register, _) = choi_input(kind, 1, &basis)?;
    if eta < 1.0 {
        if code == Code::Hsc {
            reg = reg.apply_kraus(1, 0, &pol_loss_kraus(eta)?)?;
        }
        let part = usize::from(code == Code::Hsc);
        reg = reg.apply_kraus(1, part, &loss_kraus(eta, cutoff, cutoff)?.ops)?;
    }
    let ancilla = AncillaResource::new(GateKind::Identity, kind, &basis)?;
    let r = run_teleport(&reg, &ideal, &[1], &ancilla, &basis, None)?;
    Ok(Compensation {
        success_probability: r.weighted_success,
        identified: r.success_probability,
        conditional_fidelity: r.conditional_fidelity,
    })
}

/// One row of [`compensation_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct CompensationRow {
    /// Mean photon number of `|C⁺_{α,ξ}⟩`.
    pub nbar: f64,
    /// Code.
    pub code: Code,
    /// Transmissivity.
    pub eta: f64,
    /// Maximizing squeezing.
    pub xi_star: f64,
    /// Amplitude at `xi_star`.
    pub alpha: f64,
    /// Success probability at `xi_star`.
    pub p_success: f64,
}

/// Compensation success at fixed `n̄`, maximized over `xi_grid`.
pub fn compensation_optimum(code: Code, nbar: f64, eta: f64, xi_grid: &[f64], cutoff: usize) -> Result<CompensationRow> {
    compensation_optimum_with(code, nbar, eta, xi_grid, cutoff, OperatorOptions::default())
}

/// [`compensation_optimum`] with explicit truncation options.
pub fn compensation_optimum_with(
    code: Code,
    nbar: f64,
    eta: f64,
    xi_grid: &[f64],
    cutoff: usize,
    opts: OperatorOptions,
) -> Result<CompensationRow> {
    let f = |xi: f64| {
        let alpha = amplitude_for_mean_photon_with(nbar, xi, Parity::Even, cutoff, opts)?;
        Ok(run_compensation_with(code, alpha, xi, eta, cutoff, opts)?.success_probability)
    };
    let m = maximize_on_grid(xi_grid, f)?;
    let alpha = amplitude_for_mean_photon_with(nbar, m.x_star, Parity::Even, cutoff, opts)?;
    Ok(CompensationRow { nbar, code, eta, xi_star: m.x_star, alpha, p_success: m.f_star })
}

/// [`compensation_optimum`] over every `(n̄, code, η)`, in that nesting
/// order. Failing points are returned as errors in place.
pub fn compensation_sweep(
    nbar_grid: &[f64],
    etas: &[f64],
    codes: &[Code],
    xi_grid: &[f64],
    cutoff: usize,
) -> Vec<Result<CompensationRow>> {
    let mut out = Vec::new();
    for &nbar in nbar_grid {
        for &code in codes {
            for &eta in etas {
                out.push(compensation_optimum(code, nbar, eta, xi_grid, cutoff));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kraus_sets_are_complete() {
        for eta in [0.3, 0.9, 0.99] {
            assert!(loss_kraus(eta, 15, 15).unwrap().residual < 1e-12);
        }
        assert!(loss_kraus(0.5, 15, 3).unwrap().residual > 1e-3);
        let p = pol_loss_kraus(0.8).unwrap();
        let mut s = Matrix::zeros(3, 3);
        for e in &p {
            s = s.add(&e.adjoint().matmul(e));
        }
        assert!(s.sub(&Matrix::identity(3)).max_abs() < 1e-15);
    }

    #[test]
    fn eta_outside_range_is_rejected() {
        assert!(loss_kraus(0.0, 4, 4).is_err());
        assert!(loss_kraus(1.1, 4, 4).is_err());
    }
}
