use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::codes::{hybrid_codeword, pol, HybridState};
use crate::fock::{displacement_generator, FockVector, OperatorOptions};
use crate::{Error, Result, C64};

/// `π/(4ξ)`, the displacement magnitude quoted for the X gate.
pub fn default_x_magnitude(xi: f64) -> Result<f64> {
    if xi == 0.0 {
        return Err(Error::InvalidArgument("default X magnitude diverges at xi = 0; pass a magnitude"));
    }
    Ok(PI / (4.0 * xi))
}

/// Logical X: `|H⟩ → |H⟩, |V⟩ → −|V⟩` (so `|+⟩ ↔ |−⟩`) on the rail and
/// `i·D(i·m)` on the bosonic mode.
pub fn apply_x_gate(state: &HybridState, magnitude: f64) -> Result<HybridState> {
    let opts = OperatorOptions::default();
    let cutoff = state.cutoff();
    let big = cutoff + 2 * opts.guard;
    let gen = displacement_generator(C64::new(0.0, magnitude), big);
    let mut comps: [Vec<C64>; 3] = Default::default();
    for p in 0..3 {
        let src = state.component(p);
        let sign = if p == pol::V { -1.0 } else { 1.0 };
        if src.iter().all(|a| *a == C64::new(0.0, 0.0)) {
            comps[p] = src.to_vec();
            continue;
        }
        let mut v = vec![C64::new(0.0, 0.0); big + 1];
        v[..=cutoff].copy_from_slice(src);
        let out = FockVector::new(gen.expm_apply(&v));
        let tail = out.tail_mass(cutoff);
        if tail > opts.tail_tol * out.norm_sqr() {
            return Err(Error::Truncation { tail, cutoff, tol: opts.tail_tol });
        }
        comps[p] = out.resized(cutoff).into_amps().into_iter().map(|a| a * C64::new(0.0, sign)).collect();
    }
    Ok(HybridState::new(comps))
}

/// `|⟨1_L|X|0_L⟩|²` for displacement magnitude `m`.
pub fn x_gate_fidelity(alpha: f64, xi: f64, cutoff: usize, magnitude: f64) -> Result<f64> {
    let (a, x) = (C64::new(alpha, 0.0), C64::new(xi, 0.0));
    let zero = hybrid_codeword(0, a, x, cutoff)?;
    let one = hybrid_codeword(1, a, x, cutoff)?;
    Ok(one.inner(&apply_x_gate(&zero, magnitude)?).norm_sqr())
}

/// Fidelity on each magnitude of `grid` and the best one (first on ties).
pub fn x_gate_magnitude_scan(alpha: f64, xi: f64, cutoff: usize, grid: &[f64]) -> Result<(f64, f64, Vec<(f64, f64)>)> {
    let mut rows = Vec::with_capacity(grid.len());
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for &m in grid {
        let f = x_gate_fidelity(alpha, xi, cutoff, m)?;
        if f > best.1 {
            best = (m, f);
        }
        rows.push((m, f));
    }
    if rows.is_empty() {
        return Err(Error::InvalidArgument("empty magnitude grid"));
    }
    Ok((best.0, best.1, rows))
}

/// `Z(θ)`: phase `e^{iθ}` on the `|−⟩` polarization component.
pub fn apply_z_gate(state: &HybridState, theta: f64) -> HybridState {
    let ph = C64::new(theta.cos(), theta.sin());
    // |+⟩⟨+| + e^{iθ}|−⟩⟨−| on the (H, V) rails.
    let a = (C64::new(1.0, 0.0) + ph) * 0.5;
    let b = (C64::new(1.0, 0.0) - ph) * 0.5;
    let (sh, sv) = (state.component(pol::H), state.component(pol::V));
    let nh = sh.iter().zip(sv).map(|(x, y)| a * x + b * y).collect();
    let nv = sh.iter().zip(sv).map(|(x, y)| b * x + a * y).collect();
    HybridState::new([state.component(pol::VAC).to_vec(), nh, nv])
}
