use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

#[allow(unused_imports)]
use num_traits::Float;

use super::engine::{KeyedStates, LogicalBasis, PairKey, QubitKind, Register};
use crate::linalg::{inner, Matrix};
use crate::{Error, Result, C64};

/// Gate realized by teleportation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    /// Identity: plain teleportation through a Bell pair.
    Identity,
    /// Hadamard.
    H,
    /// Controlled-NOT, control first.
    Cnot,
}

impl GateKind {
    /// Number of qubits the gate acts on.
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot => 2,
            _ => 1,
        }
    }

    /// Logical matrix.
    pub fn matrix(self) -> Matrix {
        let c = |x: f64| C64::new(x, 0.0);
        match self {
            GateKind::Identity => Matrix::identity(2),
            GateKind::H => Matrix::from_rows(2, 2, vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)]),
            GateKind::Cnot => Matrix::from_fn(4, 4, |r, col| {
                let target = if col >= 2 { col ^ 1 } else { col };
                if r == target {
                    c(1.0)
                } else {
                    c(0.0)
                }
            }),
        }
    }
}

/// Entangled resource consumed by gate teleportation.
#[derive(Debug, Clone, PartialEq)]
pub struct AncillaResource {
    kind: GateKind,
    register: Register,
}

/// Logical amplitudes of `(I ⊗ G)` applied to `|Φ⁺⟩^{⊗k}` with qubits
/// ordered `(a₁, b₁, a₂, b₂, …)`, where `G` acts on the `b` qubits.
fn choi_amplitudes(kind: GateKind) -> Vec<C64> {
    let k = kind.arity();
    let g = kind.matrix();
    let n = 2 * k;
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    let norm = (1u32 << k) as f64;
    for a in 0..(1usize << k) {
        // Column `a` of G gives the b-register amplitudes for a-register `a`.
        for b in 0..(1usize << k) {
            let v = g[(b, a)] / norm.sqrt();
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            let mut idx = 0usize;
            for j in 0..k {
                let abit = (a >> (k - 1 - j)) & 1;
                let bbit = (b >> (k - 1 - j)) & 1;
                idx = (idx << 2) | (abit << 1) | bbit;
            }
            amps[idx] += v;
        }
    }
    amps
}

fn bits_of(idx: usize, n: usize) -> Vec<u8> {
    (0..n).map(|j| ((idx >> (n - 1 - j)) & 1) as u8).collect()
}

impl AncillaResource {
    /// Builds the resource for `kind` from exact codewords. The Hadamard
    /// resource is `(|0_L 0_L⟩ + |0_L 1_L⟩ + |1_L 0_L⟩ − |1_L 1_L⟩)/2`; the CNOT
    /// resource applies Hadamards to both qubits of the target pair of
    /// `(|0000⟩ + |0011⟩ + |1100⟩ − |1111⟩)/2`.
    pub fn new(kind: GateKind, encoding: QubitKind, basis: &LogicalBasis) -> Result<Self> {
        if encoding == QubitKind::Reference {
            return Err(Error::InvalidArgument("resources must be encoded"));
        }
        let amps = choi_amplitudes(kind);
        let n = 2 * kind.arity();
        let terms: Vec<(C64, Vec<u8>)> = amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 1e-15)
            .map(|(i, a)| (*a, bits_of(i, n)))
            .collect();
        let register = Register::logical(&vec![encoding; n], basis, &terms)?;
        Ok(Self { kind, register })
    }

    /// Gate realized by the resource.
    pub fn kind(&self) -> GateKind {
        self.kind
    }

    /// The resource register; qubits `2j` are measured, `2j + 1` carry the output.
    pub fn register(&self) -> &Register {
        &self.register
    }
}

/// Logical Pauli frame `I, X, Z, XZ` indexed `0..4`.
pub fn pauli(i: usize) -> Matrix {
    let c = |x: f64| C64::new(x, 0.0);
    match i {
        0 => Matrix::identity(2),
        1 => Matrix::from_rows(2, 2, vec![c(0.0), c(1.0), c(1.0), c(0.0)]),
        2 => Matrix::from_rows(2, 2, vec![c(1.0), c(0.0), c(0.0), c(-1.0)]),
        _ => Matrix::from_rows(2, 2, vec![c(0.0), c(-1.0), c(1.0), c(0.0)]),
    }
}

/// `I^{⊗n_keep} ⊗ P_{i₁} ⊗ … ⊗ P_{i_m}` for a frame index in base 4.
fn frame_matrix(n_keep: usize, n_out: usize, frame: usize) -> Matrix {
    let mut m = Matrix::identity(1 << n_keep);
    for j in 0..n_out {
        let p = (frame >> (2 * (n_out - 1 - j))) & 3;
        m = m.kron(&pauli(p));
    }
    m
}

/// Pauli frame applied after each keyed outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeTable {
    /// Frame index per key; keys absent from the table count as failures.
    pub entries: BTreeMap<Vec<PairKey>, usize>,
}

/// Result of a teleportation run.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportResult {
    /// Probability of outcomes the table accepts.
    pub success_probability: f64,
    /// `Σ_key ⟨ideal|σ_key|ideal⟩` after correction: the probability that an
    /// accepted outcome also delivers the ideal output.
    pub weighted_success: f64,
    /// `weighted_success / success_probability`.
    pub conditional_fidelity: f64,
    /// Corrected output averaged over accepted outcomes (logical basis,
    /// kept qubits first), trace one.
    pub output: Matrix,
    /// The table that was applied.
    pub table: DecodeTable,
}

fn expectation(sigma: &Matrix, v: &[C64]) -> f64 {
    inner(v, &sigma.mul_vec(v)).re
}

/// Chooses, for every key, the frame maximizing overlap with `ideal`. Keys
/// whose two best frames tie are left out.
pub fn derive_table(keyed: &KeyedStates, ideal: &[C64], n_keep: usize, n_out: usize) -> DecodeTable {
    let frames: Vec<Matrix> = (0..1usize << (2 * n_out)).map(|f| frame_matrix(n_keep, n_out, f)).collect();
    let mut entries = BTreeMap::new();
    for (key, sigma) in &keyed.states {
        let mut scores: Vec<(f64, usize)> = frames
            .iter()
            .enumerate()
            .map(|(i, c)| (expectation(&c.matmul(sigma).matmul(&c.adjoint()), ideal), i))
            .collect();
        scores.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite").then(a.1.cmp(&b.1)));
        let best = scores[0].0;
        if best <= 0.0 {
            continue;
        }
        if scores.len() > 1 && (best - scores[1].0).abs() <= 1e-12 * best {
            continue;
        }
        entries.insert(key.clone(), scores[0].1);
    }
    DecodeTable { entries }
}

/// Logical amplitudes of a single-branch register, qubits in order.
pub fn logical_amplitudes(reg: &Register, basis: &LogicalBasis) -> Result<Vec<C64>> {
    if reg.branches().len() != 1 {
        return Err(Error::InvalidArgument("logical amplitudes need a pure register"));
    }
    let kept: Vec<usize> = (0..reg.kinds().len()).collect();
    let keyed = reg.measure(basis, &[], &kept)?;
    let sigma = keyed.states.values().next().ok_or(Error::Degenerate("register outside the code space"))?;
    // σ = |v⟩⟨v|: read v from the column of the largest diagonal entry.
    let n = sigma.rows();
    let j = (0..n).max_by(|&a, &b| sigma[(a, a)].re.partial_cmp(&sigma[(b, b)].re).expect("finite")).expect("nonempty");
    let s = sigma[(j, j)].re.sqrt();
    Ok((0..n).map(|i| sigma[(i, j)] / s).collect())
}

/// Reorders amplitudes so the qubits listed in `order` come first, in that order.
fn permute(amps: &[C64], n: usize, order: &[usize]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); amps.len()];
    for (idx, a) in amps.iter().enumerate() {
        let bits = bits_of(idx, n);
        let new = order.iter().fold(0usize, |acc, &q| (acc << 1) | bits[q] as usize);
        out[new] = *a;
    }
    out
}

/// Teleports the `data` qubits of `input` through `ancilla`. The other input
/// qubits are kept untouched and precede the outputs in the result.
///
/// `ideal_input` holds the logical amplitudes the input is meant to carry
/// (before any noise), in input-qubit order. With `table = None` the frame
/// table is derived from this very run.
pub fn run_teleport(
    input: &Register,
    ideal_input: &[C64],
    data: &[usize],
    ancilla: &AncillaResource,
    basis: &LogicalBasis,
    table: Option<&DecodeTable>,
) -> Result<TeleportResult> {
    let kind = ancilla.kind;
    if data.len() != kind.arity() {
        return Err(Error::InvalidArgument("gate arity does not match the data qubits"));
    }
    let n_in = input.kinds().len();
    if ideal_input.len() != 1 << n_in {
        return Err(Error::DimensionMismatch("ideal input amplitudes"));
    }
    let refs: Vec<usize> = (0..n_in).filter(|q| !data.contains(q)).collect();
    let joint = input.tensor(&ancilla.register);
    let pairs: Vec<(usize, usize)> = data.iter().enumerate().map(|(j, &d)| (d, n_in + 2 * j)).collect();
    let mut kept = refs.clone();
    kept.extend((0..data.len()).map(|j| n_in + 2 * j + 1));
    let keyed = joint.measure(basis, &pairs, &kept)?;

    let mut order = refs.clone();
    order.extend_from_slice(data);
    let v = permute(ideal_input, n_in, &order);
    let gate = Matrix::identity(1 << refs.len()).kron(&kind.matrix());
    let ideal = gate.mul_vec(&v);

    let derived;
    let table = match table {
        Some(t) => t,
        None => {
            derived = derive_table(&keyed, &ideal, refs.len(), data.len());
            &derived
        }
    };
    let dim = 1usize << kept.len();
    let mut output = Matrix::zeros(dim, dim);
    let (mut identified, mut weighted) = (0.0, 0.0);
    for (key, sigma) in &keyed.states {
        let Some(&frame) = table.entries.get(key) else { continue };
        let c = frame_matrix(refs.len(), data.len(), frame);
        let corrected = c.matmul(sigma).matmul(&c.adjoint());
        identified += sigma.trace().re;
        weighted += expectation(&corrected, &ideal);
        output = output.add(&corrected);
    }
    let output = if identified > 0.0 { output.scale(C64::new(1.0 / identified, 0.0)) } else { output };
    let conditional_fidelity = if identified > 0.0 { weighted / identified } else { 0.0 };
    Ok(TeleportResult {
        success_probability: identified,
        weighted_success: weighted,
        conditional_fidelity,
        output,
        table: table.clone(),
    })
}

/// Input `Σ_b |b⟩_ref |b⟩_L / √(2^k)` with `k` reference qubits followed by
/// `k` encoded qubits.
pub fn choi_input(encoding: QubitKind, k: usize, basis: &LogicalBasis) -> Result<(Register, Vec<C64>)> {
    let mut kinds = vec![QubitKind::Reference; k];
    kinds.extend(vec![encoding; k]);
    let n = 2 * k;
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    let mut terms = Vec::new();
    for b in 0..(1usize << k) {
        let idx = (b << k) | b;
        amps[idx] = C64::new(1.0 / ((1u32 << k) as f64).sqrt(), 0.0);
        terms.push((amps[idx], bits_of(idx, n)));
    }
    Ok((Register::logical(&kinds, basis, &terms)?, amps))
}

/// Derives the frame table from a maximally entangled input and returns it
/// with the corresponding run.
pub fn derive_decoder(ancilla: &AncillaResource, encoding: QubitKind, basis: &LogicalBasis) -> Result<TeleportResult> {
    let k = ancilla.kind.arity();
    let (reg, amps) = choi_input(encoding, k, basis)?;
    let data: Vec<usize> = (k..2 * k).collect();
    run_teleport(&reg, &amps, &data, ancilla, basis, None)
}

/// Gate teleportation of the `data` qubits of a pure input, using the frame
/// table derived by [`derive_decoder`].
pub fn teleport_gate(
    input: &Register,
    data: &[usize],
    ancilla: &AncillaResource,
    basis: &LogicalBasis,
) -> Result<TeleportResult> {
    let encoding = input.kinds()[*data.first().ok_or(Error::InvalidArgument("no data qubits"))?];
    let choi = derive_decoder(ancilla, encoding, basis)?;
    let ideal = logical_amplitudes(input, basis)?;
    run_teleport(input, &ideal, data, ancilla, basis, Some(&choi.table))
}
