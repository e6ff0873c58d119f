use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::optics::{bc_verdict, bd_amplitudes, BdPattern, BellState, Verdict};
use crate::codes::{pol, CodeParams};
use crate::fock::{BeamSplitter, OperatorOptions, ProductTermState};
use crate::linalg::{inner, Matrix};
use crate::{Error, Result, C64};

/// How a logical qubit is carried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QubitKind {
    /// Polarization rail plus squeezed-cat mode, `|±⟩|C±⟩`.
    Hybrid,
    /// Squeezed-cat mode alone, `|C±⟩`.
    Cat,
    /// Ideal two-level reference qubit, used to purify inputs.
    Reference,
}

impl QubitKind {
    fn modes(self) -> usize {
        match self {
            QubitKind::Hybrid => 2,
            _ => 1,
        }
    }
}

/// Codeword factors for logical 0 and 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalBasis {
    pol: [[C64; 3]; 2],
    sc: [Vec<C64>; 2],
}

impl LogicalBasis {
    /// Codewords `|±⟩|C±_{α,ξ}⟩` at the given cutoff.
    pub fn new(alpha: f64, xi: f64, cutoff: usize) -> Result<Self> {
        Self::from_params(&CodeParams::hsc(alpha, xi, cutoff))
    }

    /// [`LogicalBasis::new`] with explicit truncation options.
    pub fn with_options(alpha: f64, xi: f64, cutoff: usize, opts: OperatorOptions) -> Result<Self> {
        Self::from_params(&CodeParams { opts, ..CodeParams::hsc(alpha, xi, cutoff) })
    }

    /// Codewords for explicit parameters.
    pub fn from_params(params: &CodeParams) -> Result<Self> {
        let (p, m) = params.sc_codewords()?;
        Ok(Self { pol: [pol::plus(), pol::minus()], sc: [p.into_amps(), m.into_amps()] })
    }

    /// Bosonic cutoff.
    pub fn cutoff(&self) -> usize {
        self.sc[0].len() - 1
    }

    /// Polarization factor of logical `bit`.
    pub fn pol(&self, bit: u8) -> &[C64; 3] {
        &self.pol[bit as usize]
    }

    /// Squeezed-cat factor of logical `bit`.
    pub fn sc(&self, bit: u8) -> &[C64] {
        &self.sc[bit as usize]
    }

    fn factors(&self, kind: QubitKind, bit: u8) -> Vec<Vec<C64>> {
        match kind {
            QubitKind::Hybrid => vec![self.pol[bit as usize].to_vec(), self.sc[bit as usize].clone()],
            QubitKind::Cat => vec![self.sc[bit as usize].clone()],
            QubitKind::Reference => {
                let mut e = vec![C64::new(0.0, 0.0); 2];
                e[bit as usize] = C64::new(1.0, 0.0);
                vec![e]
            }
        }
    }

    /// `⟨k_L|f⟩` for both `k`, given the factors of one qubit.
    fn project(&self, kind: QubitKind, factors: &[Vec<C64>]) -> [C64; 2] {
        match kind {
            QubitKind::Hybrid => {
                [0, 1].map(|k| inner(&self.pol[k], &factors[0]) * inner(&self.sc[k], &factors[1]))
            }
            QubitKind::Cat => [0, 1].map(|k| inner(&self.sc[k], &factors[0])),
            QubitKind::Reference => [factors[0][0], factors[0][1]],
        }
    }
}

/// Logical qubits held as an ensemble of pure branches, each a sum of
/// product terms. Branches arise from Kraus operators and are mutually
/// incoherent.
#[derive(Debug, Clone, PartialEq)]
pub struct Register {
    kinds: Vec<QubitKind>,
    branches: Vec<ProductTermState>,
}

fn labels_for(kinds: &[QubitKind]) -> Vec<String> {
    let mut out = Vec::new();
    for (i, k) in kinds.iter().enumerate() {
        match k {
            QubitKind::Hybrid => {
                out.push(format!("q{i}.pol"));
                out.push(format!("q{i}.sc"));
            }
            QubitKind::Cat => out.push(format!("q{i}.sc")),
            QubitKind::Reference => out.push(format!("q{i}.ref")),
        }
    }
    out
}

impl Register {
    /// `Σ c_b |b⟩_L`, normalized, from `(c_b, bits)` pairs.
    pub fn logical(kinds: &[QubitKind], basis: &LogicalBasis, amps: &[(C64, Vec<u8>)]) -> Result<Self> {
        let norm: f64 = amps.iter().map(|(c, _)| c.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 0.0 {
            return Err(Error::Degenerate("all logical amplitudes vanish"));
        }
        let dims: Vec<usize> = kinds
            .iter()
            .flat_map(|&k| basis.factors(k, 0).into_iter().map(|f| f.len()))
            .collect();
        let mut state = ProductTermState::new(dims, labels_for(kinds))?;
        for (c, bits) in amps {
            if bits.len() != kinds.len() || bits.iter().any(|&b| b > 1) {
                return Err(Error::InvalidArgument("one bit per qubit"));
            }
            let factors = kinds.iter().zip(bits).flat_map(|(&k, &b)| basis.factors(k, b)).collect();
            state.push(*c / norm, factors)?;
        }
        Ok(Self { kinds: kinds.to_vec(), branches: vec![state] })
    }

    /// Qubit kinds in order.
    pub fn kinds(&self) -> &[QubitKind] {
        &self.kinds
    }

    /// Incoherent branches.
    pub fn branches(&self) -> &[ProductTermState] {
        &self.branches
    }

    /// Total weight `Σ_b ⟨ψ_b|ψ_b⟩`.
    pub fn norm_sqr(&self) -> f64 {
        self.branches.iter().map(ProductTermState::norm_sqr).sum()
    }

    /// First mode of qubit `q`.
    pub fn first_mode(&self, q: usize) -> usize {
        self.kinds[..q].iter().map(|k| k.modes()).sum()
    }

    /// Joint register `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut kinds = self.kinds.clone();
        kinds.extend_from_slice(&other.kinds);
        let labels = labels_for(&kinds);
        let mut branches = Vec::with_capacity(self.branches.len() * other.branches.len());
        for a in &self.branches {
            for b in &other.branches {
                branches.push(a.tensor(b).relabeled(labels.clone()).expect("label count"));
            }
        }
        Self { kinds, branches }
    }

    /// Applies a channel to one mode of qubit `q` (`part` 0 is the
    /// polarization rail of a hybrid qubit, 1 its bosonic mode).
    pub fn apply_kraus(&self, q: usize, part: usize, ops: &[Matrix]) -> Result<Self> {
        let kind = *self.kinds.get(q).ok_or(Error::InvalidArgument("qubit index out of range"))?;
        if part >= kind.modes() || kind == QubitKind::Reference {
            return Err(Error::InvalidArgument("no such physical mode on this qubit"));
        }
        let mode = self.first_mode(q) + part;
        let mut branches = Vec::new();
        for b in &self.branches {
            for k in ops {
                let nb = b.apply_local(mode, k)?;
                if nb.norm_sqr() > 1e-30 {
                    branches.push(nb);
                }
            }
        }
        Ok(Self { kinds: self.kinds.clone(), branches })
    }

    /// Applies a logical single-qubit matrix to qubit `q`, re-expanding each
    /// term in the codeword basis. Exact when the qubit lies in the code space.
    pub fn apply_logical(&self, q: usize, basis: &LogicalBasis, u: &Matrix) -> Result<Self> {
        let kind = self.kinds[q];
        let m0 = self.first_mode(q);
        let nm = kind.modes();
        let mut branches = Vec::new();
        for b in &self.branches {
            let mut nb = ProductTermState::new(b.dims().to_vec(), b.labels().to_vec())?;
            for t in b.terms() {
                let c = basis.project(kind, &t.factors[m0..m0 + nm]);
                for k in 0..2u8 {
                    let amp = u[(k as usize, 0)] * c[0] + u[(k as usize, 1)] * c[1];
                    if amp == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let mut f = t.factors.clone();
                    for (j, g) in basis.factors(kind, k).into_iter().enumerate() {
                        f[m0 + j] = g;
                    }
                    nb.push(t.weight * amp, f)?;
                }
            }
            branches.push(nb);
        }
        Ok(Self { kinds: self.kinds.clone(), branches })
    }
}

/// Outcome of one Bell measurement inside [`Register::measure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairKey {
    /// Raw polarization-analyzer counts (absent for squeezed-cat qubits).
    pub bd: Option<BdPattern>,
    /// Squeezed-cat verdict; failed verdicts are never keyed.
    pub bc: BellState,
}

/// Unnormalized post-measurement states of the kept qubits in the logical
/// basis, one per joint outcome key.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyedStates {
    /// `σ_key`; its trace is the probability of the key.
    pub states: BTreeMap<Vec<PairKey>, Matrix>,
    /// Total weight of the measured register.
    pub total: f64,
}

impl KeyedStates {
    /// Probability of every keyed (non-failed) outcome.
    pub fn keyed_mass(&self) -> f64 {
        self.states.values().map(|m| m.trace().re).sum()
    }
}

struct PartialGram {
    key: PairKey,
    gram: Vec<C64>,
}

impl Register {
    /// Bell-measures each `(a, b)` qubit pair and reduces the qubits in
    /// `kept` (in that order) to the logical basis. Unkept, unmeasured
    /// qubits are not allowed.
    pub fn measure(&self, basis: &LogicalBasis, pairs: &[(usize, usize)], kept: &[usize]) -> Result<KeyedStates> {
        let n = self.kinds.len();
        let mut seen = vec![false; n];
        for &q in pairs.iter().flat_map(|(a, b)| [a, b]).chain(kept) {
            if q >= n || seen[q] {
                return Err(Error::InvalidArgument("each qubit must be measured or kept exactly once"));
            }
            seen[q] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument("each qubit must be measured or kept exactly once"));
        }
        for &(a, b) in pairs {
            let (ka, kb) = (self.kinds[a], self.kinds[b]);
            if ka != kb || ka == QubitKind::Reference {
                return Err(Error::InvalidArgument("Bell pairs need two hybrid or two squeezed-cat qubits"));
            }
        }
        let cut = self.branches.first().map_or(0, |b| {
            let q = pairs.first().map_or(0, |p| p.0);
            b.dims()[self.first_mode(q) + self.kinds[q].modes() - 1] - 1
        });
        let bs = BeamSplitter::half(2 * cut);
        let verdict_cells = verdict_cells(2 * cut + 1);

        let mut states: BTreeMap<Vec<PairKey>, Matrix> = BTreeMap::new();
        let mut total = 0.0;
        for branch in &self.branches {
            total += branch.norm_sqr();
            let terms = branch.terms();
            let nt = terms.len();
            let dim_l = 1usize << kept.len();
            let mut l = Matrix::zeros(dim_l, nt);
            for (t, term) in terms.iter().enumerate() {
                let mut v = vec![C64::new(1.0, 0.0)];
                for &q in kept {
                    let m0 = self.first_mode(q);
                    let c = basis.project(self.kinds[q], &term.factors[m0..m0 + self.kinds[q].modes()]);
                    v = v.iter().flat_map(|x| c.iter().map(move |y| x * y)).collect();
                }
                for (i, x) in v.into_iter().enumerate() {
                    l[(i, t)] = x;
                }
            }
            let mut partials: Vec<Vec<PartialGram>> = Vec::with_capacity(pairs.len());
            for &(a, b) in pairs {
                partials.push(self.pair_grams(terms, a, b, &bs, &verdict_cells)?);
            }
            let weights: Vec<C64> = terms.iter().map(|t| t.weight).collect();
            let mut base = vec![C64::new(0.0, 0.0); nt * nt];
            for i in 0..nt {
                for j in 0..nt {
                    base[i * nt + j] = weights[i] * weights[j].conj();
                }
            }
            let mut key = Vec::with_capacity(pairs.len());
            accumulate(&partials, 0, &base, nt, &l, &mut key, &mut states);
        }
        Ok(KeyedStates { states, total })
    }

    fn pair_grams(
        &self,
        terms: &[crate::fock::Term],
        a: usize,
        b: usize,
        bs: &BeamSplitter,
        cells: &[Vec<usize>; 4],
    ) -> Result<Vec<PartialGram>> {
        let nt = terms.len();
        let hybrid = self.kinds[a] == QubitKind::Hybrid;
        let (ma, mb) = (self.first_mode(a), self.first_mode(b));
        let sc_off = usize::from(hybrid);
        // Squeezed-cat amplitudes restricted to each identified verdict.
        let mut bc: [Vec<Vec<C64>>; 4] = Default::default();
        for term in terms {
            let out = bs.apply_product(&term.factors[ma + sc_off], &term.factors[mb + sc_off])?;
            for (v, idx) in cells.iter().enumerate() {
                bc[v].push(idx.iter().map(|&i| out.amps()[i]).collect());
            }
        }
        let mut bc_gram: [Vec<C64>; 4] = Default::default();
        for v in 0..4 {
            let mut g = vec![C64::new(0.0, 0.0); nt * nt];
            for i in 0..nt {
                for j in i..nt {
                    let x: C64 = bc[v][i].iter().zip(&bc[v][j]).map(|(p, q)| p * q.conj()).sum();
                    g[i * nt + j] = x;
                    g[j * nt + i] = x.conj();
                }
            }
            bc_gram[v] = g;
        }
        let mut bd: BTreeMap<Option<BdPattern>, Vec<C64>> = BTreeMap::new();
        if hybrid {
            for (t, term) in terms.iter().enumerate() {
                let u: [C64; 3] = term.factors[ma][..3].try_into().expect("rail dimension");
                let w: [C64; 3] = term.factors[mb][..3].try_into().expect("rail dimension");
                for (pat, amp) in bd_amplitudes(&u, &w) {
                    bd.entry(Some(pat)).or_insert_with(|| vec![C64::new(0.0, 0.0); nt])[t] += amp;
                }
            }
        } else {
            bd.insert(None, vec![C64::new(1.0, 0.0); nt]);
        }
        let mut out = Vec::new();
        for (pat, amps) in &bd {
            for (v, bell) in BellState::ALL.into_iter().enumerate() {
                let mut gram = vec![C64::new(0.0, 0.0); nt * nt];
                let mut diag = 0.0;
                for i in 0..nt {
                    for j in 0..nt {
                        gram[i * nt + j] = amps[i] * amps[j].conj() * bc_gram[v][i * nt + j];
                    }
                    diag += gram[i * nt + i].re;
                }
                if diag > 0.0 {
                    out.push(PartialGram { key: PairKey { bd: *pat, bc: bell }, gram });
                }
            }
        }
        Ok(out)
    }
}

/// Output cells `(n₅, n₆)` of a `d × d` grid grouped by identified verdict,
/// in [`BellState::ALL`] order.
fn verdict_cells(d: usize) -> [Vec<usize>; 4] {
    let mut cells: [Vec<usize>; 4] = Default::default();
    for n5 in 0..d {
        for n6 in 0..d {
            if let Verdict::Identified(b) = bc_verdict(n5, n6) {
                let v = BellState::ALL.iter().position(|x| *x == b).expect("listed");
                cells[v].push(n5 * d + n6);
            }
        }
    }
    cells
}

fn accumulate(
    partials: &[Vec<PartialGram>],
    depth: usize,
    coeff: &[C64],
    nt: usize,
    l: &Matrix,
    key: &mut Vec<PairKey>,
    states: &mut BTreeMap<Vec<PairKey>, Matrix>,
) {
    if depth == partials.len() {
        let dl = l.rows();
        // σ = L C L†
        let mut lc = Matrix::zeros(dl, nt);
        for r in 0..dl {
            for j in 0..nt {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..nt {
                    acc += l[(r, i)] * coeff[i * nt + j];
                }
                lc[(r, j)] = acc;
            }
        }
        let sigma = lc.matmul(&l.adjoint());
        if sigma.trace().re <= 0.0 {
            return;
        }
        match states.get_mut(key.as_slice()) {
            Some(s) => *s = s.add(&sigma),
            None => {
                states.insert(key.clone(), sigma);
            }
        }
        return;
    }
    for p in &partials[depth] {
        let c: Vec<C64> = coeff.iter().zip(&p.gram).map(|(a, b)| a * b).collect();
        let diag: f64 = (0..nt).map(|i| c[i * nt + i].re).sum();
        if diag <= 0.0 {
            continue;
        }
        key.push(p.key);
        accumulate(partials, depth + 1, &c, nt, l, key, states);
        key.pop();
    }
}
