//! Truncated Fock-space simulation of hybrid squeezed-cat (H-SC) qubits.
//!
//! The crate is `no_std` and only needs an allocator. It covers:
//!
//! * [`fock`]: dense single- and multi-mode states, ladder/displacement/squeeze
//!   operators, exact beam splitters, density matrices and a sum-of-products
//!   state representation for circuits too large to densify.
//! * [`codes`]: cat, squeezed-cat and hybrid codewords, plus the single-photon
//!   loss decomposition.
//! * [`generation`]: the linear-optics circuit that heralds hybrid entangled
//!   states, with its transmittance sweep.
//! * [`bellmeas`]: polarization, squeezed-cat and hybrid Bell measurements,
//!   optimal squeezing, single-qubit gates and gate teleportation.
//! * [`loss`]: the pure-loss channel in Kraus form and teleportation-based
//!   loss compensation.
//!
//! Every routine is a pure function of its inputs, so callers are free to
//! evaluate sweep points in parallel.

#![no_std]
#![warn(missing_docs)]

extern crate alloc;

pub mod bellmeas;
pub mod codes;
mod error;
pub mod fock;
pub mod generation;
pub mod linalg;
pub mod loss;
pub mod optimize;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Default bound on the probability mass allowed beyond the Fock cutoff.
pub const TAIL_TOL: f64 = 1e-10;

/// Default number of extra Fock levels used while exponentiating generators.
pub const GUARD: usize = 10;
