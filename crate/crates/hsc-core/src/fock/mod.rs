//! Truncated Fock-space states, operators and measurements.

mod beamsplitter;
mod density;
mod operators;
mod product;
mod state;

pub use beamsplitter::{beam_splitter_unitary, BeamSplitter};
pub use density::{fidelity_mixed, partial_trace, DensityMatrix};
pub use operators::{
    displacement_generator, displacement_operator, ladder_operators, squeeze_generator, squeeze_operator,
    two_mode_squeeze_generator, two_mode_squeeze_unitary, DenseOperator, Ladder, OperatorOptions,
};
pub use product::{ProductTermState, Term};
pub use state::{coherent_amplitudes, displaced_squeezed_vacuum, tensor_product, DenseState, FockVector, Projection};

/// Fidelity `|⟨a|b⟩|²` of two normalized pure states.
pub fn fidelity(a: &[crate::C64], b: &[crate::C64]) -> f64 {
    crate::linalg::inner(a, b).norm_sqr()
}
