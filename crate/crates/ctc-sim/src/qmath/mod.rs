//! Finite-dimensional complex linear algebra for density-matrix simulation:
//! tensor products, partial traces, spectral decompositions, entropies,
//! distances, and Haar sampling.
//!
//! All values are immutable after construction and every operation is a pure
//! function; random sources are the only stateful objects.

mod matrix;
mod random;
mod state;

pub use matrix::{
    embed_unitary, hadamard, pauli_x, pauli_y, pauli_z, C64, ComplexMatrix, UnitaryOperator,
    DEFAULT_TOL,
};
pub use random::{haar_pure_state, haar_unitary, random_density, seeded_rng, trial_rng};
pub use state::{
    fidelity_to_pure, is_psd, trace_distance, von_neumann_entropy, BellState, BlochVector,
    DensityOperator, PureState,
};

pub(crate) use matrix::from_spectrum;
pub(crate) use state::trace_distance_matrices;
