//! Dense complex-matrix primitives for bipartite states.

mod eig;
mod matrix;
mod partial;
mod state;
mod twocopy;

pub use eig::{hermitian_eig, hermitian_eigenvalues, singular_values, trace_norm, HermitianEig};
pub use matrix::ComplexMatrix;
pub use partial::{
    partial_trace, partial_trace_raw, partial_transpose, partial_transpose_raw, purity, realign, realign_with,
    reduced_from_vector,
};
pub use state::{
    BipartiteDims, BipartiteState, StateVector, Subsystem, DEFAULT_MAX_TOTAL_DIM, HERMITIAN_TOL, NORM_TOL,
    PSD_TOL, TRACE_TOL,
};
pub use twocopy::{
    swap_projector, two_copy_expectation, two_copy_expectation_with, two_copy_operator, TwoCopyOperatorId,
    MAX_TWO_COPY_DIM,
};
