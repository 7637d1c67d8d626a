//! Entropy-versus-purity extremal curves and the bound envelopes built from them.

mod branch;
mod build;
mod curve;
mod entropy;
mod extremal;
mod hull;

pub use branch::{all_branches, branch_root, branch_slope, branch_solutions, Branch, BranchEval, Root};
pub use build::{build_envelopes, build_envelopes_with, EnvelopeSet, DEFAULT_GRID, MAX_ENVELOPE_DIM};
pub use curve::{curve_eval, PiecewiseCurve, Segment};
pub use entropy::{h, shannon_entropy, ProbVector, ZERO_PROB};
pub use extremal::{extremal_xy, tangent_solve, Extremum, Mode, Tangent};
pub use hull::{hull, hull_indices, HullDirection};
