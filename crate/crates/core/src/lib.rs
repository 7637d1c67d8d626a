//! Measurable bounds on the entanglement of formation (EOF) of finite-dimensional
//! bipartite states.
//!
//! The crate is organised around a handful of modules:
//!
//! - [`matops`]: dense complex-matrix primitives for bipartite density matrices
//!   (partial trace and transpose, realignment, a Jacobi Hermitian eigensolver,
//!   trace norms and two-copy expectation values).
//! - [`envelopes`]: entropy-versus-purity extremal curves, the branch family
//!   `F_{n1,n2}`, and the convex minorant / concave majorant used as bound curves.
//! - [`bounds`]: assembly of EOF, concurrence and CAF bounds for a state.
//! - [`oracles`]: brute-force and exact reference computations used to certify
//!   the curves and bounds.
//! - [`shotsim`]: finite-shot swap-test simulation with Hoeffding intervals.
//! - [`cli`]: state file I/O, CSV exports and the verification suites behind the
//!   `eof-bounds` binary.
//!
//! All entropies are in nats unless a [`bounds::Units`] value says otherwise.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod cli;
pub mod envelopes;
mod error;
pub mod exec;
pub mod matops;
pub mod oracles;
pub mod rng;
pub mod shotsim;

pub use error::{Error, Result};
pub use exec::Exec;
pub use rng::Seed;
