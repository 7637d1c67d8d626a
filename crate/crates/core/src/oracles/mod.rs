//! Reference computations used to certify the bound curves and bounds.

mod bruteforce;
mod exact;
mod random;
mod roof;
mod verify;

pub use bruteforce::{entropy_extremum_bruteforce, entropy_extremum_bruteforce_with, BruteForceOptions};
pub use exact::{pure_eof, reduced_entropy, wootters_2qubit, wootters_concurrence};
pub use random::{random_pure, random_state, StateKind};
pub use roof::{convex_roof_upper, convex_roof_upper_with, RoofOptions};
pub use verify::{verify_envelopes, verify_envelopes_with, VerificationReport, WitnessRecord, VERIFY_SLACK};
