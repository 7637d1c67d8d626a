//! Seeded, splittable random streams.
//!
//! A [`Seed`] names a family of independent ChaCha20 streams; stream `i` is
//! keyed by `(seed, i)`, so work split across threads draws the same numbers
//! no matter which worker runs which task.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed(pub u64);

impl Seed {
    /// The generator for task `index`.
    pub fn stream(self, index: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.0);
        rng.set_stream(index);
        rng
    }

    /// A derived seed, for handing a sub-family of streams to a nested routine.
    pub fn derive(self, tag: u64) -> Seed {
        // splitmix64 finaliser
        let mut z = self.0 ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Seed(z ^ (z >> 31))
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}
