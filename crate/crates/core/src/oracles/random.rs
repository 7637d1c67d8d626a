use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::matops::{BipartiteDims, BipartiteState, ComplexMatrix, StateVector};
use crate::{Error, Result, Seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    HaarPure,
    /// `GG†/Tr(GG†)` with `G` a complex Gaussian matrix of width `r`.
    MixedRank(usize),
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

pub fn random_pure(dims: BipartiteDims, seed: Seed) -> StateVector {
    let mut rng = seed.stream(0);
    let amps = (0..dims.total()).map(|_| gaussian(&mut rng)).collect();
    StateVector::normalized(dims, amps).expect("gaussian vector is nonzero")
}

pub fn random_state(dims: BipartiteDims, kind: StateKind, seed: Seed) -> Result<BipartiteState> {
    match kind {
        StateKind::HaarPure => Ok(BipartiteState::from_pure(&random_pure(dims, seed))),
        StateKind::MixedRank(r) => {
            let d = dims.total();
            if r == 0 || r > d {
                return Err(Error::OutOfDomain(format!("rank {r} outside 1..={d}")));
            }
            let mut rng = seed.stream(0);
            let g = ComplexMatrix::from_fn(d, r, |_, _| gaussian(&mut rng));
            let gg = g.matmul(&g.adjoint())?;
            let tr = gg.trace().re;
            // exact Hermitian symmetry so validation sees only rounding in the spectrum
            let mat = ComplexMatrix::from_fn(d, d, |i, j| {
                if i == j {
                    Complex64::new(gg[(i, i)].re / tr, 0.0)
                } else if i < j {
                    gg[(i, j)] / tr
                } else {
                    gg[(j, i)].conj() / tr
                }
            });
            BipartiteState::new(mat, dims)
        }
    }
}
