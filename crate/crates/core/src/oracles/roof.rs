//! Upper estimates of the EOF by searching over ensemble decompositions.
//!
//! An ensemble `{ψ_i}` with `Σ|ψ_i><ψ_i| = ρ` is kept as unnormalised vectors.
//! Any unitary mixing of the vectors preserves that sum, so the search applies
//! random 2×2 unitaries to pairs and keeps those that lower `Σ p_i S(ρ_A,i)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;

use super::exact::reduced_entropy;
use crate::matops::{hermitian_eig, reduced_from_vector, BipartiteDims, BipartiteState};
use crate::{Error, Exec, Result, Seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoofOptions {
    /// Defaults to `m·n` when `None`.
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    pub iters: usize,
}

impl Default for RoofOptions {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            restarts: 8,
            iters: 2000,
        }
    }
}

const RANK_TOL: f64 = 1e-13;

fn weighted_entropy(v: &[Complex64], dims: BipartiteDims) -> f64 {
    let p: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if p <= 1e-300 {
        return 0.0;
    }
    let s = 1.0 / p.sqrt();
    let unit: Vec<Complex64> = v.iter().map(|z| z * s).collect();
    let h = reduced_entropy(&reduced_from_vector(&unit, dims)).expect("reduced state is Hermitian");
    p * h
}

fn mix(a: &[Complex64], b: &[Complex64], theta: f64, phi: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    let na = a.iter().zip(b).map(|(x, y)| x * c + y * e * s).collect();
    let nb = a.iter().zip(b).map(|(x, y)| -x * e.conj() * s + y * c).collect();
    (na, nb)
}

fn search(start: &[Vec<Complex64>], dims: BipartiteDims, restart: usize, iters: usize, seed: Seed) -> f64 {
    let mut rng = seed.stream(restart as u64);
    let k = start.len();
    let mut ens = start.to_vec();
    if restart > 0 {
        for _ in 0..k * k {
            let i = rng.random_range(0..k);
            let j = (i + rng.random_range(1..k)) % k;
            let (a, b) = mix(&ens[i], &ens[j], rng.random::<f64>() * FRAC_PI_2, rng.random::<f64>() * 2.0 * PI);
            ens[i] = a;
            ens[j] = b;
        }
    }
    let mut terms: Vec<f64> = ens.iter().map(|v| weighted_entropy(v, dims)).collect();
    let mut best: f64 = terms.iter().sum();
    let mut step = FRAC_PI_2;
    for _ in 0..iters {
        let i = rng.random_range(0..k);
        let j = (i + rng.random_range(1..k)) % k;
        let theta = step * (2.0 * rng.random::<f64>() - 1.0);
        let phi = rng.random::<f64>() * 2.0 * PI;
        let (a, b) = mix(&ens[i], &ens[j], theta, phi);
        let (ta, tb) = (weighted_entropy(&a, dims), weighted_entropy(&b, dims));
        let delta = ta + tb - terms[i] - terms[j];
        if delta < 0.0 {
            ens[i] = a;
            ens[j] = b;
            terms[i] = ta;
            terms[j] = tb;
            best = best.min(terms.iter().sum());
            step = (step * 1.5).min(FRAC_PI_2);
        } else {
            step = (step * 0.97).max(1e-4);
        }
    }
    best
}

pub fn convex_roof_upper(state: &BipartiteState, opts: RoofOptions, seed: Seed) -> Result<f64> {
    convex_roof_upper_with(state, opts, seed, Exec::default())
}

/// Best average entanglement found over restarts; restart 0 starts from the
/// eigen-ensemble, the others from random unitary mixtures of it.
pub fn convex_roof_upper_with(state: &BipartiteState, opts: RoofOptions, seed: Seed, exec: Exec) -> Result<f64> {
    let dims = state.dims();
    let eig = hermitian_eig(state.mat())?;
    let cols: Vec<Vec<Complex64>> = (0..dims.total())
        .filter(|&k| eig.values[k] > RANK_TOL)
        .map(|k| {
            let s = eig.values[k].sqrt();
            eig.vector(k).into_iter().map(|z| z * s).collect()
        })
        .collect();
    let rank = cols.len();
    let size = opts.ensemble_size.unwrap_or(dims.total());
    if size < rank {
        return Err(Error::EnsembleTooSmall { ensemble: size, rank });
    }
    let mut start = cols;
    start.resize(size.max(2), vec![Complex64::new(0.0, 0.0); dims.total()]);
    let restarts = opts.restarts.max(1);
    let vals = exec.map(restarts, |r| search(&start, dims, r, opts.iters, seed));
    Ok(vals.into_iter().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matops::{ComplexMatrix, StateVector};
    use crate::oracles::{pure_eof, random_pure, wootters_2qubit};

    fn quick() -> RoofOptions {
        RoofOptions {
            ensemble_size: None,
            restarts: 4,
            iters: 600,
        }
    }

    #[test]
    fn pure_state_is_exact() {
        let d = BipartiteDims::new(2, 3).unwrap();
        let psi = random_pure(d, Seed(12));
        let v = convex_roof_upper(&BipartiteState::from_pure(&psi), quick(), Seed(1)).unwrap();
        assert!((v - pure_eof(&psi).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn classically_correlated_state_is_separable() {
        let d = BipartiteDims::new(2, 2).unwrap();
        let s = BipartiteState::new(ComplexMatrix::from_real_diag(&[0.5, 0.0, 0.0, 0.5]), d).unwrap();
        assert!(convex_roof_upper(&s, quick(), Seed(1)).unwrap() <= 1e-4);
    }

    #[test]
    fn werner_state_near_wootters() {
        let d = BipartiteDims::new(2, 2).unwrap();
        let bell = ComplexMatrix::outer(StateVector::from_schmidt(d, &[0.5, 0.5]).unwrap().amplitudes());
        let p = 0.8;
        let mat = ComplexMatrix::from_fn(4, 4, |i, j| bell[(i, j)] * p + if i == j { (1.0 - p) / 4.0 } else { 0.0 });
        let s = BipartiteState::new(mat, d).unwrap();
        let w = wootters_2qubit(&s).unwrap();
        let opts = RoofOptions {
            ensemble_size: None,
            restarts: 8,
            iters: 3000,
        };
        let r = convex_roof_upper(&s, opts, Seed(5)).unwrap();
        assert!(r >= w - 1e-6 && r <= w + 0.01, "roof {r} vs wootters {w}");
    }

    #[test]
    fn monotone_in_iters_and_deterministic() {
        let d = BipartiteDims::new(2, 2).unwrap();
        let s = crate::oracles::random_state(d, crate::oracles::StateKind::MixedRank(3), Seed(4)).unwrap();
        let run = |iters, exec| {
            let o = RoofOptions {
                ensemble_size: None,
                restarts: 3,
                iters,
            };
            convex_roof_upper_with(&s, o, Seed(2), exec).unwrap()
        };
        let vals: Vec<f64> = [0, 50, 200, 800].iter().map(|&i| run(i, Exec::Parallel)).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]), "{vals:?}");
        assert_eq!(run(200, Exec::Sequential).to_bits(), vals[2].to_bits());
    }

    #[test]
    fn rejects_small_ensemble() {
        let d = BipartiteDims::new(2, 2).unwrap();
        let o = RoofOptions {
            ensemble_size: Some(2),
            ..quick()
        };
        let err = convex_roof_upper(&BipartiteState::maximally_mixed(d), o, Seed(0)).unwrap_err();
        assert_eq!(err, Error::EnsembleTooSmall { ensemble: 2, rank: 4 });
    }
}
