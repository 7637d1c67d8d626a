//! Finite-shot swap-test estimates of `Tr ρ²`, `Tr ρ_A²`, `Tr ρ_B²` and the
//! resulting interval bounds on the EOF.
//!
//! A swap test on two copies returns the symmetric outcome with probability
//! `(1 + P)/2` for purity `P`. The success count of `N` independent shots is
//! drawn directly from `Binomial(N, (1 + P)/2)`. Intervals are Hoeffding
//! intervals; the total failure probability is split evenly over the three
//! purities.

use rand::Rng;
use rand_distr::Binomial;
use serde::{Deserialize, Serialize};

use crate::bounds::lambda_quantities;
use crate::envelopes::EnvelopeSet;
use crate::matops::BipartiteState;
use crate::{Error, Result, Seed};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotEstimate {
    pub point: f64,
    pub half_width: f64,
    pub shots: u64,
    pub confidence: f64,
}

impl ShotEstimate {
    /// Confidence interval intersected with `[0, 1]`.
    pub fn interval(&self) -> (f64, f64) {
        (
            (self.point - self.half_width).clamp(0.0, 1.0),
            (self.point + self.half_width).clamp(0.0, 1.0),
        )
    }
}

/// Half-width of the purity interval: the success fraction lies in `[0, 1]`
/// and the purity `2f − 1` has range 2.
pub fn hoeffding_half_width(shots: u64, confidence: f64) -> f64 {
    let delta = 1.0 - confidence;
    2.0 * ((2.0 / delta).ln() / (2.0 * shots as f64)).sqrt()
}

fn check(shots: u64, confidence: f64) -> Result<()> {
    if shots == 0 {
        return Err(Error::OutOfDomain("shots must be at least 1".into()));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::OutOfDomain(format!("confidence {confidence} outside (0, 1)")));
    }
    Ok(())
}

pub fn simulate_purity_shots(true_purity: f64, shots: u64, confidence: f64, seed: Seed) -> Result<ShotEstimate> {
    check(shots, confidence)?;
    if !(0.0..=1.0 + 1e-12).contains(&true_purity) {
        return Err(Error::OutOfDomain(format!("purity {true_purity} outside [0, 1]")));
    }
    let p = ((1.0 + true_purity) / 2.0).clamp(0.0, 1.0);
    let dist = Binomial::new(shots, p).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
    let hits = seed.stream(0).sample(dist);
    Ok(ShotEstimate {
        point: 2.0 * hits as f64 / shots as f64 - 1.0,
        half_width: hoeffding_half_width(shots, confidence),
        shots,
        confidence,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatedBounds {
    pub shots: u64,
    pub confidence: f64,
    /// Estimates of `Tr ρ²`, `Tr ρ_A²`, `Tr ρ_B²`.
    pub purities: [ShotEstimate; 3],
    pub lower_interval: (f64, f64),
    pub upper_interval: (f64, f64),
}

/// Maps purity intervals through the nondecreasing curves `ε` and `η`.
pub fn propagate(env: &EnvelopeSet, p: (f64, f64), pa: (f64, f64), pb: (f64, f64)) -> ((f64, f64), (f64, f64)) {
    let lam = |px: (f64, f64)| (p.0 - px.1, p.1 - px.0);
    let lam_prime = |px: (f64, f64)| (1.0 - px.1, 1.0 - px.0);
    let (la, lb) = (lam(pa), lam(pb));
    let (lpa, lpb) = (lam_prime(pa), lam_prime(pb));
    let lower = (
        env.epsilon_at(la.0).max(env.epsilon_at(lb.0)),
        env.epsilon_at(la.1).max(env.epsilon_at(lb.1)),
    );
    let upper = (
        env.eta_at(lpa.0).min(env.eta_at(lpb.0)),
        env.eta_at(lpa.1).min(env.eta_at(lpb.1)),
    );
    (lower, upper)
}

/// EOF-bound intervals that contain the exact bounds with probability at
/// least `confidence`.
pub fn estimated_bounds(
    state: &BipartiteState,
    shots_per_observable: u64,
    confidence: f64,
    env: &EnvelopeSet,
    seed: Seed,
) -> Result<EstimatedBounds> {
    check(shots_per_observable, confidence)?;
    let want = state.dims().envelope_dim();
    if env.m != want {
        return Err(Error::DimensionMismatch {
            expected: want,
            got: env.m,
        });
    }
    let l = lambda_quantities(state);
    let pa = 1.0 - l.lam_prime_a;
    let p = pa + l.lam_a;
    let pb = 1.0 - l.lam_prime_b;
    // per-observable confidence from the union bound
    let each = 1.0 - (1.0 - confidence) / 3.0;
    let mut est = [ShotEstimate {
        point: 0.0,
        half_width: 0.0,
        shots: 0,
        confidence: 0.0,
    }; 3];
    for (k, truth) in [p, pa, pb].into_iter().enumerate() {
        est[k] = simulate_purity_shots(truth.clamp(0.0, 1.0), shots_per_observable, each, seed.derive(k as u64))?;
    }
    let (lower_interval, upper_interval) = propagate(env, est[0].interval(), est[1].interval(), est[2].interval());
    Ok(EstimatedBounds {
        shots: shots_per_observable,
        confidence,
        purities: est,
        lower_interval,
        upper_interval,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::eof_bounds;
    use crate::envelopes::{build_envelopes, Mode};
    use crate::matops::{BipartiteDims, StateVector};
    use crate::oracles::{random_state, StateKind};

    #[test]
    fn pure_purity_is_exact() {
        for shots in [1, 10, 12345] {
            let e = simulate_purity_shots(1.0, shots, 0.95, Seed(shots)).unwrap();
            assert_eq!(e.point, 1.0);
        }
    }

    #[test]
    fn large_sample_limit() {
        let e = simulate_purity_shots(0.37, 100_000_000, 0.95, Seed(1)).unwrap();
        assert!((e.point - 0.37).abs() < 1e-3);
    }

    #[test]
    fn hoeffding_width_scaling() {
        let a = simulate_purity_shots(0.5, 10_000, 0.9, Seed(1)).unwrap();
        let b = simulate_purity_shots(0.5, 40_000, 0.9, Seed(1)).unwrap();
        assert!((a.half_width - 2.0 * b.half_width).abs() < 1e-15);
        let want = 2.0 * ((2.0f64 / 0.1).ln() / 20_000.0).sqrt();
        assert!((a.half_width - want).abs() < 1e-15);
    }

    #[test]
    fn single_estimate_coverage() {
        let covered = (0..100u64)
            .filter(|&i| {
                let e = simulate_purity_shots(0.5, 1_000_000, 0.95, Seed(40).derive(i)).unwrap();
                (e.point - 0.5).abs() <= e.half_width
            })
            .count();
        assert!(covered >= 95);
    }

    fn pure(m: usize, mu: &[f64]) -> BipartiteState {
        let d = BipartiteDims::new(m, m).unwrap();
        BipartiteState::from_pure(&StateVector::from_schmidt(d, mu).unwrap())
    }

    #[test]
    fn bell_product_and_mixed() {
        let e2 = build_envelopes(2, Mode::Oracle, 2001).unwrap();
        let b = estimated_bounds(&pure(2, &[0.5, 0.5]), 1_000_000, 0.95, &e2, Seed(3)).unwrap();
        let ln2 = 2f64.ln();
        assert!(b.lower_interval.0 <= ln2 && ln2 <= b.lower_interval.1 + 1e-15);
        assert!(b.lower_interval.1 - b.lower_interval.0 <= 0.05);
        let p = estimated_bounds(&pure(2, &[1.0]), 1_000_000, 0.95, &e2, Seed(3)).unwrap();
        assert_eq!(p.upper_interval.0, 0.0);
        let e3 = build_envelopes(3, Mode::Oracle, 2001).unwrap();
        let mm = BipartiteState::maximally_mixed(BipartiteDims::new(3, 3).unwrap());
        let r = estimated_bounds(&mm, 1_000_000, 0.95, &e3, Seed(3)).unwrap();
        assert_eq!(r.lower_interval, (0.0, 0.0));
        assert!(estimated_bounds(&mm, 10, 0.95, &e2, Seed(3)).is_err());
    }

    #[test]
    fn coverage_of_exact_bounds() {
        let env = build_envelopes(3, Mode::Oracle, 2001).unwrap();
        let s = random_state(BipartiteDims::new(3, 3).unwrap(), StateKind::MixedRank(2), Seed(8)).unwrap();
        let (lo, hi) = eof_bounds(&s, &env).unwrap();
        let covered = (0..200u64)
            .filter(|&i| {
                let b = estimated_bounds(&s, 100_000, 0.9, &env, Seed(i)).unwrap();
                b.lower_interval.0 <= lo && lo <= b.lower_interval.1 && b.upper_interval.0 <= hi && hi <= b.upper_interval.1
            })
            .count();
        assert!(covered as f64 / 200.0 >= 0.9 - 0.03, "{covered}");
    }

    #[test]
    fn propagation_is_monotone() {
        let env = build_envelopes(3, Mode::Oracle, 2001).unwrap();
        let (l1, u1) = propagate(&env, (0.8, 0.85), (0.5, 0.52), (0.55, 0.56));
        let (l2, u2) = propagate(&env, (0.78, 0.87), (0.49, 0.53), (0.54, 0.58));
        assert!(l2.0 <= l1.0 && l2.1 >= l1.1 && u2.0 <= u1.0 && u2.1 >= u1.1);
    }
}
