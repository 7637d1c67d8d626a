//! Pure-state check of a pair of bound curves: for a Schmidt vector `μ` the
//! EOF is `H(μ)`, which must lie between `ε(λ)` and `η(λ)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::envelopes::{shannon_entropy, EnvelopeSet, ProbVector};
use crate::{Error, Exec, Result, Seed};

/// Slack in nats before a sample counts as a violation.
pub const VERIFY_SLACK: f64 = 1e-7;
const CHUNK: usize = 256;
const MAX_RANDOM_WITNESSES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub mu: ProbVector,
    pub lambda: f64,
    pub entropy: f64,
    pub epsilon: f64,
    pub eta: f64,
    /// `ε(λ) − H(μ)`; positive means the lower curve is above the entropy.
    pub lower_gap: f64,
    /// `H(μ) − η(λ)`; positive means the upper curve is below the entropy.
    pub upper_gap: f64,
    pub lower_violation: bool,
    pub upper_violation: bool,
    /// Whether the vector was supplied by the caller.
    pub supplied: bool,
}

impl WitnessRecord {
    pub fn evaluate(env: &EnvelopeSet, mu: ProbVector, supplied: bool) -> Self {
        let lambda = mu.lambda();
        let entropy = shannon_entropy(&mu);
        let epsilon = env.epsilon_at(lambda);
        let eta = env.eta_at(lambda);
        let lower_gap = epsilon - entropy;
        let upper_gap = entropy - eta;
        Self {
            mu,
            lambda,
            entropy,
            epsilon,
            eta,
            lower_gap,
            upper_gap,
            lower_violation: lower_gap > VERIFY_SLACK,
            upper_violation: upper_gap > VERIFY_SLACK,
            supplied,
        }
    }

    fn violates(&self) -> bool {
        self.lower_violation || self.upper_violation
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub m: usize,
    pub samples: usize,
    pub violations_lower: usize,
    pub violations_upper: usize,
    /// Largest of all lower and upper gaps; negative when every sample is
    /// strictly inside.
    pub worst_gap: f64,
    pub worst_lower_gap: f64,
    pub worst_upper_gap: f64,
    /// Supplied witnesses first, then up to 16 violating random samples.
    pub witnesses: Vec<WitnessRecord>,
}

impl VerificationReport {
    pub fn violations(&self) -> usize {
        self.violations_lower + self.violations_upper
    }
}

/// Random Schmidt vector with a random support and a spread of concentrations.
fn random_schmidt(rng: &mut impl Rng, m: usize) -> ProbVector {
    let k = rng.random_range(1..=m);
    let power = [1.0, 2.0, 4.0][rng.random_range(0..3)];
    let mut raw: Vec<f64> = (0..m)
        .map(|i| if i < k { (-rng.random::<f64>().max(1e-300).ln()).powf(power) } else { 0.0 })
        .collect();
    if raw.iter().all(|&v| v == 0.0) {
        raw[0] = 1.0;
    }
    ProbVector::normalized(&raw).expect("nonnegative and nonzero")
}

pub fn verify_envelopes(env: &EnvelopeSet, samples: usize, seed: Seed, extra_witnesses: &[ProbVector]) -> Result<VerificationReport> {
    verify_envelopes_with(env, samples, seed, extra_witnesses, Exec::default())
}

pub fn verify_envelopes_with(
    env: &EnvelopeSet,
    samples: usize,
    seed: Seed,
    extra_witnesses: &[ProbVector],
    exec: Exec,
) -> Result<VerificationReport> {
    let m = env.m;
    if let Some(w) = extra_witnesses.iter().find(|w| w.len() > m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: w.len(),
        });
    }
    let chunks = samples.div_ceil(CHUNK);
    let random: Vec<WitnessRecord> = exec
        .map(chunks, |c| {
            let mut rng = seed.stream(c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            (0..count)
                .map(|_| WitnessRecord::evaluate(env, random_schmidt(&mut rng, m), false))
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect();
    let supplied: Vec<WitnessRecord> = extra_witnesses
        .iter()
        .map(|w| WitnessRecord::evaluate(env, w.clone(), true))
        .collect();

    let all = supplied.iter().chain(&random);
    let mut report = VerificationReport {
        m,
        samples: random.len() + supplied.len(),
        violations_lower: 0,
        violations_upper: 0,
        worst_gap: f64::NEG_INFINITY,
        worst_lower_gap: f64::NEG_INFINITY,
        worst_upper_gap: f64::NEG_INFINITY,
        witnesses: Vec::new(),
    };
    for r in all {
        report.violations_lower += r.lower_violation as usize;
        report.violations_upper += r.upper_violation as usize;
        report.worst_lower_gap = report.worst_lower_gap.max(r.lower_gap);
        report.worst_upper_gap = report.worst_upper_gap.max(r.upper_gap);
    }
    report.worst_gap = report.worst_lower_gap.max(report.worst_upper_gap);
    report.witnesses = supplied;
    report
        .witnesses
        .extend(random.into_iter().filter(WitnessRecord::violates).take(MAX_RANDOM_WITNESSES));
    Ok(report)
}
