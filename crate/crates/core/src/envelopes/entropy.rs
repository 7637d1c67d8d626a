use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Probabilities below this are treated as zero inside entropies.
pub const ZERO_PROB: f64 = 1e-15;
const SUM_TOL: f64 = 1e-12;

/// `h(x) = -x log x`, with `h(0) = 0`.
#[inline]
pub fn h(x: f64) -> f64 {
    if x < ZERO_PROB {
        0.0
    } else {
        -x * x.ln()
    }
}

/// A probability vector (typically a Schmidt vector).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProbVector {
    probabilities: Vec<f64>,
}

impl ProbVector {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        if let Some(p) = probabilities.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!("entry {p} is negative or not finite")));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!("sum is {sum}")));
        }
        Ok(Self { probabilities })
    }

    /// Clamps negatives to zero and rescales to unit sum.
    pub fn normalized(raw: &[f64]) -> Result<Self> {
        let clamped: Vec<f64> = raw.iter().map(|p| p.max(0.0)).collect();
        let sum: f64 = clamped.iter().sum();
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::InvalidDistribution("no positive mass".into()));
        }
        Self::new(clamped.into_iter().map(|p| p / sum).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// `1 - Σ μ_i²`
    pub fn lambda(&self) -> f64 {
        1.0 - self.probabilities.iter().map(|p| p * p).sum::<f64>()
    }
}

/// Shannon entropy in nats.
pub fn shannon_entropy(p: &ProbVector) -> f64 {
    p.as_slice().iter().map(|&x| h(x)).sum()
}
