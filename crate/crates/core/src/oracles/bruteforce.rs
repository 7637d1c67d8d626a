//! Entropy extremisation on `{μ ∈ simplex : 1 − Σμ² = λ}` without relying on
//! the branch analysis of the envelope module.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::envelopes::Extremum;
use crate::{Error, Exec, Result, Seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceOptions {
    pub samples: usize,
    pub refine_iters: usize,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        Self {
            samples: 20_000,
            refine_iters: 200,
        }
    }
}

const CHUNK: usize = 512;
const REFINE_TOP: usize = 8;

fn entropy(mu: &[f64]) -> f64 {
    mu.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum()
}

fn better(which: Extremum, a: f64, b: f64) -> bool {
    match which {
        Extremum::X => a > b,
        Extremum::Y => a < b,
    }
}

/// Two-valued critical points: `n1` entries `α`, `n2` entries `β`, all roots.
fn critical_values(m: usize, q: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for n1 in 1..=m {
        // uniform on n1 entries
        if (q - 1.0 / n1 as f64).abs() < 1e-12 {
            out.push((n1 as f64).ln());
        }
        for n2 in 1..=(m - n1) {
            let (a, b) = (n1 as f64, n2 as f64);
            // n1 α² + (1 − n1 α)²/n2 = q
            let qa = a * (a + b);
            let qb = -2.0 * a;
            let qc = 1.0 - q * b;
            let disc = qb * qb - 4.0 * qa * qc;
            if disc < -1e-12 {
                continue;
            }
            let sq = disc.max(0.0).sqrt();
            for alpha in [(-qb + sq) / (2.0 * qa), (-qb - sq) / (2.0 * qa)] {
                let beta = (1.0 - a * alpha) / b;
                if alpha < -1e-12 || beta < -1e-12 {
                    continue;
                }
                let mut mu = vec![alpha.max(0.0); n1];
                mu.extend(std::iter::repeat_n(beta.max(0.0), n2));
                out.push(entropy(&mu));
            }
        }
    }
    out
}

/// Random point on the purity shell restricted to a support of size `k`.
fn shell_sample(rng: &mut impl Rng, k: usize, q: f64) -> Option<Vec<f64>> {
    let r2 = q - 1.0 / k as f64;
    if r2 < 0.0 {
        return None;
    }
    let mut d: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
    let mean = d.iter().sum::<f64>() / k as f64;
    d.iter_mut().for_each(|x| *x -= mean);
    let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return None;
    }
    let r = r2.sqrt();
    let mu: Vec<f64> = d.iter().map(|x| 1.0 / k as f64 + r * x / norm).collect();
    mu.iter().all(|&p| p >= 0.0).then_some(mu)
}

/// Rotates `μ − center` in a random plane of the sum-zero subspace of its
/// support, accepting only feasible improvements.
fn refine(rng: &mut impl Rng, mu: &[f64], which: Extremum, iters: usize) -> f64 {
    let k = mu.len();
    let c = 1.0 / k as f64;
    let mut w: Vec<f64> = mu.iter().map(|p| p - c).collect();
    let r = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut best = entropy(mu);
    if k < 3 || r == 0.0 {
        return best;
    }
    let mut step = 0.5;
    for _ in 0..iters {
        let mut u: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
        let mean = u.iter().sum::<f64>() / k as f64;
        u.iter_mut().for_each(|x| *x -= mean);
        let proj = u.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / (r * r);
        u.iter_mut().zip(&w).for_each(|(a, b)| *a -= proj * b);
        let un = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if un == 0.0 {
            continue;
        }
        let theta = step * (2.0 * rng.random::<f64>() - 1.0);
        let (s, co) = theta.sin_cos();
        let cand: Vec<f64> = w.iter().zip(&u).map(|(a, b)| co * a + s * r * b / un).collect();
        let p: Vec<f64> = cand.iter().map(|x| c + x).collect();
        if p.iter().all(|&v| v >= 0.0) {
            let h = entropy(&p);
            if better(which, h, best) {
                best = h;
                w = cand;
                step = (step * 1.5).min(1.5);
                continue;
            }
        }
        step = (step * 0.95).max(1e-6);
    }
    best
}

pub fn entropy_extremum_bruteforce(m: usize, lambda: f64, which: Extremum, opts: BruteForceOptions, seed: Seed) -> Result<f64> {
    entropy_extremum_bruteforce_with(m, lambda, which, opts, seed, Exec::default())
}

/// `which = X` maximises, `which = Y` minimises.
pub fn entropy_extremum_bruteforce_with(
    m: usize,
    lambda: f64,
    which: Extremum,
    opts: BruteForceOptions,
    seed: Seed,
    exec: Exec,
) -> Result<f64> {
    let dmax = (m as f64 - 1.0) / m as f64;
    if m < 1 || !(lambda > 0.0 && lambda <= dmax + 1e-12) {
        return Err(Error::OutOfDomain(format!("λ = {lambda} infeasible for m = {m}")));
    }
    let q = 1.0 - lambda.min(dmax);
    let kmin = ((1.0 / q) - 1e-9).ceil().max(1.0) as usize;

    let mut best = match which {
        Extremum::X => f64::NEG_INFINITY,
        Extremum::Y => f64::INFINITY,
    };
    for v in critical_values(m, q) {
        if better(which, v, best) {
            best = v;
        }
    }

    let chunks = opts.samples.div_ceil(CHUNK);
    let found: Vec<Vec<(f64, Vec<f64>)>> = exec.map(chunks, |c| {
        let mut rng = seed.stream(c as u64);
        let count = CHUNK.min(opts.samples - c * CHUNK);
        (0..count)
            .filter_map(|_| {
                let k = rng.random_range(kmin.min(m)..=m);
                shell_sample(&mut rng, k, q).map(|mu| (entropy(&mu), mu))
            })
            .collect()
    });
    let mut pool: Vec<(f64, Vec<f64>)> = found.into_iter().flatten().collect();
    // stable sort keeps generation order among equal values
    pool.sort_by(|a, b| match which {
        Extremum::X => b.0.total_cmp(&a.0),
        Extremum::Y => a.0.total_cmp(&b.0),
    });
    pool.truncate(REFINE_TOP);
    let refined: Vec<f64> = exec.map(pool.len(), |j| {
        let mut rng = seed.derive(0x5eed).stream(j as u64);
        refine(&mut rng, &pool[j].1, which, opts.refine_iters)
    });
    for v in refined {
        if better(which, v, best) {
            best = v;
        }
    }
    if !best.is_finite() {
        return Err(Error::OutOfDomain(format!("no feasible point found at λ = {lambda}")));
    }
    Ok(best)
}
