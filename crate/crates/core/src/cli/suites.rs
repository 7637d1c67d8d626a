//! Named invariant suites run by `eof-bounds verify`.

use std::str::FromStr;

use serde::Serialize;

use crate::bounds::{eof_bounds, example_state, lambda_quantities};
use crate::envelopes::{build_envelopes, tangent_solve, Branch, EnvelopeSet, Mode, Segment, DEFAULT_GRID};
use crate::matops::{partial_trace, purity, two_copy_expectation, BipartiteDims, BipartiteState, Subsystem, TwoCopyOperatorId};
use crate::oracles::{convex_roof_upper_with, pure_eof, random_pure, random_state, RoofOptions, StateKind, VERIFY_SLACK};
use crate::shotsim::estimated_bounds;
use crate::{Error, Exec, Result, Seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    TwoCopy,
    Sandwich,
    PaperConst,
    Coverage,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::TwoCopy, Suite::Sandwich, Suite::PaperConst, Suite::Coverage];

    pub fn name(self) -> &'static str {
        match self {
            Suite::TwoCopy => "twocopy",
            Suite::Sandwich => "sandwich",
            Suite::PaperConst => "paperconst",
            Suite::Coverage => "coverage",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Parse {
                line: 0,
                column: 0,
                message: format!("unknown suite `{s}`; expected one of twocopy, sandwich, paperconst, coverage"),
            })
    }
}

/// One measured quantity and its acceptance rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// `|observed − expected| ≤ tolerance`.
    pub fn near(name: impl Into<String>, observed: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            observed,
            expected,
            tolerance,
            pass: (observed - expected).abs() <= tolerance,
        }
    }

    /// `observed ≤ limit`.
    pub fn at_most(name: impl Into<String>, observed: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            observed,
            expected: limit,
            tolerance: 0.0,
            pass: observed <= limit,
        }
    }

    /// `observed ≥ limit`.
    pub fn at_least(name: impl Into<String>, observed: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            observed,
            expected: limit,
            tolerance: 0.0,
            pass: observed >= limit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

pub fn run_suite(suite: Suite, seed: Seed) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::TwoCopy => twocopy(seed)?,
        Suite::Sandwich => sandwich(seed)?,
        Suite::PaperConst => paperconst()?,
        Suite::Coverage => coverage(seed)?,
    };
    Ok(SuiteReport {
        suite,
        seed: seed.0,
        passed: checks.iter().all(|c| c.pass),
        checks,
    })
}

const MIXED_DIMS: [(usize, usize); 3] = [(2, 2), (2, 3), (3, 3)];

fn twocopy(seed: Seed) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (t, (m, n)) in MIXED_DIMS.into_iter().enumerate() {
        let dims = BipartiteDims::new(m, n)?;
        let per_state: Vec<Result<[f64; 4]>> = Exec::default().map(200, |i| {
            let s = random_state(dims, StateKind::MixedRank(1 + i % dims.total()), seed.derive(t as u64).derive(i as u64))?;
            let p = purity(s.mat())?;
            let pa = purity(&partial_trace(&s, Subsystem::A))?;
            let pb = purity(&partial_trace(&s, Subsystem::B))?;
            let want = [2.0 * (p - pa), 2.0 * (p - pb), 2.0 * (1.0 - pa), 2.0 * (1.0 - pb)];
            let mut dev = [0.0; 4];
            for (k, op) in TwoCopyOperatorId::ALL.into_iter().enumerate() {
                dev[k] = (two_copy_expectation(&s, op)? - want[k]).abs();
            }
            Ok(dev)
        });
        let mut worst = [0.0f64; 4];
        for d in per_state {
            let d = d?;
            for k in 0..4 {
                worst[k] = worst[k].max(d[k]);
            }
        }
        for (k, op) in TwoCopyOperatorId::ALL.into_iter().enumerate() {
            checks.push(Check::at_most(format!("{op:?} max deviation, {m}x{n}, 200 states"), worst[k], 1e-9));
        }
    }
    Ok(checks)
}

fn pure_sandwich(env: &EnvelopeSet, m: usize, count: usize, seed: Seed) -> Result<usize> {
    let dims = BipartiteDims::new(m, m)?;
    let bad: Vec<Result<bool>> = Exec::default().map(count, |i| {
        let psi = random_pure(dims, seed.derive(i as u64));
        let s = BipartiteState::from_pure(&psi);
        let l = lambda_quantities(&s);
        let e = pure_eof(&psi)?;
        Ok(e < env.epsilon_at(l.lam_a) - VERIFY_SLACK || e > env.eta_at(l.lam_prime_a) + VERIFY_SLACK)
    });
    bad.into_iter().try_fold(0, |acc, b| Ok(acc + b? as usize))
}

fn sandwich(seed: Seed) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let envs = [2, 3].map(|m| build_envelopes(m, Mode::Oracle, DEFAULT_GRID));
    let [e2, e3] = envs;
    let (e2, e3) = (e2?, e3?);
    for (m, env) in [(3, &e3), (2, &e2)] {
        let v = pure_sandwich(env, m, 1000, seed.derive(m as u64))?;
        checks.push(Check::at_most(format!("pure {m}x{m} sandwich violations (1000 Haar states)"), v as f64, 0.0));
    }
    let roof = RoofOptions {
        ensemble_size: None,
        restarts: 2,
        iters: 200,
    };
    let results: Vec<Result<(bool, bool)>> = Exec::default().map(500, |i| {
        let (m, n) = MIXED_DIMS[i % 3];
        let dims = BipartiteDims::new(m, n)?;
        let sd = seed.derive(100).derive(i as u64);
        let rank = 1 + (sd.0 % dims.total() as u64) as usize;
        let s = random_state(dims, StateKind::MixedRank(rank), sd)?;
        let env = if m.min(n) == 2 { &e2 } else { &e3 };
        let (lo, hi) = eof_bounds(&s, env)?;
        // the outer loop is already parallel
        let r = convex_roof_upper_with(&s, roof, sd, Exec::Sequential)?;
        Ok((lo > hi + 1e-12, r < lo - 1e-6))
    });
    let (mut order, mut roof_bad) = (0, 0);
    for r in results {
        let (a, b) = r?;
        order += a as usize;
        roof_bad += b as usize;
    }
    checks.push(Check::at_most("mixed states with eof_lower > eof_upper (500)", order as f64, 0.0));
    checks.push(Check::at_most("mixed states with convex roof < eof_lower - 1e-6 (500)", roof_bad as f64, 0.0));
    Ok(checks)
}

fn line_slopes(curve: &crate::envelopes::PiecewiseCurve) -> Vec<f64> {
    curve
        .segments
        .iter()
        .filter_map(|s| match *s {
            Segment::Line { slope, .. } => Some(slope),
            _ => None,
        })
        .collect()
}

fn paperconst() -> Result<Vec<Check>> {
    let mut c = Vec::new();
    let f12 = Branch::new(1, 2)?.value_clamped(0.5);
    c.push(Check::near("F12(0.5)", f12, 0.868, 0.001));

    let e3 = build_envelopes(3, Mode::Paper, DEFAULT_GRID)?;
    let t3 = tangent_solve(3, 0.5, f12)?;
    c.push(Check::near("m=3 tangent slope", t3.slope, 1.65, 0.01));
    c.push(Check::near("m=3 tangent abscissa", t3.touch_x, 0.091, 0.002));
    let s3 = line_slopes(&e3.epsilon);
    c.push(Check::near("m=3 epsilon tangent-piece slope", s3[0], t3.slope, 1e-12));
    c.push(Check::near("m=3 epsilon third-piece slope", s3[1], 1.39, 0.01));
    c.push(Check::near("m=3 epsilon anchor value", e3.epsilon.eval(2.0 / 3.0)?, 1.099, 0.001));

    let e4 = build_envelopes(4, Mode::Paper, DEFAULT_GRID)?;
    let touch = e4.epsilon.segments[0].bounds().1;
    c.push(Check::near("m=4 tangent point", touch, 0.062, 0.002));
    c.push(Check::near("m=4 curve value at tangent point", e4.epsilon.eval(touch)?, 0.142, 0.002));
    let s4 = line_slopes(&e4.epsilon);
    c.push(Check::near("m=4 tangent slope", s4[0], 1.820, 0.01));
    c.push(Check::near("m=4 last slope", s4[1], 1.726, 0.01));

    let (mut vertex_dev, mut closed_dev) = (0.0f64, 0.0f64);
    for m in 2..=6 {
        let e = build_envelopes(m, Mode::Paper, DEFAULT_GRID)?;
        for i in 0..m {
            let x = i as f64 / (i + 1) as f64;
            vertex_dev = vertex_dev.max((e.eta.eval(x)? - ((i + 1) as f64).ln()).abs());
        }
        let dmax = e.domain_max();
        for k in 1..=10_000 {
            let x = dmax * k as f64 / 10_000.0;
            // k(k+1) log((k+1)/k) (x − (k−1)/k) + log k on ((k−1)/k, k/(k+1)]
            let j = (1..m).find(|&j| x <= j as f64 / (j + 1) as f64).unwrap_or(m - 1) as f64;
            let closed = j * (j + 1.0) * ((j + 1.0) / j).ln() * (x - (j - 1.0) / j) + j.ln();
            closed_dev = closed_dev.max((e.eta.eval(x)? - closed).abs());
        }
    }
    c.push(Check::at_most("eta vertices (i/(i+1), log(i+1)), m<=6, max deviation", vertex_dev, 1e-12));
    c.push(Check::at_most("eta closed form vs broken line, 1e4 grid, m<=6", closed_dev, 1e-12));
    Ok(c)
}

fn coverage(seed: Seed) -> Result<Vec<Check>> {
    const RUNS: usize = 100;
    const SHOTS: u64 = 1_000_000;
    const CONFIDENCE: f64 = 0.95;
    let state = example_state(0.1, 1.0)?;
    let env = build_envelopes(3, Mode::Oracle, DEFAULT_GRID)?;
    let (lo, hi) = eof_bounds(&state, &env)?;
    let want_hw = 2.0 * ((2.0 / ((1.0 - CONFIDENCE) / 3.0)).ln() / (2.0 * SHOTS as f64)).sqrt();
    let runs: Vec<Result<(bool, f64)>> = Exec::default().map(RUNS, |i| {
        let b = estimated_bounds(&state, SHOTS, CONFIDENCE, &env, seed.derive(i as u64))?;
        let inside = b.lower_interval.0 <= lo && lo <= b.lower_interval.1 && b.upper_interval.0 <= hi && hi <= b.upper_interval.1;
        let hw_dev = b.purities.iter().map(|e| (e.half_width - want_hw).abs()).fold(0.0, f64::max);
        Ok((inside, hw_dev))
    });
    let (mut covered, mut hw_dev) = (0usize, 0.0f64);
    for r in runs {
        let (inside, d) = r?;
        covered += inside as usize;
        hw_dev = hw_dev.max(d);
    }
    Ok(vec![
        Check::at_least("runs containing the exact-lambda bounds (of 100)", covered as f64, 92.0),
        Check::at_most("half-width deviation from the Hoeffding formula", hw_dev, 1e-15),
    ])
}
