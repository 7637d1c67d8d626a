//! Construction of the bound curves `ε` (convex minorant of `Y`) and `η`
//! (concave majorant of `X`).

use serde::{Deserialize, Serialize};

use super::branch::frac;
use super::extremal::{oracle_extremum, tangent_touch};
use super::{hull_indices, tangent_solve, Branch, Extremum, HullDirection, Mode, PiecewiseCurve, Segment};
use crate::{Error, Exec, Result};

/// Largest supported envelope dimension.
pub const MAX_ENVELOPE_DIM: usize = 16;
/// Default number of uniform grid points for oracle hulls.
pub const DEFAULT_GRID: usize = 10001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSet {
    pub m: usize,
    pub mode: Mode,
    /// Upper bound curve.
    pub eta: PiecewiseCurve,
    /// Lower bound curve.
    pub epsilon: PiecewiseCurve,
}

impl EnvelopeSet {
    pub fn domain_max(&self) -> f64 {
        (self.m - 1) as f64 / self.m as f64
    }

    /// `ε(λ)` with clamping outside the domain.
    pub fn epsilon_at(&self, lambda: f64) -> f64 {
        self.epsilon.eval_clamped(lambda)
    }

    /// `η(λ)` with clamping outside the domain.
    pub fn eta_at(&self, lambda: f64) -> f64 {
        self.eta.eval_clamped(lambda)
    }
}

pub fn build_envelopes(m: usize, mode: Mode, grid: usize) -> Result<EnvelopeSet> {
    build_envelopes_with(m, mode, grid, Exec::default())
}

pub fn build_envelopes_with(m: usize, mode: Mode, grid: usize, exec: Exec) -> Result<EnvelopeSet> {
    if !(2..=MAX_ENVELOPE_DIM).contains(&m) {
        return Err(Error::UnsupportedDims {
            m,
            n: m,
            reason: format!("envelope dimension must be in 2..={MAX_ENVELOPE_DIM}"),
        });
    }
    let (eta, epsilon) = match mode {
        Mode::Paper => (paper_eta(m)?, paper_epsilon(m)?),
        Mode::Oracle => {
            if grid < 2 {
                return Err(Error::OutOfDomain("grid needs at least two points".into()));
            }
            let xs = sample_abscissae(m, grid);
            (
                oracle_hull(m, &xs, Extremum::X, exec)?,
                oracle_hull(m, &xs, Extremum::Y, exec)?,
            )
        }
    };
    Ok(EnvelopeSet { m, mode, eta, epsilon })
}

/// Broken line through `(i/(i+1), log(i+1))`, `i = 0..m-1`.
fn paper_eta(m: usize) -> Result<PiecewiseCurve> {
    let pts: Vec<(f64, f64)> = (0..m)
        .map(|i| (i as f64 / (i + 1) as f64, ((i + 1) as f64).ln()))
        .collect();
    PiecewiseCurve::new(pts.windows(2).map(|w| Segment::chord(w[0].0, w[0].1, w[1].0, w[1].1)).collect())
}

/// `F11` up to the tangent point, the tangent line up to the anchor
/// `((m-2)/(m-1), F_{1,m-1}((m-2)/(m-1)))`, then the chord to `((m-1)/m, log m)`.
/// For `m = 2` the anchor is the endpoint itself and `ε = F11`.
fn paper_epsilon(m: usize) -> Result<PiecewiseCurve> {
    let f11 = Branch { n1: 1, n2: 1 };
    let dmax = (m - 1) as f64 / m as f64;
    let log_m = (m as f64).ln();
    let (ax, ay) = if m == 2 {
        (dmax, log_m)
    } else {
        let ax = (m - 2) as f64 / (m - 1) as f64;
        (ax, Branch { n1: 1, n2: m - 1 }.value_clamped(ax))
    };
    let tan = tangent_solve(m, ax, ay)?;
    let mut segs = vec![Segment::BranchArc {
        branch: f11,
        x0: 0.0,
        x1: tan.touch_x,
    }];
    if tan.touch_x < ax {
        segs.push(Segment::Line {
            x0: tan.touch_x,
            x1: ax,
            slope: tan.slope,
            anchor_x: ax,
            anchor_y: ay,
        });
    }
    if ax < dmax {
        segs.push(Segment::chord(ax, ay, dmax, log_m));
    }
    PiecewiseCurve::new(segs)
}

/// Uniform grid on `[0, (m-1)/m]` plus the breakpoints `1 - 1/k`, where branch
/// domains begin and end.
fn sample_abscissae(m: usize, grid: usize) -> Vec<f64> {
    let dmax = (m - 1) as f64 / m as f64;
    let h = dmax / (grid - 1) as f64;
    let mut xs: Vec<f64> = (0..grid).map(|k| k as f64 * h).collect();
    xs[grid - 1] = dmax;
    for k in 2..m {
        xs.push(frac(k));
    }
    xs.sort_by(f64::total_cmp);
    let bps: Vec<f64> = (2..=m).map(frac).collect();
    let mut out: Vec<f64> = Vec::with_capacity(xs.len());
    for x in xs {
        if let Some(last) = out.last_mut() {
            if x - *last < 1e-6 * h {
                // keep the exact breakpoint over a grid point that nearly coincides
                if bps.contains(&x) {
                    *last = x;
                }
                continue;
            }
        }
        out.push(x);
    }
    out
}

fn is_breakpoint(m: usize, x: f64) -> bool {
    x == 0.0 || (2..=m).any(|k| x == frac(k))
}

struct Sample {
    x: f64,
    y: f64,
    ties: Vec<Branch>,
}

/// Hull of the oracle extremal curve, with runs of hull vertices that follow a
/// single branch replaced by the exact branch arc and bridge endpoints moved
/// to the exact tangent points.
fn oracle_hull(m: usize, xs: &[f64], which: Extremum, exec: Exec) -> Result<PiecewiseCurve> {
    let samples: Vec<Sample> = exec.map(xs.len(), |k| {
        let x = xs[k];
        let (y, ties) = oracle_extremum(m, x, which).expect("every lambda in the domain is feasible");
        Sample { x, y, ties }
    });
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.x, s.y)).collect();
    let direction = match which {
        Extremum::X => HullDirection::ConcaveMajorant,
        Extremum::Y => HullDirection::ConvexMinorant,
    };
    let idx = hull_indices(&pts, direction)?;

    let common = |a: &Sample, b: &Sample| a.ties.iter().copied().find(|t| b.ties.contains(t));
    // smooth vertex: a single branch and not a breakpoint, so its tangent can move
    let smooth = |k: usize| -> Option<Branch> {
        let s = &samples[k];
        (s.ties.len() == 1 && !is_breakpoint(m, s.x)).then(|| s.ties[0])
    };

    // junction abscissae entering / leaving each hull vertex
    let nv = idx.len();
    let mut in_x: Vec<f64> = idx.iter().map(|&k| samples[k].x).collect();
    let mut out_x = in_x.clone();
    let mut arc: Vec<Option<Branch>> = vec![None; nv - 1];

    for j in 0..nv - 1 {
        let (ka, kb) = (idx[j], idx[j + 1]);
        if kb == ka + 1 {
            if let Some(b) = common(&samples[ka], &samples[kb]) {
                arc[j] = Some(b);
                continue;
            }
        }
        // bridge: refine smooth endpoints to tangent points
        let bracket = |k: usize, b: Branch| {
            let (lo, hi) = b.domain();
            let left = samples[k.saturating_sub(1)].x.max(lo);
            let right = samples[(k + 1).min(samples.len() - 1)].x.min(hi);
            (left, right)
        };
        let (mut pa, mut pb) = ((samples[ka].x, samples[ka].y), (samples[kb].x, samples[kb].y));
        let (sa, sb) = (smooth(ka), smooth(kb));
        for _ in 0..50 {
            let (old_a, old_b) = (pa.0, pb.0);
            if let Some(b) = sa {
                let (lo, hi) = bracket(ka, b);
                if let Some(t) = tangent_touch(b, pb.0, pb.1, lo, hi) {
                    pa = (t, b.value_clamped(t));
                }
            }
            if let Some(b) = sb {
                let (lo, hi) = bracket(kb, b);
                if let Some(t) = tangent_touch(b, pa.0, pa.1, lo, hi) {
                    pb = (t, b.value_clamped(t));
                }
            }
            if (pa.0 - old_a).abs() < 1e-16 && (pb.0 - old_b).abs() < 1e-16 {
                break;
            }
        }
        out_x[j] = pa.0;
        in_x[j + 1] = pb.0;
    }

    for j in 0..nv {
        if in_x[j] > out_x[j] {
            let x = samples[idx[j]].x;
            in_x[j] = x;
            out_x[j] = x;
        }
    }

    let value_at = |j: usize, x: f64| -> f64 {
        let k = idx[j];
        if x == samples[k].x {
            samples[k].y
        } else {
            samples[k].ties[0].value_clamped(x)
        }
    };
    let mut segs = Vec::new();
    for j in 0..nv {
        // a vertex whose incoming and outgoing tangents touch at different points
        if j > 0 && j + 1 < nv && out_x[j] > in_x[j] {
            segs.push(Segment::BranchArc {
                branch: samples[idx[j]].ties[0],
                x0: in_x[j],
                x1: out_x[j],
            });
        }
        if j + 1 == nv {
            break;
        }
        let (x0, x1) = (out_x[j], in_x[j + 1]);
        match arc[j] {
            Some(branch) => segs.push(Segment::BranchArc { branch, x0, x1 }),
            None => segs.push(Segment::chord(x0, value_at(j, x0), x1, value_at(j + 1, x1))),
        }
    }
    PiecewiseCurve::new(segs)
}
