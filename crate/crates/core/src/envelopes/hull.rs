use serde::{Deserialize, Serialize};

use super::{PiecewiseCurve, Segment};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HullDirection {
    /// Lower convex hull: the largest convex function below the samples.
    ConvexMinorant,
    /// Upper concave hull: the smallest concave function above the samples.
    ConcaveMajorant,
}

/// Indices of the hull vertices (monotone chain). Samples must be strictly
/// increasing in `x`; collinear points are dropped.
pub fn hull_indices(samples: &[(f64, f64)], direction: HullDirection) -> Result<Vec<usize>> {
    if samples.len() < 2 {
        return Err(Error::OutOfDomain("hull needs at least two samples".into()));
    }
    for (k, w) in samples.windows(2).enumerate() {
        if !(w[1].0 > w[0].0) {
            return Err(Error::UnsortedSamples { index: k + 1 });
        }
    }
    let sign = match direction {
        HullDirection::ConvexMinorant => 1.0,
        HullDirection::ConcaveMajorant => -1.0,
    };
    let mut idx: Vec<usize> = Vec::with_capacity(samples.len());
    for (k, &(bx, by)) in samples.iter().enumerate() {
        while idx.len() >= 2 {
            let (ox, oy) = samples[idx[idx.len() - 2]];
            let (ax, ay) = samples[idx[idx.len() - 1]];
            let cross = (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
            if sign * cross <= 0.0 {
                idx.pop();
            } else {
                break;
            }
        }
        idx.push(k);
    }
    Ok(idx)
}

/// Piecewise-linear hull through the hull vertices.
pub fn hull(samples: &[(f64, f64)], direction: HullDirection) -> Result<PiecewiseCurve> {
    let idx = hull_indices(samples, direction)?;
    let segments = idx
        .windows(2)
        .map(|w| {
            let (x0, y0) = samples[w[0]];
            let (x1, y1) = samples[w[1]];
            Segment::chord(x0, y0, x1, y1)
        })
        .collect();
    PiecewiseCurve::new(segments)
}
