use serde::{Deserialize, Serialize};

use super::Branch;
use crate::{Error, Result};

const JOIN_TOL: f64 = 1e-9;

/// One piece of a [`PiecewiseCurve`], valid on `[x0, x1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Segment {
    /// `anchor_y + slope·(x - anchor_x)`
    Line {
        x0: f64,
        x1: f64,
        slope: f64,
        anchor_x: f64,
        anchor_y: f64,
    },
    /// The branch curve `F_{n1,n2}` itself.
    BranchArc { branch: Branch, x0: f64, x1: f64 },
}

impl Segment {
    /// Line through two points.
    pub fn chord(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Segment::Line {
            x0,
            x1,
            slope: (y1 - y0) / (x1 - x0),
            anchor_x: x0,
            anchor_y: y0,
        }
    }

    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            Segment::Line { x0, x1, .. } | Segment::BranchArc { x0, x1, .. } => (x0, x1),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Segment::Line {
                slope,
                anchor_x,
                anchor_y,
                ..
            } => anchor_y + slope * (x - anchor_x),
            Segment::BranchArc { branch, .. } => branch.value_clamped(x),
        }
    }
}

/// Contiguous piecewise curve on `[domain_min, domain_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseCurve {
    pub domain_min: f64,
    pub domain_max: f64,
    pub segments: Vec<Segment>,
}

impl PiecewiseCurve {
    /// Checks that segments are ordered, contiguous and continuous.
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let first = segments
            .first()
            .ok_or_else(|| Error::OutOfDomain("curve needs at least one segment".into()))?;
        let last = segments.last().expect("non-empty");
        for (k, seg) in segments.iter().enumerate() {
            let (a, b) = seg.bounds();
            if !(a < b) {
                return Err(Error::OutOfDomain(format!("segment {k} has empty range [{a}, {b}]")));
            }
        }
        for (k, w) in segments.windows(2).enumerate() {
            let (_, end) = w[0].bounds();
            let (start, _) = w[1].bounds();
            if (end - start).abs() > 1e-12 {
                return Err(Error::OutOfDomain(format!("gap between segments {k} and {} ({end} vs {start})", k + 1)));
            }
            let jump = (w[0].eval(end) - w[1].eval(start)).abs();
            if jump > JOIN_TOL {
                return Err(Error::OutOfDomain(format!(
                    "discontinuity {jump:.3e} at x={end} between segments {k} and {}",
                    k + 1
                )));
            }
        }
        Ok(Self {
            domain_min: first.bounds().0,
            domain_max: last.bounds().1,
            segments,
        })
    }

    fn segment_at(&self, x: f64) -> &Segment {
        let idx = self.segments.partition_point(|s| s.bounds().1 < x);
        &self.segments[idx.min(self.segments.len() - 1)]
    }

    /// Evaluates inside the domain; errors outside it.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= self.domain_min && x <= self.domain_max) {
            return Err(Error::OutOfDomain(format!(
                "x = {x} outside [{}, {}]",
                self.domain_min, self.domain_max
            )));
        }
        Ok(self.segment_at(x).eval(x))
    }

    /// Evaluation with `x ≤ 0 ↦ 0` and `x ≥ domain_max ↦ curve(domain_max)`.
    pub fn eval_clamped(&self, x: f64) -> f64 {
        if x <= 0.0 || x.is_nan() {
            0.0
        } else if x >= self.domain_max {
            self.segment_at(self.domain_max).eval(self.domain_max)
        } else if x < self.domain_min {
            self.segment_at(self.domain_min).eval(self.domain_min)
        } else {
            self.segment_at(x).eval(x)
        }
    }
}

/// Evaluates `curve` at `x`, clamping as in [`PiecewiseCurve::eval_clamped`]
/// or failing outside the domain.
pub fn curve_eval(curve: &PiecewiseCurve, x: f64, clamp: bool) -> Result<f64> {
    if clamp {
        Ok(curve.eval_clamped(x))
    } else {
        curve.eval(x)
    }
}
