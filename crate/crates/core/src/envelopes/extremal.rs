use serde::{Deserialize, Serialize};

use super::{all_branches, branch_slope, branch_solutions, Branch};
use crate::{Error, Result};

/// Curve construction: the paper's printed formulas, or hulls of the
/// brute-force-verified extremal curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Paper,
    #[default]
    Oracle,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Paper => "paper",
            Mode::Oracle => "oracle",
        })
    }
}

/// `X` is the maximal entropy at fixed `λ`, `Y` the minimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Extremum {
    X,
    Y,
}

/// Ties closer than this are treated as the same extremal value.
pub(crate) const TIE_TOL: f64 = 1e-12;

/// Extremal value at `lambda` over all branches with `n1 + n2 ≤ m`, together
/// with every branch attaining it. `lambda = 0` is allowed (value 0).
pub(crate) fn oracle_extremum(m: usize, lambda: f64, which: Extremum) -> Option<(f64, Vec<Branch>)> {
    let vals: Vec<(Branch, f64)> = all_branches(m)
        .into_iter()
        .filter_map(|b| branch_solutions(b, lambda, false).map(|e| (b, e.value)))
        .collect();
    let best = match which {
        Extremum::X => vals.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max),
        Extremum::Y => vals.iter().map(|v| v.1).fold(f64::INFINITY, f64::min),
    };
    if !best.is_finite() {
        return None;
    }
    let ties = vals
        .iter()
        .filter(|v| (v.1 - best).abs() <= TIE_TOL)
        .map(|v| v.0)
        .collect();
    Some((best, ties))
}

/// The index `k` with `(k-1)/k < λ ≤ k/(k+1)`.
pub(crate) fn paper_interval(m: usize, lambda: f64) -> usize {
    (1..m)
        .find(|&k| lambda <= k as f64 / (k + 1) as f64 + 1e-15)
        .unwrap_or(m - 1)
}

/// `X(λ)` or `Y(λ)` for envelope dimension `m`.
///
/// Paper mode uses `F_{1,k}` (X) or `F_{k,1}` (Y) on `((k-1)/k, k/(k+1)]`.
/// Oracle mode takes the extremum over every branch with `n1 + n2 ≤ m`.
pub fn extremal_xy(m: usize, lambda: f64, which: Extremum, mode: Mode) -> Result<f64> {
    if m < 2 {
        return Err(Error::OutOfDomain(format!("envelope dimension {m} < 2")));
    }
    let dmax = (m - 1) as f64 / m as f64;
    if !(lambda > 0.0 && lambda <= dmax + 1e-15) {
        return Err(Error::OutOfDomain(format!("lambda {lambda} outside (0, {dmax}]")));
    }
    let lambda = lambda.min(dmax);
    match mode {
        Mode::Paper => {
            let k = paper_interval(m, lambda);
            let b = match which {
                Extremum::X => Branch { n1: 1, n2: k },
                Extremum::Y => Branch { n1: k, n2: 1 },
            };
            Ok(b.value_clamped(lambda))
        }
        Mode::Oracle => oracle_extremum(m, lambda, which)
            .map(|(v, _)| v)
            .ok_or_else(|| Error::OutOfDomain(format!("no feasible branch at {lambda}"))),
    }
}

/// Result of [`tangent_solve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tangent {
    pub slope: f64,
    pub touch_x: f64,
}

/// Point `t` in `[lo, hi]` where the tangent to `branch` passes through
/// `(qx, qy)`, if the residual changes sign on the bracket.
pub(crate) fn tangent_touch(branch: Branch, qx: f64, qy: f64, lo: f64, hi: f64) -> Option<f64> {
    let g = |t: f64| {
        let e = branch_solutions(branch, t, false).expect("inside branch domain");
        e.value + branch_slope(&e) * (qx - t) - qy
    };
    let (mut a, mut b) = (lo, hi);
    let (ga, gb) = (g(a), g(b));
    if ga == 0.0 {
        return Some(a);
    }
    if gb == 0.0 {
        return Some(b);
    }
    if !ga.is_finite() && !gb.is_finite() || (ga.is_finite() && gb.is_finite() && ga.signum() == gb.signum()) {
        return None;
    }
    let sa = if ga.is_finite() { ga.signum() } else { -gb.signum() };
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Some(mid);
        }
        if gm.signum() == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    Some(0.5 * (a + b))
}

/// Tangent from `(anchor_x, anchor_y)` to `F11`: finds `(k, t)` with
/// `k(t - anchor_x) + anchor_y = F11(t)` and `k = F11'(t)`.
pub fn tangent_solve(m: usize, anchor_x: f64, anchor_y: f64) -> Result<Tangent> {
    if m < 2 {
        return Err(Error::OutOfDomain(format!("envelope dimension {m} < 2")));
    }
    let f11 = Branch { n1: 1, n2: 1 };
    let hi = anchor_x.min(f11.domain().1);
    if !(hi > 0.0) {
        return Err(Error::NoTangent { anchor_x });
    }
    let residual = |t: f64| f11.value_clamped(t) + f11.slope_clamped(t) * (anchor_x - t) - anchor_y;
    let r_hi = residual(hi);
    if r_hi.abs() < 1e-12 {
        return Ok(Tangent {
            slope: f11.slope_clamped(hi),
            touch_x: hi,
        });
    }
    // F11 is concave, so the residual decreases in t from +inf at 0
    if r_hi > 0.0 {
        return Err(Error::NoTangent { anchor_x });
    }
    let t = tangent_touch(f11, anchor_x, anchor_y, 1e-300, hi).ok_or(Error::NoTangent { anchor_x })?;
    if residual(t).abs() >= 1e-10 {
        return Err(Error::NoTangent { anchor_x });
    }
    Ok(Tangent {
        slope: f11.slope_clamped(t),
        touch_x: t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n1: usize, n2: usize, x: f64) -> f64 {
        Branch { n1, n2 }.value_clamped(x)
    }

    #[test]
    fn oracle_spot_values() {
        let y = extremal_xy(3, 0.4, Extremum::Y, Mode::Oracle).unwrap();
        let x = extremal_xy(3, 0.4, Extremum::X, Mode::Oracle).unwrap();
        assert!((y - 0.5897).abs() < 1e-3 && (y - f(1, 1, 0.4)).abs() < 1e-15);
        assert!((x - 0.7266).abs() < 1e-3 && (x - f(1, 2, 0.4)).abs() < 1e-15);
        let y = extremal_xy(3, 0.6, Extremum::Y, Mode::Oracle).unwrap();
        let x = extremal_xy(3, 0.6, Extremum::X, Mode::Oracle).unwrap();
        assert!((y - 0.9801).abs() < 1e-3 && (x - 1.0053).abs() < 1e-3);
    }

    #[test]
    fn paper_layout() {
        assert_eq!(extremal_xy(3, 0.3, Extremum::X, Mode::Paper).unwrap(), f(1, 1, 0.3));
        assert_eq!(extremal_xy(3, 0.6, Extremum::X, Mode::Paper).unwrap(), f(1, 2, 0.6));
        assert_eq!(extremal_xy(4, 0.7, Extremum::Y, Mode::Paper).unwrap(), f(3, 1, 0.7));
        assert!(extremal_xy(3, 0.0, Extremum::X, Mode::Paper).is_err());
        assert!(extremal_xy(3, 0.7, Extremum::X, Mode::Oracle).is_err());
    }

    #[test]
    fn tangent_examples() {
        let t = tangent_solve(3, 0.5, 0.868).unwrap();
        assert!((t.slope - 1.65).abs() < 0.01 && (t.touch_x - 0.091).abs() < 0.002, "{t:?}");
        let t = tangent_solve(4, 2.0 / 3.0, 1.242).unwrap();
        assert!((t.touch_x - 0.062).abs() < 0.002, "{t:?}");
        assert!((f(1, 1, t.touch_x) - 0.142).abs() < 0.002);
        // anchor on the curve: degenerate tangent
        let ax = 0.3;
        let t = tangent_solve(3, ax, f(1, 1, ax)).unwrap();
        assert_eq!(t.touch_x, ax);
        assert!((t.slope - Branch { n1: 1, n2: 1 }.slope_clamped(ax)).abs() < 1e-12);
        // anchor below the curve has no tangent
        assert!(matches!(tangent_solve(3, 0.3, 0.1), Err(Error::NoTangent { .. })));
    }
}
