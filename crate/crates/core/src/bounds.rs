//! EOF, concurrence and CAF bounds for a bipartite state.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::envelopes::{EnvelopeSet, Mode};
use crate::matops::{
    partial_trace, partial_transpose, purity, realign, trace_norm, two_copy_expectation, BipartiteDims,
    BipartiteState, ComplexMatrix, StateVector, Subsystem, TwoCopyOperatorId,
};
use crate::{Error, Result};

/// Purity combinations feeding the bound curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaQuantities {
    /// `Tr ρ² − Tr ρ_A²`
    #[serde(rename = "lama")]
    pub lam_a: f64,
    /// `Tr ρ² − Tr ρ_B²`
    #[serde(rename = "lamb")]
    pub lam_b: f64,
    /// `1 − Tr ρ_A²`
    #[serde(rename = "lamprimea")]
    pub lam_prime_a: f64,
    /// `1 − Tr ρ_B²`
    #[serde(rename = "lamprimeb")]
    pub lam_prime_b: f64,
}

pub fn lambda_quantities(state: &BipartiteState) -> LambdaQuantities {
    let p = purity(state.mat()).expect("valid state is square");
    let pa = purity(&partial_trace(state, Subsystem::A)).expect("square");
    let pb = purity(&partial_trace(state, Subsystem::B)).expect("square");
    LambdaQuantities {
        lam_a: p - pa,
        lam_b: p - pb,
        lam_prime_a: 1.0 - pa,
        lam_prime_b: 1.0 - pb,
    }
}

fn check_envelope(state: &BipartiteState, env: &EnvelopeSet) -> Result<()> {
    let want = state.dims().envelope_dim();
    if env.m != want {
        return Err(Error::DimensionMismatch {
            expected: want,
            got: env.m,
        });
    }
    Ok(())
}

/// `(max ε(Λ_A), ε(Λ_B)), min(η(Λ'_A), η(Λ'_B)))` in nats.
pub fn eof_bounds(state: &BipartiteState, env: &EnvelopeSet) -> Result<(f64, f64)> {
    check_envelope(state, env)?;
    Ok(eof_bounds_from(&lambda_quantities(state), env))
}

pub(crate) fn eof_bounds_from(l: &LambdaQuantities, env: &EnvelopeSet) -> (f64, f64) {
    let lower = env.epsilon_at(l.lam_a).max(env.epsilon_at(l.lam_b));
    let upper = env.eta_at(l.lam_prime_a).min(env.eta_at(l.lam_prime_b));
    (lower, upper)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ConcurrenceMethod {
    #[default]
    Purity,
    TwoCopy,
}

/// Bounds on the squared concurrence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceBounds {
    pub lower_sq: f64,
    pub upper_sq: f64,
    /// Lower bound before clamping at zero.
    pub raw_lower_sq: f64,
}

pub fn concurrence_bounds(state: &BipartiteState, method: ConcurrenceMethod) -> Result<ConcurrenceBounds> {
    let (v1, v2, k1, k2) = match method {
        ConcurrenceMethod::Purity => {
            let l = lambda_quantities(state);
            (2.0 * l.lam_a, 2.0 * l.lam_b, 2.0 * l.lam_prime_a, 2.0 * l.lam_prime_b)
        }
        ConcurrenceMethod::TwoCopy => {
            let e = |op| two_copy_expectation(state, op);
            (
                e(TwoCopyOperatorId::V1)?,
                e(TwoCopyOperatorId::V2)?,
                e(TwoCopyOperatorId::K1)?,
                e(TwoCopyOperatorId::K2)?,
            )
        }
    };
    let raw = v1.max(v2);
    Ok(ConcurrenceBounds {
        lower_sq: raw.max(0.0),
        upper_sq: k1.min(k2),
        raw_lower_sq: raw,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CafBranch {
    Trivial,
    Entropy,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CafBreakdown {
    pub omega: f64,
    pub gamma: f64,
    pub active_branch: CafBranch,
}

/// Binary entropy in bits.
pub fn h2(p: f64) -> f64 {
    let t = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    t(p) + t(1.0 - p)
}

/// `[√Ω + √((m−1)(m−Ω))]² / m²`
pub fn caf_gamma(m: usize, omega: f64) -> f64 {
    let mf = m as f64;
    let s = omega.sqrt() + ((mf - 1.0) * (mf - omega).max(0.0)).sqrt();
    s * s / (mf * mf)
}

/// Piecewise CAF bound in bits for a given `Ω ∈ [1, m]`.
pub fn caf_value(m: usize, omega: f64) -> (f64, CafBreakdown) {
    let mf = m as f64;
    let gamma = caf_gamma(m, omega);
    let (value, active_branch) = if omega <= 1.0 {
        (0.0, CafBranch::Trivial)
    } else if m == 2 || omega <= 4.0 * (mf - 1.0) / mf {
        (h2(gamma) + (1.0 - gamma) * (mf - 1.0).log2(), CafBranch::Entropy)
    } else {
        ((mf - 1.0).log2() / (mf - 2.0) * (omega - mf) + mf.log2(), CafBranch::Linear)
    };
    (
        value,
        CafBreakdown {
            omega,
            gamma,
            active_branch,
        },
    )
}

/// Lower bound from the larger of the partial-transpose and realignment trace
/// norms, in bits.
pub fn caf_lower_bound(state: &BipartiteState) -> Result<(f64, CafBreakdown)> {
    let m = state.dims().envelope_dim();
    let omega = trace_norm(&partial_transpose(state))?.max(trace_norm(&realign(state))?);
    let mf = m as f64;
    if !(1.0 - 1e-6..=mf + 1e-6).contains(&omega) {
        return Err(Error::OutOfDomain(format!("Ω = {omega} outside [1, {m}]")));
    }
    let mut clamped = omega;
    if (omega - 1.0).abs() <= 1e-9 || omega < 1.0 {
        clamped = 1.0;
    } else if (omega - mf).abs() <= 1e-9 || omega > mf {
        clamped = mf;
    }
    let (value, mut detail) = caf_value(m, clamped);
    detail.omega = omega;
    Ok((value, detail))
}

/// `ρ = (x/9) I + (1 − x) |ψ><ψ|` on `3⊗3` with `|ψ> ∝ a|00> + (|11> + |22>)/√3`.
pub fn example_state(x: f64, a: f64) -> Result<BipartiteState> {
    if !(0.0..=1.0).contains(&x) || !a.is_finite() {
        return Err(Error::OutOfDomain(format!("example state needs x in [0,1] and finite a, got x={x}, a={a}")));
    }
    let dims = BipartiteDims::new(3, 3)?;
    let r3 = 1.0 / 3f64.sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); 9];
    amps[0] = Complex64::new(a, 0.0);
    amps[4] = Complex64::new(r3, 0.0);
    amps[8] = Complex64::new(r3, 0.0);
    let psi = StateVector::normalized(dims, amps)?;
    let proj = ComplexMatrix::outer(psi.amplitudes());
    let mat = ComplexMatrix::from_fn(9, 9, |i, j| {
        let id = if i == j { x / 9.0 } else { 0.0 };
        proj[(i, j)] * (1.0 - x) + id
    });
    BipartiteState::new(mat, dims)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Nats,
    Bits,
}

impl Units {
    /// Converts an entropy given in nats.
    pub fn from_nats(self, v: f64) -> f64 {
        match self {
            Units::Nats => v,
            Units::Bits => v / LN_2,
        }
    }

    /// Converts an entropy given in bits.
    pub fn from_bits(self, v: f64) -> f64 {
        match self {
            Units::Nats => v * LN_2,
            Units::Bits => v,
        }
    }
}

impl std::fmt::Display for Units {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub lambdas: LambdaQuantities,
    pub eof_lower: f64,
    pub eof_upper: f64,
    pub caf_lower: f64,
    pub conc_sq_lower: f64,
    pub conc_sq_upper: f64,
    pub units: Units,
    pub mode: Mode,
}

pub fn bounds_report(state: &BipartiteState, env: &EnvelopeSet, units: Units) -> Result<BoundsReport> {
    let (lo, hi) = eof_bounds(state, env)?;
    let (caf, _) = caf_lower_bound(state)?;
    let conc = concurrence_bounds(state, ConcurrenceMethod::Purity)?;
    Ok(BoundsReport {
        lambdas: lambda_quantities(state),
        eof_lower: units.from_nats(lo),
        eof_upper: units.from_nats(hi),
        caf_lower: units.from_bits(caf),
        conc_sq_lower: conc.lower_sq,
        conc_sq_upper: conc.upper_sq,
        units,
        mode: env.mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelopes::{build_envelopes, Mode};
    use crate::oracles::{pure_eof, random_pure, random_state, StateKind};
    use crate::Seed;

    fn bell() -> BipartiteState {
        let d = BipartiteDims::new(2, 2).unwrap();
        BipartiteState::from_pure(&StateVector::from_schmidt(d, &[0.5, 0.5]).unwrap())
    }

    fn product(m: usize, n: usize) -> BipartiteState {
        let d = BipartiteDims::new(m, n).unwrap();
        BipartiteState::from_pure(&StateVector::from_schmidt(d, &[1.0]).unwrap())
    }

    fn max_entangled(m: usize) -> BipartiteState {
        let d = BipartiteDims::new(m, m).unwrap();
        BipartiteState::from_pure(&StateVector::from_schmidt(d, &vec![1.0 / m as f64; m]).unwrap())
    }

    #[test]
    fn lambda_examples() {
        let l = lambda_quantities(&bell());
        assert!((l.lam_a - 0.5).abs() < 1e-12 && (l.lam_prime_a - 0.5).abs() < 1e-12);
        let mm = BipartiteState::maximally_mixed(BipartiteDims::new(3, 3).unwrap());
        let l = lambda_quantities(&mm);
        assert!((l.lam_a + 2.0 / 9.0).abs() < 1e-12 && (l.lam_prime_a - 2.0 / 3.0).abs() < 1e-12);
        let l = lambda_quantities(&example_state(0.1, 0.0).unwrap());
        assert!((l.lam_a - 0.3625).abs() < 0.02 && (l.lam_prime_a - 0.5317).abs() < 0.02);
    }

    #[test]
    fn example_state_family() {
        let s = example_state(1.0, 2.5).unwrap();
        let mm = BipartiteState::maximally_mixed(s.dims());
        assert!(s.mat().max_abs_diff(mm.mat()) < 1e-15);
        let s = example_state(0.0, 0.0).unwrap();
        let ra = partial_trace(&s, Subsystem::A);
        let want = ComplexMatrix::from_real_diag(&[0.0, 0.5, 0.5]);
        assert!(ra.max_abs_diff(&want) < 1e-15);
        let l = lambda_quantities(&example_state(0.1, 1.0).unwrap());
        assert!((l.lam_a - (1.45 + 9.21 - 0.38) / 25.0).abs() < 0.02);
    }

    #[test]
    fn eof_examples() {
        let e3 = build_envelopes(3, Mode::Oracle, 2001).unwrap();
        let (lo, hi) = eof_bounds(&max_entangled(3), &e3).unwrap();
        assert!((lo - 3f64.ln()).abs() < 1e-9 && (hi - 3f64.ln()).abs() < 1e-9);
        let (lo, hi) = eof_bounds(&product(3, 3), &e3).unwrap();
        assert!(lo.abs() < 1e-12 && hi.abs() < 1e-12);
        let e2 = build_envelopes(2, Mode::Oracle, 2001).unwrap();
        let mm = BipartiteState::maximally_mixed(BipartiteDims::new(2, 2).unwrap());
        let (lo, hi) = eof_bounds(&mm, &e2).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - e2.eta_at(0.5)).abs() < 1e-15);
        assert!(eof_bounds(&mm, &e3).is_err());
    }

    #[test]
    fn oracle_ordering_and_pure_tightness() {
        let seed = Seed(2024);
        for (k, (m, n)) in [(2, 2), (2, 3), (3, 3)].into_iter().enumerate() {
            let env = build_envelopes(m.min(n), Mode::Oracle, 4001).unwrap();
            let dims = BipartiteDims::new(m, n).unwrap();
            for i in 0..500 {
                let r = 1 + i % (m * n);
                let s = random_state(dims, StateKind::MixedRank(r), seed.derive(k as u64).derive(i as u64)).unwrap();
                let (lo, hi) = eof_bounds(&s, &env).unwrap();
                assert!(lo <= hi + 1e-12, "({m},{n}) #{i}: {lo} > {hi}");
            }
        }
        let env = build_envelopes(3, Mode::Oracle, 4001).unwrap();
        let dims = BipartiteDims::new(3, 3).unwrap();
        for i in 0..1000u64 {
            let psi = random_pure(dims, Seed(5).derive(i));
            let s = BipartiteState::from_pure(&psi);
            let exact = pure_eof(&psi).unwrap();
            let (lo, hi) = eof_bounds(&s, &env).unwrap();
            assert!(lo <= exact + 1e-7 && exact <= hi + 1e-7);
            let c = concurrence_bounds(&s, ConcurrenceMethod::Purity).unwrap();
            let l = lambda_quantities(&s);
            assert!((c.lower_sq - 2.0 * l.lam_prime_a).abs() < 1e-10);
            assert!((c.upper_sq - 2.0 * l.lam_prime_a).abs() < 1e-10);
        }
    }

    #[test]
    fn concurrence_examples_and_method_agreement() {
        let c = concurrence_bounds(&bell(), ConcurrenceMethod::TwoCopy).unwrap();
        assert!((c.lower_sq - 1.0).abs() < 1e-12 && (c.upper_sq - 1.0).abs() < 1e-12);
        let c = concurrence_bounds(&product(2, 2), ConcurrenceMethod::Purity).unwrap();
        assert!(c.lower_sq.abs() < 1e-12 && c.upper_sq.abs() < 1e-12);
        let mm = BipartiteState::maximally_mixed(BipartiteDims::new(2, 2).unwrap());
        let c = concurrence_bounds(&mm, ConcurrenceMethod::Purity).unwrap();
        assert!((c.raw_lower_sq + 0.5).abs() < 1e-12 && c.lower_sq == 0.0 && (c.upper_sq - 1.0).abs() < 1e-12);
        let dims = BipartiteDims::new(2, 3).unwrap();
        for i in 0..200u64 {
            let s = random_state(dims, StateKind::MixedRank(1 + (i as usize % 6)), Seed(9).derive(i)).unwrap();
            let a = concurrence_bounds(&s, ConcurrenceMethod::Purity).unwrap();
            let b = concurrence_bounds(&s, ConcurrenceMethod::TwoCopy).unwrap();
            assert!((a.raw_lower_sq - b.raw_lower_sq).abs() < 1e-9);
            assert!((a.upper_sq - b.upper_sq).abs() < 1e-9);
        }
    }

    #[test]
    fn caf_examples() {
        let (v, d) = caf_lower_bound(&product(3, 3)).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(d.active_branch, CafBranch::Trivial);
        for m in 2..=4 {
            let (v, d) = caf_lower_bound(&max_entangled(m)).unwrap();
            assert!((v - (m as f64).log2()).abs() < 1e-9, "m={m}: {v}");
            assert!((d.gamma - 1.0 / m as f64).abs() < 1e-9);
        }
        for m in 3..=6 {
            let mf = m as f64;
            let om = 4.0 * (mf - 1.0) / mf;
            let entropy = h2(caf_gamma(m, om)) + (1.0 - caf_gamma(m, om)) * (mf - 1.0).log2();
            let linear = (mf - 1.0).log2() / (mf - 2.0) * (om - mf) + mf.log2();
            assert!((entropy - linear).abs() < 1e-9);
            assert!((caf_gamma(m, 1.0) - 1.0).abs() < 1e-15);
            assert!((caf_gamma(m, mf) - 1.0 / mf).abs() < 1e-15);
        }
    }

    #[test]
    fn caf_vanishes_without_witness() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let mut zeros = 0;
        for i in 0..200u64 {
            let s = random_state(dims, StateKind::MixedRank(4), Seed(3).derive(i)).unwrap();
            let (v, d) = caf_lower_bound(&s).unwrap();
            assert!((0.5 - 1e-12..=1.0 + 1e-12).contains(&d.gamma));
            if d.omega <= 1.0 + 1e-9 {
                assert_eq!(v, 0.0);
                zeros += 1;
            }
        }
        assert!(zeros > 0);
    }

    #[test]
    fn report_units_and_json() {
        let env = build_envelopes(2, Mode::Oracle, 2001).unwrap();
        let r = bounds_report(&bell(), &env, Units::Bits).unwrap();
        assert!((r.eof_lower - 1.0).abs() < 1e-9 && (r.caf_lower - 1.0).abs() < 1e-9);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["lambdas", "eof_lower", "eof_upper", "caf_lower", "conc_sq_lower", "conc_sq_upper"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["units"], "bits");
        assert_eq!(v["mode"], "oracle");
        assert!(v["lambdas"].get("lamprimea").is_some());
    }
}
