//! CSV exports: bound curves per dimension and the parametrised 3⊗3 example.

use std::io::Write;

use crate::bounds::{eof_bounds_from, example_state, lambda_quantities, Units};
use crate::envelopes::{all_branches, branch_solutions, build_envelopes, extremal_xy, Extremum, Mode, DEFAULT_GRID};
use crate::Result;

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Rows `λ_k = k·(m−1)/(m·grid)`, `k = 1..=grid`, with columns
/// `lambda,eta,epsilon,X,Y` and one column per branch (empty outside its domain).
pub fn emit_curves_csv(m: usize, mode: Mode, grid: usize, units: Units, out: &mut impl Write) -> Result<()> {
    let env = build_envelopes(m, mode, DEFAULT_GRID)?;
    let branches = all_branches(m);
    let mut header = vec!["lambda", "eta", "epsilon", "X", "Y"].into_iter().map(String::from).collect::<Vec<_>>();
    header.extend(branches.iter().map(|b| b.label()));
    writeln!(out, "{}", header.join(","))?;
    let dmax = env.domain_max();
    for k in 1..=grid {
        let lam = if k == grid { dmax } else { dmax * k as f64 / grid as f64 };
        let u = |v: f64| num(units.from_nats(v));
        let mut row = vec![
            num(lam),
            u(env.eta_at(lam)),
            u(env.epsilon_at(lam)),
            u(extremal_xy(m, lam, Extremum::X, mode)?),
            u(extremal_xy(m, lam, Extremum::Y, mode)?),
        ];
        for b in &branches {
            row.push(
                branch_solutions(*b, lam, mode == Mode::Paper)
                    .map(|e| u(e.value))
                    .unwrap_or_default(),
            );
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Printed rational approximations of `Λ` and `Λ'` for the example family.
pub fn printed_lambdas(x: f64, a: f64) -> Option<(f64, f64)> {
    let a2 = a * a;
    let den = (2.0 + 3.0 * a2).powi(2);
    if x == 0.1 {
        Some((
            (1.45 + 9.21 * a2 - 0.38 * a2 * a2) / den,
            1.14 * (0.19 + a2) * (9.67 + a2) / den,
        ))
    } else if x == 0.001 {
        Some((
            (1.99 + 11.97 * a2 - 0.004 * a2 * a2) / den,
            0.01 * (0.17 + a2) * (999.67 + a2) / den,
        ))
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleRow {
    pub a: f64,
    pub lambda: f64,
    pub lambda_prime: f64,
    pub eof_lower: f64,
    pub eof_upper: f64,
    /// `(Λ − printed Λ, Λ' − printed Λ')` when printed formulas exist for `x`.
    pub paper_delta: Option<(f64, f64)>,
}

/// `steps` rows with `a` evenly spaced over `[a_min, a_max]` (one row when
/// `steps = 1`).
pub fn example_rows(x: f64, a_min: f64, a_max: f64, steps: usize, mode: Mode) -> Result<Vec<ExampleRow>> {
    let env = build_envelopes(3, mode, DEFAULT_GRID)?;
    (0..steps)
        .map(|k| {
            let a = if steps <= 1 { a_min } else { a_min + (a_max - a_min) * k as f64 / (steps - 1) as f64 };
            let l = lambda_quantities(&example_state(x, a)?);
            let (eof_lower, eof_upper) = eof_bounds_from(&l, &env);
            Ok(ExampleRow {
                a,
                lambda: l.lam_a,
                lambda_prime: l.lam_prime_a,
                eof_lower,
                eof_upper,
                paper_delta: printed_lambdas(x, a).map(|(p, pp)| (l.lam_a - p, l.lam_prime_a - pp)),
            })
        })
        .collect()
}

pub fn reproduce_example_figures(
    x: f64,
    a_min: f64,
    a_max: f64,
    steps: usize,
    mode: Mode,
    units: Units,
    out: &mut impl Write,
) -> Result<()> {
    let rows = example_rows(x, a_min, a_max, steps, mode)?;
    let printed = printed_lambdas(x, 0.0).is_some();
    let mut header = String::from("a,lambda,lambda_prime,eof_lower,eof_upper");
    if printed {
        header.push_str(",paper_delta,paper_delta_prime");
    }
    writeln!(out, "{header}")?;
    for r in rows {
        let mut line = [r.a, r.lambda, r.lambda_prime]
            .into_iter()
            .map(num)
            .chain([r.eof_lower, r.eof_upper].into_iter().map(|v| num(units.from_nats(v))))
            .collect::<Vec<_>>();
        if let Some((d, dp)) = r.paper_delta {
            line.push(num(d));
            line.push(num(dp));
        }
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}
