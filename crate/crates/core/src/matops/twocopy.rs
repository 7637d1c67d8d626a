//! Expectation values of the two-copy observables `V1, V2, K1, K2` on `ρ⊗ρ`.
//!
//! The operators are built from the antisymmetric and symmetric projectors
//! `P∓ = (I ∓ SWAP)/2` on the `(A, A')` and `(B, B')` pairs. The factor on each
//! pair is materialised densely; the operator on `(A⊗B)⊗(A'⊗B')` is obtained
//! from the `(A⊗A')⊗(B⊗B')` ordering by an index permutation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BipartiteDims, BipartiteState, ComplexMatrix};
use crate::{Error, Exec, Result};

/// Largest two-copy dimension `(m·n)²` for which the operators are used.
pub const MAX_TWO_COPY_DIM: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TwoCopyOperatorId {
    /// `4(P− − P+) ⊗ P−`
    V1,
    /// `4P− ⊗ (P− − P+)`
    V2,
    /// `4P− ⊗ I`
    K1,
    /// `4I ⊗ P−`
    K2,
}

impl TwoCopyOperatorId {
    pub const ALL: [TwoCopyOperatorId; 4] = [Self::V1, Self::V2, Self::K1, Self::K2];
}

/// `(I ∓ SWAP)/2` on `C^d ⊗ C^d`; `sign = -1` gives the antisymmetric projector.
pub fn swap_projector(d: usize, sign: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let (x, xp) = (r / d, r % d);
        let (y, yp) = (c / d, c % d);
        let id = if r == c { 1.0 } else { 0.0 };
        let swap = if x == yp && xp == y { 1.0 } else { 0.0 };
        Complex64::new(0.5 * (id + sign * swap), 0.0)
    })
}

fn factors(dims: BipartiteDims, op: TwoCopyOperatorId) -> (ComplexMatrix, ComplexMatrix) {
    let (m, n) = (dims.m, dims.n);
    let anti = |d| swap_projector(d, -1.0);
    let diff = |d: usize| anti(d).sub(&swap_projector(d, 1.0)).expect("same shape");
    match op {
        TwoCopyOperatorId::V1 => (diff(m).scale(4.0), anti(n)),
        TwoCopyOperatorId::V2 => (anti(m).scale(4.0), diff(n)),
        TwoCopyOperatorId::K1 => (anti(m).scale(4.0), ComplexMatrix::identity(n * n)),
        TwoCopyOperatorId::K2 => (ComplexMatrix::identity(m * m).scale(4.0), anti(n)),
    }
}

fn check_limit(dims: BipartiteDims) -> Result<usize> {
    let d2 = dims.total() * dims.total();
    if d2 > MAX_TWO_COPY_DIM {
        return Err(Error::DimensionLimit {
            what: "two-copy operator",
            needed: d2,
            limit: MAX_TWO_COPY_DIM,
        });
    }
    Ok(d2)
}

/// Dense operator on `(A⊗B)⊗(A'⊗B')`.
pub fn two_copy_operator(dims: BipartiteDims, op: TwoCopyOperatorId) -> Result<ComplexMatrix> {
    let d2 = check_limit(dims)?;
    let (m, n) = (dims.m, dims.n);
    let d = dims.total();
    let (fa, fb) = factors(dims, op);
    Ok(ComplexMatrix::from_fn(d2, d2, |r, c| {
        let (ab, abp) = (r / d, r % d);
        let (cd, cdp) = (c / d, c % d);
        let (a, b, ap, bp) = (ab / n, ab % n, abp / n, abp % n);
        let (cc, dd, ccp, ddp) = (cd / n, cd % n, cdp / n, cdp % n);
        fa[(a * m + ap, cc * m + ccp)] * fb[(b * n + bp, dd * n + ddp)]
    }))
}

fn nonzeros(mat: &ComplexMatrix, d: usize) -> Vec<(usize, usize, usize, usize, Complex64)> {
    let mut out = Vec::new();
    for r in 0..mat.rows() {
        for c in 0..mat.cols() {
            let v = mat[(r, c)];
            if v.norm() > 0.0 {
                out.push((r / d, r % d, c / d, c % d, v));
            }
        }
    }
    out
}

/// `Tr(ρ⊗ρ · op)`.
pub fn two_copy_expectation(state: &BipartiteState, op: TwoCopyOperatorId) -> Result<f64> {
    two_copy_expectation_with(state, op, Exec::default())
}

pub fn two_copy_expectation_with(state: &BipartiteState, op: TwoCopyOperatorId, exec: Exec) -> Result<f64> {
    let dims = state.dims();
    check_limit(dims)?;
    let (m, n) = (dims.m, dims.n);
    let (fa, fb) = factors(dims, op);
    let nz_a = nonzeros(&fa, m);
    let nz_b = nonzeros(&fb, n);
    let rho = state.mat();
    // Tr(R O) = Σ R[x,y] O[y,x] with R[(a b a' b'),(c d c' d')] = ρ[(a,b),(c,d)] ρ[(a',b'),(c',d')]
    // and O[(c d c' d'),(a b a' b')] = FA[(c,c'),(a,a')] FB[(d,d'),(b,b')].
    let partial: Vec<Complex64> = exec.map(nz_a.len(), |k| {
        let (c, cp, a, ap, va) = nz_a[k];
        let mut acc = Complex64::new(0.0, 0.0);
        for &(d, dp, b, bp, vb) in &nz_b {
            acc += vb * rho[(a * n + b, c * n + d)] * rho[(ap * n + bp, cp * n + dp)];
        }
        va * acc
    });
    let total: Complex64 = partial.into_iter().sum();
    if total.im.abs() >= 1e-10 {
        return Err(Error::Invariant {
            invariant: "real two-copy expectation",
            deviation: total.im.abs(),
        });
    }
    Ok(total.re)
}
