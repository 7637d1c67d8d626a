//! The two-level critical family `F_{n1,n2}`: distributions with `n1` entries
//! equal to `α` and `n2` entries equal to `β` at fixed `1 - Σμ² = λ`.

use serde::{Deserialize, Serialize};

use super::entropy::h;
use crate::{Error, Result};

const NEG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Branch {
    pub n1: usize,
    pub n2: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchEval {
    pub alpha: f64,
    pub beta: f64,
    /// Entropy in nats.
    pub value: f64,
}

/// Which root of the quadratic for `α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Root {
    Plus,
    Minus,
}

impl Branch {
    pub fn new(n1: usize, n2: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::OutOfDomain(format!("branch ({n1}, {n2}) needs positive counts")));
        }
        Ok(Self { n1, n2 })
    }

    pub fn size(self) -> usize {
        self.n1 + self.n2
    }

    /// Interval of `λ` on which the `α⁺` solution is real and nonnegative:
    /// `[1 - 1/n1, 1 - 1/(n1+n2)]`.
    pub fn domain(self) -> (f64, f64) {
        (frac(self.n1), frac(self.size()))
    }

    /// Interval asserted by the paper's nonnegativity argument:
    /// `max{1 - 1/n1, 1 - 1/n2} ≤ λ ≤ 1 - 1/(n1+n2)`.
    pub fn paper_domain(self) -> (f64, f64) {
        (frac(self.n1).max(frac(self.n2)), frac(self.size()))
    }

    /// `F(λ)` with `λ` clamped into [`Branch::domain`].
    pub fn value_clamped(self, lambda: f64) -> f64 {
        let (lo, hi) = self.domain();
        branch_solutions(self, lambda.clamp(lo, hi), false)
            .expect("branch is valid on its own domain")
            .value
    }

    /// `dF/dλ` with `λ` clamped into [`Branch::domain`].
    pub fn slope_clamped(self, lambda: f64) -> f64 {
        let (lo, hi) = self.domain();
        branch_slope(&branch_solutions(self, lambda.clamp(lo, hi), false).expect("valid on domain"))
    }

    pub fn label(self) -> String {
        format!("F_{}_{}", self.n1, self.n2)
    }
}

/// All branches with `n1 + n2 ≤ m`, ordered by size then `n1`.
/// `(k - 1)/k`, rounded the same way as `(m - 1)/m` everywhere else.
pub(crate) fn frac(k: usize) -> f64 {
    (k - 1) as f64 / k as f64
}

pub fn all_branches(m: usize) -> Vec<Branch> {
    let mut out = Vec::new();
    for s in 2..=m {
        for n1 in 1..s {
            out.push(Branch { n1, n2: s - n1 });
        }
    }
    out
}

/// Either root of `n1(n1+n2)α² - 2n1α + 1 - n2(1-λ) = 0`, with `β = (1 - n1α)/n2`.
pub fn branch_root(branch: Branch, lambda: f64, root: Root) -> Option<BranchEval> {
    if !(0.0..1.0).contains(&lambda) {
        return None;
    }
    let (n1, n2) = (branch.n1 as f64, branch.n2 as f64);
    let s = n1 + n2;
    let disc = n1 * n1 - n1 * s * (1.0 - n2 * (1.0 - lambda));
    if disc < -NEG_TOL {
        return None;
    }
    // rounding noise at the degenerate end would otherwise leave α ≠ β by √eps
    let noise = 8.0 * f64::EPSILON * n1 * s * n2;
    let sq = if disc <= noise { 0.0 } else { disc.sqrt() };
    let alpha = match root {
        Root::Plus => (n1 + sq) / (n1 * s),
        Root::Minus => (n1 - sq) / (n1 * s),
    };
    let beta = (1.0 - n1 * alpha) / n2;
    if alpha < -NEG_TOL || beta < -NEG_TOL {
        return None;
    }
    let (alpha, beta) = (alpha.max(0.0), beta.max(0.0));
    Some(BranchEval {
        alpha,
        beta,
        value: n1 * h(alpha) + n2 * h(beta),
    })
}

/// The `α⁺` solution, optionally restricted to the paper's stated interval.
pub fn branch_solutions(branch: Branch, lambda: f64, paper_domain: bool) -> Option<BranchEval> {
    if paper_domain {
        let (lo, hi) = branch.paper_domain();
        if lambda < lo - NEG_TOL || lambda > hi + NEG_TOL {
            return None;
        }
    }
    branch_root(branch, lambda, Root::Plus)
}

/// `dF/dλ = ln(α/β) / (2(α - β))`, with the `α = β` limit `1/(2α)`.
pub fn branch_slope(eval: &BranchEval) -> f64 {
    let (a, b) = (eval.alpha, eval.beta);
    if b <= 0.0 || a <= 0.0 {
        return f64::INFINITY;
    }
    // ln(a/b) = 2 artanh(u) and a - b = u(a + b), u = (a-b)/(a+b)
    let u = (a - b) / (a + b);
    let ratio = if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 + u2 / 3.0 + u2 * u2 / 5.0
    } else {
        u.atanh() / u
    };
    ratio / (a + b)
}

impl BranchEval {
    /// `n1` copies of `α`, `n2` of `β`, zero-padded to length `m`.
    pub fn distribution(&self, branch: Branch, m: usize) -> Vec<f64> {
        let mut v = vec![self.alpha; branch.n1];
        v.extend(std::iter::repeat_n(self.beta, branch.n2));
        v.resize(m.max(branch.size()), 0.0);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelopes::{shannon_entropy, ProbVector};
    use proptest::prelude::*;

    fn b(n1: usize, n2: usize) -> Branch {
        Branch::new(n1, n2).unwrap()
    }

    #[test]
    fn examples() {
        let e = branch_solutions(b(1, 1), 0.5, false).unwrap();
        assert!((e.alpha - 0.5).abs() < 1e-12 && (e.beta - 0.5).abs() < 1e-12);
        assert!((e.value - 2f64.ln()).abs() < 1e-12);

        let e = branch_solutions(b(1, 2), 0.5, false).unwrap();
        assert!((e.alpha - 2.0 / 3.0).abs() < 1e-12 && (e.beta - 1.0 / 6.0).abs() < 1e-12);
        assert!((e.value - 0.868).abs() < 1e-3);

        // (1,2) at 0.4 is outside the paper interval [1/2, 2/3] but nonnegative
        let e = branch_solutions(b(1, 2), 0.4, false).unwrap();
        assert!((e.alpha - 0.7550).abs() < 1e-4 && (e.beta - 0.1225).abs() < 1e-4);
        assert!((e.value - 0.7266).abs() < 1e-4);
        assert!(branch_solutions(b(1, 2), 0.4, true).is_none());

        assert!(branch_solutions(b(2, 1), 0.4, false).is_none());
        assert!(branch_solutions(b(2, 1), 0.4, true).is_none());
    }

    #[test]
    fn direct_quadratic_oracle_for_1_2() {
        // Σμ = 1, Σμ² = 0.6 with μ = (a, b, b): 3a² - 2a + 1 - 1.2 = 0 from eliminating b
        let a = (2.0 + (4.0f64 + 12.0 * 0.2).sqrt()) / 6.0;
        let bb = (1.0 - a) / 2.0;
        let e = branch_solutions(b(1, 2), 0.4, false).unwrap();
        assert!((e.alpha - a).abs() < 1e-14 && (e.beta - bb).abs() < 1e-14);
    }

    #[test]
    fn domains() {
        assert_eq!(b(1, 2).domain(), (0.0, 2.0 / 3.0));
        assert_eq!(b(2, 1).domain(), (0.5, 2.0 / 3.0));
        assert_eq!(b(1, 2).paper_domain(), (0.5, 2.0 / 3.0));
        assert_eq!(all_branches(4).len(), 6);
    }

    #[test]
    fn slope_matches_finite_difference() {
        for br in all_branches(5) {
            let (lo, hi) = br.domain();
            for k in 1..10 {
                let x = lo + (hi - lo) * k as f64 / 10.0;
                let d = 1e-6;
                let fd = (br.value_clamped(x + d) - br.value_clamped(x - d)) / (2.0 * d);
                let an = br.slope_clamped(x);
                assert!((fd - an).abs() < 1e-5 * an.abs().max(1.0), "{br:?} at {x}: {fd} vs {an}");
            }
            // degenerate end: slope (n1+n2)/2
            assert!((br.slope_clamped(hi) - br.size() as f64 / 2.0).abs() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn branch_consistency(n1 in 1usize..5, n2 in 1usize..5, t in 0.0f64..1.0) {
            let br = b(n1, n2);
            let (lo, hi) = br.domain();
            let lam = lo + t * (hi - lo);
            prop_assume!(lam < 1.0);
            let e = branch_solutions(br, lam, false).unwrap();
            prop_assert!((n1 as f64 * e.alpha + n2 as f64 * e.beta - 1.0).abs() < 1e-10);
            prop_assert!((n1 as f64 * e.alpha.powi(2) + n2 as f64 * e.beta.powi(2) - (1.0 - lam)).abs() < 1e-10);
            let mu = ProbVector::normalized(&e.distribution(br, 8)).unwrap();
            prop_assert!((shannon_entropy(&mu) - e.value).abs() < 1e-10);
            prop_assert!((mu.lambda() - lam).abs() < 1e-10);
        }

        #[test]
        fn root_symmetry(n1 in 1usize..5, n2 in 1usize..5, lam in 0.0f64..0.95) {
            let plus = branch_root(b(n1, n2), lam, Root::Plus);
            let minus = branch_root(b(n2, n1), lam, Root::Minus);
            if let (Some(p), Some(q)) = (plus, minus) {
                prop_assert!((p.value - q.value).abs() < 1e-10);
                prop_assert!((p.alpha - q.beta).abs() < 1e-10);
            }
        }
    }
}
