use num_complex::Complex64;

use crate::envelopes::{shannon_entropy, ProbVector};
use crate::matops::{
    hermitian_eig, hermitian_eigenvalues, reduced_from_vector, singular_values, BipartiteState, ComplexMatrix, StateVector,
};
use crate::{Error, Result};

/// Von Neumann entropy of a density matrix in nats.
pub fn reduced_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let ev = hermitian_eigenvalues(rho)?;
    let clipped: Vec<f64> = ev.iter().map(|&v| v.max(0.0)).collect();
    Ok(shannon_entropy(&ProbVector::normalized(&clipped)?))
}

/// `S(ρ_A)` for a pure state.
pub fn pure_eof(psi: &StateVector) -> Result<f64> {
    let norm: f64 = psi.amplitudes().iter().map(|z| z.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Invariant {
            invariant: "unit norm",
            deviation: (norm - 1.0).abs(),
        });
    }
    reduced_entropy(&reduced_from_vector(psi.amplitudes(), psi.dims()))
}

fn check_qubits(state: &BipartiteState) -> Result<()> {
    let d = state.dims();
    if (d.m, d.n) != (2, 2) {
        return Err(Error::UnsupportedDims {
            m: d.m,
            n: d.n,
            reason: "two-qubit formula needs 2⊗2".into(),
        });
    }
    Ok(())
}

/// Concurrence `max(0, l1 − l2 − l3 − l4)` where `l_i` are the singular values
/// of `Wᵀ (σy⊗σy) W` for `ρ = WW†`, i.e. the square roots of the spectrum of
/// `√ρ ρ̃ √ρ`.
pub fn wootters_concurrence(state: &BipartiteState) -> Result<f64> {
    check_qubits(state)?;
    // σy⊗σy is antidiagonal with entries (-1, 1, 1, -1)
    let yy = ComplexMatrix::from_fn(4, 4, |i, j| {
        if i + j == 3 {
            Complex64::new(if i == 0 || i == 3 { -1.0 } else { 1.0 }, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let eig = hermitian_eig(state.mat())?;
    let sqrt_vals: Vec<f64> = eig.values.iter().map(|&v| v.max(0.0).sqrt()).collect();
    let w = eig.vectors.matmul(&ComplexMatrix::from_real_diag(&sqrt_vals))?;
    let tau = w.transpose().matmul(&yy)?.matmul(&w)?;
    let mut l = singular_values(&tau)?;
    l.sort_by(|a, b| b.total_cmp(a));
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Two-qubit EOF in nats.
pub fn wootters_2qubit(state: &BipartiteState) -> Result<f64> {
    let c = wootters_concurrence(state)?.min(1.0);
    let p = (1.0 + (1.0 - c * c).sqrt()) / 2.0;
    Ok(shannon_entropy(&ProbVector::normalized(&[p, 1.0 - p])?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matops::BipartiteDims;
    use crate::oracles::{random_pure, random_state, StateKind};
    use crate::Seed;

    fn d(m: usize, n: usize) -> BipartiteDims {
        BipartiteDims::new(m, n).unwrap()
    }

    #[test]
    fn pure_examples() {
        let bell = StateVector::from_schmidt(d(2, 2), &[0.5, 0.5]).unwrap();
        assert!((pure_eof(&bell).unwrap() - 2f64.ln()).abs() < 1e-12);
        let prod = StateVector::from_schmidt(d(3, 3), &[1.0]).unwrap();
        assert!(pure_eof(&prod).unwrap().abs() < 1e-12);
        let mu = [0.6122, 0.1939, 0.1939];
        let s = StateVector::from_schmidt(d(3, 3), &mu).unwrap();
        assert!((pure_eof(&s).unwrap() - 0.9365).abs() < 1e-3);
    }

    #[test]
    fn wootters_examples() {
        let bell = BipartiteState::from_pure(&StateVector::from_schmidt(d(2, 2), &[0.5, 0.5]).unwrap());
        assert!((wootters_2qubit(&bell).unwrap() - 2f64.ln()).abs() < 1e-9);
        let mm = BipartiteState::maximally_mixed(d(2, 2));
        assert_eq!(wootters_2qubit(&mm).unwrap(), 0.0);
        let psi = StateVector::from_schmidt(d(2, 2), &[0.9, 0.1]).unwrap();
        let s = BipartiteState::from_pure(&psi);
        assert!((wootters_concurrence(&s).unwrap() - 0.6).abs() < 1e-9);
        let h = -(0.9f64 * 0.9f64.ln() + 0.1 * 0.1f64.ln());
        assert!((wootters_2qubit(&s).unwrap() - h).abs() < 1e-9);
        assert!((h - 0.3251).abs() < 1e-4);
        assert!(wootters_2qubit(&BipartiteState::maximally_mixed(d(2, 3))).is_err());
    }

    #[test]
    fn wootters_matches_pure_eof() {
        for i in 0..500u64 {
            let psi = random_pure(d(2, 2), Seed(31).derive(i));
            let w = wootters_2qubit(&BipartiteState::from_pure(&psi)).unwrap();
            assert!((w - pure_eof(&psi).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn wootters_on_mixed_is_bounded() {
        for i in 0..50u64 {
            let s = random_state(d(2, 2), StateKind::MixedRank(2), Seed(8).derive(i)).unwrap();
            let w = wootters_2qubit(&s).unwrap();
            assert!((0.0..=2f64.ln() + 1e-12).contains(&w));
        }
    }
}
