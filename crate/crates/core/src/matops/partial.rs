use num_complex::Complex64;

use super::{BipartiteDims, BipartiteState, ComplexMatrix, Subsystem};

/// Reduced density matrix of the kept subsystem.
pub fn partial_trace(state: &BipartiteState, keep: Subsystem) -> ComplexMatrix {
    partial_trace_raw(state.mat(), state.dims(), keep)
}

/// Partial trace of any `(m·n)×(m·n)` matrix.
pub fn partial_trace_raw(mat: &ComplexMatrix, dims: BipartiteDims, keep: Subsystem) -> ComplexMatrix {
    let (m, n) = (dims.m, dims.n);
    match keep {
        Subsystem::A => ComplexMatrix::from_fn(m, m, |i, k| {
            (0..n).map(|j| mat[(i * n + j, k * n + j)]).sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(n, n, |j, l| {
            (0..m).map(|i| mat[(i * n + j, i * n + l)]).sum()
        }),
    }
}

/// Reduced state of subsystem A for an (unnormalised) pure vector.
pub fn reduced_from_vector(psi: &[Complex64], dims: BipartiteDims) -> ComplexMatrix {
    let (m, n) = (dims.m, dims.n);
    ComplexMatrix::from_fn(m, m, |i, k| {
        (0..n).map(|j| psi[i * n + j] * psi[k * n + j].conj()).sum()
    })
}

/// `Tr(M²)` for a square matrix, as a real number.
pub fn purity(mat: &ComplexMatrix) -> crate::Result<f64> {
    if !mat.is_square() {
        return Err(crate::Error::NotSquare {
            rows: mat.rows(),
            cols: mat.cols(),
        });
    }
    let n = mat.rows();
    let mut s = 0.0;
    for i in 0..n {
        for k in 0..n {
            s += (mat[(i, k)] * mat[(k, i)]).re;
        }
    }
    Ok(s)
}

/// Transpose on subsystem A: `(ρ^{T_A})_{(i,j),(k,l)} = ρ_{(k,j),(i,l)}`.
pub fn partial_transpose(state: &BipartiteState) -> ComplexMatrix {
    partial_transpose_raw(state.mat(), state.dims())
}

/// Partial transpose on A of any `(m·n)×(m·n)` matrix.
pub fn partial_transpose_raw(rho: &ComplexMatrix, dims: BipartiteDims) -> ComplexMatrix {
    let n = dims.n;
    ComplexMatrix::from_fn(rho.rows(), rho.cols(), |r, c| {
        let (i, j) = (r / n, r % n);
        let (k, l) = (c / n, c % n);
        rho[(k * n + j, i * n + l)]
    })
}

/// Realignment `R_{(i·m+k),(j·n+l)} = ρ_{(i·n+j),(k·n+l)}`, an `m²×n²` matrix.
pub fn realign(state: &BipartiteState) -> ComplexMatrix {
    let d = state.dims();
    realign_with(state.mat(), (d.m, d.n), (d.m, d.n))
}

/// General realignment of a `(p·q)×(r·s)` matrix with row index `(a,b)` and
/// column index `(c,d)` into the `(p·r)×(q·s)` matrix
/// `N[(a·r+c),(b·s+d)] = M[(a·q+b),(c·s+d)]`.
///
/// Applying it again with `row_split = (p, r)` and `col_split = (q, s)`
/// restores the input.
pub fn realign_with(
    mat: &ComplexMatrix,
    row_split: (usize, usize),
    col_split: (usize, usize),
) -> ComplexMatrix {
    let (p, q) = row_split;
    let (r, s) = col_split;
    assert_eq!(mat.rows(), p * q, "row split does not match matrix rows");
    assert_eq!(mat.cols(), r * s, "column split does not match matrix columns");
    ComplexMatrix::from_fn(p * r, q * s, |row, col| {
        let (a, c) = (row / r, row % r);
        let (b, d) = (col / s, col % s);
        mat[(a * q + b, c * s + d)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matops::{hermitian_eigenvalues, trace_norm, StateVector};

    fn bell() -> BipartiteState {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        let psi = StateVector::new(dims, vec![Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)]).unwrap();
        BipartiteState::from_pure(&psi)
    }

    fn max_entangled(m: usize) -> BipartiteState {
        let dims = BipartiteDims::new(m, m).unwrap();
        let mu = vec![1.0 / m as f64; m];
        BipartiteState::from_pure(&StateVector::from_schmidt(dims, &mu).unwrap())
    }

    #[test]
    fn product_and_bell_reductions() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let prod = BipartiteState::from_pure(&StateVector::from_schmidt(dims, &[1.0]).unwrap());
        let ra = partial_trace(&prod, Subsystem::A);
        assert_eq!(ra, ComplexMatrix::from_real_diag(&[1.0, 0.0]));
        let rb = partial_trace(&bell(), Subsystem::A);
        assert!(rb.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn partial_transpose_of_bell() {
        let pt = partial_transpose(&bell());
        let ev = hermitian_eigenvalues(&pt).unwrap();
        for (a, b) in ev.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((trace_norm(&pt).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_is_involution() {
        let s = bell();
        let once = partial_transpose(&s);
        let twice = partial_transpose_raw(&once, s.dims());
        assert_eq!(twice, *s.mat());
    }

    #[test]
    fn realign_shapes_and_norms() {
        let dims = BipartiteDims::new(2, 3).unwrap();
        let prod = BipartiteState::from_pure(&StateVector::from_schmidt(dims, &[1.0]).unwrap());
        let r = realign(&prod);
        assert_eq!((r.rows(), r.cols()), (4, 9));
        assert!((trace_norm(&r).unwrap() - 1.0).abs() < 1e-12);
        assert!((trace_norm(&realign(&bell())).unwrap() - 2.0).abs() < 1e-12);
        for m in [2, 3] {
            let s = max_entangled(m);
            assert!((trace_norm(&realign(&s)).unwrap() - m as f64).abs() < 1e-9);
            assert!((trace_norm(&partial_transpose(&s)).unwrap() - m as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn realign_round_trip_is_exact() {
        let dims = BipartiteDims::new(2, 3).unwrap();
        let s = crate::oracles::random_state(dims, crate::oracles::StateKind::MixedRank(4), crate::Seed(5)).unwrap();
        let r = realign(&s);
        let back = realign_with(&r, (2, 2), (3, 3));
        assert_eq!(back, *s.mat());
    }

    #[test]
    fn purity_examples() {
        assert!((purity(&ComplexMatrix::identity(3).scale(1.0 / 3.0)).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let mut diag = vec![0.1 / 9.0; 9];
        diag[0] += 0.9;
        let p = purity(&ComplexMatrix::from_real_diag(&diag)).unwrap();
        // independent: 0.9111² + 8·0.0111²
        let expect = (0.9 + 0.1 / 9.0f64).powi(2) + 8.0 * (0.1 / 9.0f64).powi(2);
        assert!((p - expect).abs() < 1e-14);
        assert!((p - 0.8311).abs() < 1e-4);
        assert!(purity(&ComplexMatrix::zeros(2, 3)).is_err());
    }
}
