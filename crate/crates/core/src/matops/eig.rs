//! Cyclic Jacobi eigensolver for Hermitian matrices, and the singular-value
//! helpers built on it.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::{Error, Result};

/// Largest tolerated `max |M - M†|`, relative to `max(1, max |M|)`.
pub const HERMITIAN_TOL: f64 = 1e-9;
const CONVERGENCE_REL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `M = V diag(values) V†`, values ascending.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns.
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * self.values[k] * v[(j, k)].conj()).sum()
        })
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.values.len()).map(|i| self.vectors[(i, k)]).collect()
    }
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
///
/// The input is symmetrised as `(M + M†)/2` first; matrices further than
/// [`HERMITIAN_TOL`] from Hermitian are rejected.
pub fn hermitian_eig(mat: &ComplexMatrix) -> Result<HermitianEig> {
    if !mat.is_square() {
        return Err(Error::NotSquare {
            rows: mat.rows(),
            cols: mat.cols(),
        });
    }
    let dev = mat.hermitian_deviation();
    if dev > HERMITIAN_TOL * mat.max_abs().max(1.0) {
        return Err(Error::Invariant {
            invariant: "hermitian",
            deviation: dev,
        });
    }
    let n = mat.rows();
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (mat[(i, j)] + mat[(j, i)].conj()) * 0.5);
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);

    let target = (CONVERGENCE_REL * a.frobenius_norm()).powi(2);
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_mass(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let values: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| {
        values[x].total_cmp(&values[y]).then_with(|| {
            for r in 0..n {
                let (u, w) = (v[(r, x)], v[(r, y)]);
                match u.re.total_cmp(&w.re).then(u.im.total_cmp(&w.im)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    });
    Ok(HermitianEig {
        values: order.iter().map(|&k| values[k]).collect(),
        vectors: ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]),
    })
}

/// Eigenvalues only.
pub fn hermitian_eigenvalues(mat: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eig(mat).map(|e| e.values)
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

/// One Jacobi rotation annihilating `a[p][q]`: `a <- G† a G`, `v <- v G`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    let phase = apq / r; // e^{iφ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let pc = phase.conj(); // e^{-iφ}

    let n = a.rows();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let nkp = akp * c - akq * pc * s;
        let nkq = akp * s + akq * pc * c;
        a[(k, p)] = nkp;
        a[(k, q)] = nkq;
        a[(p, k)] = nkp.conj();
        a[(q, k)] = nkq.conj();
    }
    a[(p, p)] = Complex64::new(app - t * r, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * r, 0.0);
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * pc * s;
        v[(k, q)] = vkp * s + vkq * pc * c;
    }
}

/// Singular values of an arbitrary matrix, descending.
///
/// Computed from the Hermitian dilation `[[0, M], [M†, 0]]`, whose spectrum is
/// `±σ_i` padded with zeros. This keeps the absolute accuracy of the Jacobi
/// solver on rank-deficient inputs, where square roots of `M†M` eigenvalues
/// would only be accurate to about `sqrt(eps)`.
pub fn singular_values(mat: &ComplexMatrix) -> Result<Vec<f64>> {
    let (r, c) = (mat.rows(), mat.cols());
    let dil = ComplexMatrix::from_fn(r + c, r + c, |i, j| {
        if i < r && j >= r {
            mat[(i, j - r)]
        } else if i >= r && j < r {
            mat[(j, i - r)].conj()
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let vals = hermitian_eigenvalues(&dil)?;
    let k = r.min(c);
    let mut sv: Vec<f64> = vals.iter().rev().take(k).map(|&x| x.max(0.0)).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Sum of singular values.
pub fn trace_norm(mat: &ComplexMatrix) -> Result<f64> {
    if mat.is_square() && mat.hermitian_deviation() <= 1e-14 * mat.max_abs().max(1.0) {
        return Ok(hermitian_eigenvalues(mat)?.iter().map(|x| x.abs()).sum());
    }
    Ok(singular_values(mat)?.iter().sum())
}
