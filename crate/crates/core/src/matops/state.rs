use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{hermitian_eigenvalues, ComplexMatrix};
use crate::{Error, Result};

/// Default cap on the total dimension `m·n`.
pub const DEFAULT_MAX_TOTAL_DIM: usize = 64;

pub const HERMITIAN_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-9;
pub const PSD_TOL: f64 = 1e-8;
pub const NORM_TOL: f64 = 1e-12;

/// Which subsystem to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Local dimensions `m` (subsystem A) and `n` (subsystem B). Composite index
/// convention is `r = i·n + j` for A-index `i`, B-index `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BipartiteDims {
    pub m: usize,
    pub n: usize,
}

impl BipartiteDims {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        Self::with_limit(m, n, DEFAULT_MAX_TOTAL_DIM)
    }

    pub fn with_limit(m: usize, n: usize, max_total: usize) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::UnsupportedDims {
                m,
                n,
                reason: "both local dimensions must be at least 2".into(),
            });
        }
        if m.saturating_mul(n) > max_total {
            return Err(Error::UnsupportedDims {
                m,
                n,
                reason: format!("m·n exceeds the limit {max_total}"),
            });
        }
        Ok(Self { m, n })
    }

    pub fn total(self) -> usize {
        self.m * self.n
    }

    /// `min(m, n)`, the dimension the entropy envelopes are built for.
    pub fn envelope_dim(self) -> usize {
        self.m.min(self.n)
    }

    pub fn swapped(self) -> Self {
        Self { m: self.n, n: self.m }
    }
}

/// A validated bipartite density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    mat: ComplexMatrix,
    dims: BipartiteDims,
}

impl BipartiteState {
    /// Validates shape, finiteness, hermiticity, unit trace and positivity.
    pub fn new(mat: ComplexMatrix, dims: BipartiteDims) -> Result<Self> {
        let d = dims.total();
        if mat.rows() != d || mat.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                got: mat.rows() * mat.cols(),
            });
        }
        for i in 0..d {
            for j in 0..d {
                let z = mat[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        let herm = mat.hermitian_deviation();
        if herm > HERMITIAN_TOL {
            return Err(Error::Invariant {
                invariant: "hermitian",
                deviation: herm,
            });
        }
        let tr = mat.trace();
        let tdev = (tr - Complex64::new(1.0, 0.0)).norm();
        if tdev > TRACE_TOL {
            return Err(Error::Invariant {
                invariant: "unit trace",
                deviation: tdev,
            });
        }
        let min_eig = hermitian_eigenvalues(&mat)?[0];
        if min_eig < -PSD_TOL {
            return Err(Error::Invariant {
                invariant: "positive semidefinite",
                deviation: -min_eig,
            });
        }
        Ok(Self { mat, dims })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        Self {
            mat: ComplexMatrix::outer(psi.amplitudes()),
            dims: psi.dims(),
        }
    }

    pub fn maximally_mixed(dims: BipartiteDims) -> Self {
        let d = dims.total();
        Self {
            mat: ComplexMatrix::identity(d).scale(1.0 / d as f64),
            dims,
        }
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }
}

/// A normalised pure state on `C^m ⊗ C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: BipartiteDims,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(dims: BipartiteDims, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Invariant {
                invariant: "unit norm",
                deviation: (norm - 1.0).abs(),
            });
        }
        Ok(Self { dims, amplitudes })
    }

    /// Normalises `amplitudes` before construction.
    pub fn normalized(dims: BipartiteDims, amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Invariant {
                invariant: "unit norm",
                deviation: 1.0,
            });
        }
        Self::new(dims, amplitudes.into_iter().map(|z| z / norm).collect())
    }

    /// `Σ_i sqrt(μ_i) |ii>` for a Schmidt vector `μ` of length ≤ min(m, n).
    pub fn from_schmidt(dims: BipartiteDims, mu: &[f64]) -> Result<Self> {
        if mu.len() > dims.envelope_dim() {
            return Err(Error::DimensionMismatch {
                expected: dims.envelope_dim(),
                got: mu.len(),
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dims.total()];
        for (i, &p) in mu.iter().enumerate() {
            amps[i * dims.n + i] = Complex64::new(p.max(0.0).sqrt(), 0.0);
        }
        Self::normalized(dims, amps)
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }
}
