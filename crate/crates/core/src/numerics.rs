//! Dense symmetric linear-algebra kernel: Cholesky log-determinants, Schur
//! complements, skew operators and eigenvalue extremes.
//!
//! Everything here works on small dense matrices (horizon dimension is
//! `3 * (M + 1)` with M on the order of tens), so plain `DMatrix<f64>`
//! storage is used throughout. All functions are pure.

use nalgebra::{DMatrix, Matrix3, Vector3};
use thiserror::Error;

/// Relative symmetry tolerance accepted by [`SymmetricMatrix::new`].
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Condition-number gate on the eliminated block in [`schur_complement`].
pub const CONDITION_LIMIT: f64 = 1e12;

/// Diagonal jitter added once by [`cholesky_logdet_with_jitter`].
pub const PD_JITTER: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum NumericsError {
    #[error("matrix not symmetric at ({row},{col}): |a_ij - a_ji| = {delta:.3e}")]
    NotSymmetric { row: usize, col: usize, delta: f64 },
    #[error("matrix not positive definite: Cholesky pivot {pivot} = {value:.3e}")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("block singular or ill-conditioned: cond = {cond:.3e} (limit {limit:.1e})")]
    IllConditioned { cond: f64, limit: f64 },
    #[error("expected unit vector, got norm {norm}")]
    NotUnit { norm: f64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
}

/// Dense symmetric matrix with a validated, symmetrized payload.
///
/// Carries prior covariances/information matrices and per-feature
/// information matrices. Construction enforces symmetry up to
/// [`SYMMETRY_TOL`] and stores the exact average of the matrix with its
/// transpose, so downstream Cholesky factorizations never see asymmetry
/// drift.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: DMatrix<f64>,
}

impl SymmetricMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self, NumericsError> {
        if m.nrows() != m.ncols() {
            return Err(NumericsError::DimensionMismatch {
                expected: m.nrows(),
                actual: m.ncols(),
            });
        }
        for i in 0..m.nrows() {
            for j in (i + 1)..m.ncols() {
                let delta = (m[(i, j)] - m[(j, i)]).abs();
                if delta > SYMMETRY_TOL * f64::max(1.0, m[(i, j)].abs()) {
                    return Err(NumericsError::NotSymmetric {
                        row: i,
                        col: j,
                        delta,
                    });
                }
            }
        }
        Ok(Self::new_unchecked(m))
    }

    /// Symmetrizes without the tolerance check. For matrices that are
    /// symmetric by construction (sums of symmetric matrices, Schur
    /// complements already symmetrized).
    pub fn new_unchecked(m: DMatrix<f64>) -> Self {
        let dim = m.nrows();
        let sym = (&m + m.transpose()) * 0.5;
        Self { dim, data: sym }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            data: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: DMatrix::zeros(dim, dim),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        Self {
            dim,
            data: DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(diag)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }

    pub fn trace(&self) -> f64 {
        self.data.trace()
    }

    pub fn add(&self, other: &Self) -> Result<Self, NumericsError> {
        if self.dim != other.dim {
            return Err(NumericsError::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        Ok(Self::new_unchecked(&self.data + &other.data))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: &self.data * factor,
        }
    }

    /// Inverse via Cholesky. Fails on non-PD input.
    pub fn try_inverse(&self) -> Result<Self, NumericsError> {
        let chol = cholesky_factor(&self.data)?;
        // L L^T X = I  =>  X = L^-T L^-1
        let n = self.dim;
        let mut inv = DMatrix::identity(n, n);
        chol.solve_lower_triangular_mut(&mut inv);
        chol.transpose().solve_upper_triangular_mut(&mut inv);
        Ok(Self::new_unchecked(inv))
    }
}

/// Cross-product matrix of a unit vector: `skew(u) * v == u x v`.
pub fn skew(u: &Vector3<f64>) -> Result<Matrix3<f64>, NumericsError> {
    let norm = u.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(NumericsError::NotUnit { norm });
    }
    Ok(Matrix3::new(
        0.0, -u.z, u.y, //
        u.z, 0.0, -u.x, //
        -u.y, u.x, 0.0,
    ))
}

/// Lower Cholesky factor, reporting the failing pivot on non-PD input.
fn cholesky_factor(m: &DMatrix<f64>) -> Result<DMatrix<f64>, NumericsError> {
    let n = m.nrows();
    let mut l = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(NumericsError::NotPositiveDefinite { pivot: j, value: d });
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

/// `log det M` through the Cholesky factor; the determinant itself is
/// never formed.
pub fn cholesky_logdet(m: &SymmetricMatrix) -> Result<f64, NumericsError> {
    let l = cholesky_factor(m.matrix())?;
    Ok(2.0 * (0..m.dim()).map(|i| l[(i, i)].ln()).sum::<f64>())
}

/// Like [`cholesky_logdet`], but on a first factorization failure retries
/// exactly once with `PD_JITTER * I` added, then hard-fails.
pub fn cholesky_logdet_with_jitter(m: &SymmetricMatrix) -> Result<f64, NumericsError> {
    match cholesky_logdet(m) {
        Ok(v) => Ok(v),
        Err(_) => {
            let n = m.dim();
            let jittered =
                SymmetricMatrix::new_unchecked(m.matrix() + DMatrix::identity(n, n) * PD_JITTER);
            cholesky_logdet(&jittered)
        }
    }
}

/// Schur complement `A - B C^-1 B^T` of the block matrix `[[A, B], [B^T, C]]`.
///
/// `C` must be symmetric with condition number below [`CONDITION_LIMIT`];
/// callers treating `C = E^T E` map the failure to "feature not
/// triangulable". The result is symmetrized before returning.
pub fn schur_complement(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
) -> Result<DMatrix<f64>, NumericsError> {
    if a.nrows() != a.ncols() || c.nrows() != c.ncols() {
        return Err(NumericsError::DimensionMismatch {
            expected: a.nrows(),
            actual: a.ncols(),
        });
    }
    if b.nrows() != a.nrows() || b.ncols() != c.nrows() {
        return Err(NumericsError::DimensionMismatch {
            expected: a.nrows(),
            actual: b.nrows(),
        });
    }
    let c_sym = SymmetricMatrix::new_unchecked(c.clone());
    let (lo, hi) = eig_extremes(&c_sym);
    let cond = if lo.abs() < f64::MIN_POSITIVE {
        f64::INFINITY
    } else {
        hi.abs().max(lo.abs()) / hi.abs().min(lo.abs())
    };
    if lo <= 0.0 || lo.is_nan() || cond >= CONDITION_LIMIT {
        return Err(NumericsError::IllConditioned {
            cond,
            limit: CONDITION_LIMIT,
        });
    }
    let l = cholesky_factor(c_sym.matrix())?;
    // X = C^-1 B^T
    let mut x = b.transpose();
    l.solve_lower_triangular_mut(&mut x);
    l.transpose().solve_upper_triangular_mut(&mut x);
    let s = a - b * x;
    Ok((&s + s.transpose()) * 0.5)
}

/// Smallest and largest eigenvalue of a symmetric matrix.
pub fn eig_extremes(m: &SymmetricMatrix) -> (f64, f64) {
    let eig = m.matrix().clone().symmetric_eigenvalues();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in eig.iter() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}
