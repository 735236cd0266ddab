//! Stacked prediction-horizon prior from the linear motion model.
//!
//! The prior covers the `M + 1` stamps `t..t+M` inclusive; stacked indices
//! are 0-based offsets from `t`, so the stacked dimension is `3 * (M + 1)`.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use thiserror::Error;

use crate::numerics::{NumericsError, SymmetricMatrix};

#[derive(Debug, Clone, Error)]
pub enum MotionError {
    #[error("process noise covariance is not symmetric positive definite: {0}")]
    InvalidProcessNoise(NumericsError),
    #[error("initial covariance is not positive definite: {0}")]
    InvalidInitialCovariance(NumericsError),
    #[error("expected {expected} controls, got {actual}")]
    ControlLength { expected: usize, actual: usize },
    #[error("control dimension {actual} does not match input matrix ({expected})")]
    ControlDimension { expected: usize, actual: usize },
    #[error("numerics failure: {0}")]
    Numerics(#[from] NumericsError),
}

/// Linear motion model `x_tau = A x_{tau-1} + B u_tau + noise`, with
/// time-invariant process-noise covariance.
#[derive(Debug, Clone)]
pub struct MotionModel {
    pub state_matrix: Matrix3<f64>,
    pub input_matrix: DMatrix<f64>,
    pub process_noise: Matrix3<f64>,
}

impl MotionModel {
    pub fn new(
        state_matrix: Matrix3<f64>,
        input_matrix: DMatrix<f64>,
        process_noise: Matrix3<f64>,
    ) -> Result<Self, MotionError> {
        let lambda =
            SymmetricMatrix::new(DMatrix::from_iterator(3, 3, process_noise.iter().copied()))
                .map_err(MotionError::InvalidProcessNoise)?;
        crate::numerics::cholesky_logdet(&lambda).map_err(MotionError::InvalidProcessNoise)?;
        Ok(Self {
            state_matrix,
            input_matrix,
            process_noise,
        })
    }

    /// Model with no control input.
    pub fn autonomous(
        state_matrix: Matrix3<f64>,
        process_noise: Matrix3<f64>,
    ) -> Result<Self, MotionError> {
        Self::new(state_matrix, DMatrix::zeros(3, 0), process_noise)
    }
}

/// Stacked horizon prior: mean, covariance and its inverse.
#[derive(Debug, Clone)]
pub struct HorizonPrior {
    pub horizon: usize,
    pub mean: DVector<f64>,
    pub sigma: SymmetricMatrix,
    pub hbar: SymmetricMatrix,
}

impl HorizonPrior {
    pub fn dim(&self) -> usize {
        3 * (self.horizon + 1)
    }
}

/// Builds the stacked prior over offsets `0..=M`.
///
/// Diagonal blocks follow `S_tau = A S_{tau-1} A^T + Lambda`; the
/// cross-covariance between offsets `tau1 < tau2` is
/// `S_{tau1} (A^(tau2-tau1))^T`. Controls shift the mean only. The
/// information matrix is the Cholesky-based inverse of the stacked
/// covariance.
pub fn propagate_prior(
    model: &MotionModel,
    mu0: &Vector3<f64>,
    sigma0: &Matrix3<f64>,
    controls: &[DVector<f64>],
    horizon: usize,
) -> Result<HorizonPrior, MotionError> {
    if controls.len() != horizon {
        return Err(MotionError::ControlLength {
            expected: horizon,
            actual: controls.len(),
        });
    }
    let m_in = model.input_matrix.ncols();
    for u in controls {
        if u.len() != m_in {
            return Err(MotionError::ControlDimension {
                expected: m_in,
                actual: u.len(),
            });
        }
    }
    let s0 = SymmetricMatrix::new(DMatrix::from_iterator(3, 3, sigma0.iter().copied()))
        .map_err(MotionError::InvalidInitialCovariance)?;
    crate::numerics::cholesky_logdet(&s0).map_err(MotionError::InvalidInitialCovariance)?;

    let n = 3 * (horizon + 1);
    let a = &model.state_matrix;

    // per-offset diagonal blocks and means
    let mut diag: Vec<Matrix3<f64>> = Vec::with_capacity(horizon + 1);
    let mut means: Vec<Vector3<f64>> = Vec::with_capacity(horizon + 1);
    diag.push(*sigma0);
    means.push(*mu0);
    for step in 0..horizon {
        let prev = diag[step];
        diag.push(a * prev * a.transpose() + model.process_noise);
        let mut mu = a * means[step];
        if m_in > 0 {
            let bu = &model.input_matrix * &controls[step];
            mu += Vector3::new(bu[0], bu[1], bu[2]);
        }
        means.push(mu);
    }

    let mut sigma = DMatrix::zeros(n, n);
    let mut mean = DVector::zeros(n);
    for tau in 0..=horizon {
        sigma
            .view_mut((3 * tau, 3 * tau), (3, 3))
            .copy_from(&diag[tau]);
        mean.rows_mut(3 * tau, 3).copy_from(&means[tau]);
    }
    for (tau1, block) in diag.iter().enumerate() {
        let mut a_pow = Matrix3::identity();
        for tau2 in (tau1 + 1)..=horizon {
            a_pow = a * a_pow;
            // cov(x_tau1, x_tau2) = S_tau1 * (A^(tau2-tau1))^T
            let upper = block * a_pow.transpose();
            sigma
                .view_mut((3 * tau1, 3 * tau2), (3, 3))
                .copy_from(&upper);
            sigma
                .view_mut((3 * tau2, 3 * tau1), (3, 3))
                .copy_from(&upper.transpose());
        }
    }

    let sigma = SymmetricMatrix::new_unchecked(sigma);
    let hbar = sigma.try_inverse()?;
    Ok(HorizonPrior {
        horizon,
        mean,
        sigma,
        hbar,
    })
}
