//! Bearing-vector camera model over the horizon: visibility simulation,
//! stacked measurement matrices and per-feature information matrices.
//!
//! For a feature visible at offset `tau` with unit bearing `u` (camera
//! frame), the measurement rows contribute the blocks
//! `F_tau = U (R_tau R_c)^T` at the columns of frame `tau` and
//! `E_tau = -U (R_tau R_c)^T`, where `U = skew(u)`. Marginalizing the
//! landmark position out of the joint information matrix by Schur
//! complement yields the feature's horizon information matrix
//! `H = sigma^-2 (F^T F - F^T E (E^T E)^-1 E^T F)`.

use nalgebra::{DMatrix, Matrix3, Vector3};
use thiserror::Error;

use crate::numerics::{self, NumericsError, SymmetricMatrix};

#[derive(Debug, Clone, Error)]
pub enum VisionError {
    #[error("matrix is not a rotation (orthogonality/determinant defect {defect:.3e})")]
    NotARotation { defect: f64 },
    #[error("invalid camera parameter: {0}")]
    InvalidRig(String),
    #[error("pose sequence length {actual} does not cover horizon (need {expected})")]
    PoseLength { expected: usize, actual: usize },
    #[error("feature coincides with camera center at frame {frame}")]
    DegenerateGeometry { frame: usize },
    #[error("feature observed in no frame")]
    NoVisibleFrame,
    #[error("feature not triangulable: {0}")]
    TriangulationFailure(NumericsError),
    #[error("trace shortcut requires n_f >= 2, got {n_frames}")]
    TooFewFrames { n_frames: usize },
    #[error("numerics failure: {0}")]
    Numerics(#[from] NumericsError),
}

fn check_rotation(r: &Matrix3<f64>) -> Result<(), VisionError> {
    let ortho = (r.transpose() * r - Matrix3::identity()).abs().max();
    let det = (r.determinant() - 1.0).abs();
    let defect = ortho.max(det);
    if defect > 1e-9 {
        return Err(VisionError::NotARotation { defect });
    }
    Ok(())
}

/// Camera extrinsics and visibility gate parameters.
#[derive(Debug, Clone)]
pub struct CameraRig {
    pub rotation: Matrix3<f64>,
    pub offset: Vector3<f64>,
    pub fov_half_angle: f64,
    pub max_range: f64,
}

impl CameraRig {
    pub fn new(
        rotation: Matrix3<f64>,
        offset: Vector3<f64>,
        fov_half_angle: f64,
        max_range: f64,
    ) -> Result<Self, VisionError> {
        check_rotation(&rotation)?;
        if !(fov_half_angle > 0.0 && fov_half_angle < std::f64::consts::FRAC_PI_2) {
            return Err(VisionError::InvalidRig(format!(
                "fov_half_angle {fov_half_angle} outside (0, pi/2)"
            )));
        }
        if max_range <= 0.0 || max_range.is_nan() {
            return Err(VisionError::InvalidRig(format!(
                "max_range {max_range} must be positive"
            )));
        }
        Ok(Self {
            rotation,
            offset,
            fov_half_angle,
            max_range,
        })
    }
}

/// Ground-truth robot poses over the horizon offsets `0..=M`.
#[derive(Debug, Clone)]
pub struct PoseSequence {
    pub positions: Vec<Vector3<f64>>,
    pub rotations: Vec<Matrix3<f64>>,
}

impl PoseSequence {
    pub fn new(
        positions: Vec<Vector3<f64>>,
        rotations: Vec<Matrix3<f64>>,
    ) -> Result<Self, VisionError> {
        if positions.len() != rotations.len() {
            return Err(VisionError::PoseLength {
                expected: positions.len(),
                actual: rotations.len(),
            });
        }
        for r in &rotations {
            check_rotation(r)?;
        }
        Ok(Self {
            positions,
            rotations,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Visibility of one feature over the horizon: frame offsets plus the unit
/// bearing (camera frame) per visible frame.
#[derive(Debug, Clone)]
pub struct Visibility {
    pub frames: Vec<usize>,
    pub bearings: Vec<Vector3<f64>>,
}

impl Visibility {
    pub fn n_frames(&self) -> usize {
        self.frames.len()
    }
}

/// A feature's simulated track with assembled stacked matrices.
#[derive(Debug, Clone)]
pub struct FeatureTrack {
    pub id: u32,
    pub position: Vector3<f64>,
    pub frames: Vec<usize>,
    pub bearings: Vec<Vector3<f64>>,
    pub f_mat: DMatrix<f64>,
    pub e_mat: DMatrix<f64>,
}

impl FeatureTrack {
    pub fn n_frames(&self) -> usize {
        self.frames.len()
    }
}

/// Feature information matrix with its frame count and trace.
#[derive(Debug, Clone)]
pub struct FeatureInfo {
    pub id: u32,
    pub info: SymmetricMatrix,
    pub n_frames: usize,
    pub trace: f64,
}

impl FeatureInfo {
    pub fn new(id: u32, info: SymmetricMatrix, n_frames: usize) -> Self {
        let trace = info.trace();
        Self {
            id,
            info,
            n_frames,
            trace,
        }
    }
}

/// Frame-by-frame visibility test for one feature.
///
/// Frame `tau` sees the feature iff the feature lies within `max_range` of
/// the camera center `x_tau + R_tau x_c` and the angle between the camera
/// boresight (third column of `R_tau R_c`) and the feature direction is at
/// most `fov_half_angle`. The bearing is the unit direction to the feature
/// expressed in the camera frame.
pub fn simulate_visibility(
    poses: &PoseSequence,
    rig: &CameraRig,
    feature: &Vector3<f64>,
) -> Result<Visibility, VisionError> {
    let mut frames = Vec::new();
    let mut bearings = Vec::new();
    for tau in 0..poses.len() {
        let r_wc = poses.rotations[tau] * rig.rotation;
        let center = poses.positions[tau] + poses.rotations[tau] * rig.offset;
        let delta = feature - center;
        let dist = delta.norm();
        if dist < 1e-9 {
            return Err(VisionError::DegenerateGeometry { frame: tau });
        }
        let boresight = r_wc.column(2).into_owned();
        let cos_angle = boresight.dot(&delta) / dist;
        if dist <= rig.max_range && cos_angle >= rig.fov_half_angle.cos() {
            frames.push(tau);
            bearings.push(r_wc.transpose() * (delta / dist));
        }
    }
    Ok(Visibility { frames, bearings })
}

/// Assembles the stacked measurement matrices for one track.
///
/// `F` is `(3 n_f) x (3 (M + 1))` with the only nonzero 3x3 block of row
/// block `i` at the columns of its frame; `E` is `(3 n_f) x 3`.
pub fn build_fe(
    visibility: &Visibility,
    poses: &PoseSequence,
    rig: &CameraRig,
    horizon: usize,
) -> Result<(DMatrix<f64>, DMatrix<f64>), VisionError> {
    let n_f = visibility.n_frames();
    if n_f == 0 {
        return Err(VisionError::NoVisibleFrame);
    }
    if poses.len() < horizon + 1 {
        return Err(VisionError::PoseLength {
            expected: horizon + 1,
            actual: poses.len(),
        });
    }
    let mut f_mat = DMatrix::zeros(3 * n_f, 3 * (horizon + 1));
    let mut e_mat = DMatrix::zeros(3 * n_f, 3);
    for (i, (&tau, bearing)) in visibility
        .frames
        .iter()
        .zip(&visibility.bearings)
        .enumerate()
    {
        let u = numerics::skew(bearing)?;
        let block = u * (poses.rotations[tau] * rig.rotation).transpose();
        f_mat.view_mut((3 * i, 3 * tau), (3, 3)).copy_from(&block);
        e_mat.view_mut((3 * i, 0), (3, 3)).copy_from(&(-block));
    }
    Ok((f_mat, e_mat))
}

/// Convenience: simulate visibility and assemble a full track.
pub fn build_track(
    id: u32,
    position: &Vector3<f64>,
    poses: &PoseSequence,
    rig: &CameraRig,
    horizon: usize,
) -> Result<FeatureTrack, VisionError> {
    let vis = simulate_visibility(poses, rig, position)?;
    let (f_mat, e_mat) = build_fe(&vis, poses, rig, horizon)?;
    Ok(FeatureTrack {
        id,
        position: *position,
        frames: vis.frames,
        bearings: vis.bearings,
        f_mat,
        e_mat,
    })
}

/// Marginalizes the landmark out of the joint information matrix.
///
/// Returns the Schur complement `sigma^-2 (F^T F - F^T E (E^T E)^-1 E^T F)`.
/// Fails with a triangulation error when `E^T E` is singular or
/// ill-conditioned (single frame, collinear bearings).
pub fn feature_information(
    id: u32,
    f_mat: &DMatrix<f64>,
    e_mat: &DMatrix<f64>,
    sigma: f64,
) -> Result<FeatureInfo, VisionError> {
    let n_f = f_mat.nrows() / 3;
    let ftf = f_mat.transpose() * f_mat;
    let fte = f_mat.transpose() * e_mat;
    let ete = e_mat.transpose() * e_mat;
    let schur =
        numerics::schur_complement(&ftf, &fte, &ete).map_err(VisionError::TriangulationFailure)?;
    let info = SymmetricMatrix::new_unchecked(schur * sigma.powi(-2));
    Ok(FeatureInfo::new(id, info, n_f))
}

/// Trace of a feature's information matrix from its frame count alone:
/// `sigma^-2 (2 n_f - 3)`. No matrix is formed.
pub fn feature_trace_shortcut(n_frames: usize, sigma: f64) -> Result<f64, VisionError> {
    if n_frames < 2 {
        return Err(VisionError::TooFewFrames { n_frames });
    }
    Ok((2 * n_frames - 3) as f64 / (sigma * sigma))
}
