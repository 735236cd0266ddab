//! Scenario configuration and deterministic scenario generation for the
//! benchmark harness.
//!
//! Configs are strict TOML: unknown keys are rejected and a `version`
//! field is required, so a report digest always refers to a fully
//! resolved, unambiguous scenario.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::{DVector, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::motion::{self, HorizonPrior, MotionError, MotionModel};
use crate::selection::Objective;
use crate::vision::{self, CameraRig, FeatureInfo, FeatureTrack, PoseSequence, VisionError};

pub const CONFIG_VERSION: u32 = 1;

/// Deterministic generator used for all scenario randomness; recorded in
/// the report so results are attributable to a specific stream.
pub const RNG_NAME: &str = "chacha8";

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("config error: {0}")]
    Config(String),
    #[error("config i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("scenario infeasible: {triangulable} triangulable features of {total} sampled, need {required}")]
    Infeasible {
        triangulable: usize,
        total: usize,
        required: usize,
    },
    #[error("motion model error: {0}")]
    Motion(#[from] MotionError),
    #[error("vision model error: {0}")]
    Vision(#[from] VisionError),
    #[error("selection setup error: {0}")]
    Selection(#[from] crate::selection::SelectionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Greedy,
    Stochastic,
    Surrogate,
    Brute,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Stochastic => "stochastic",
            Algorithm::Surrogate => "surrogate",
            Algorithm::Brute => "brute",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(Algorithm::Greedy),
            "stochastic" => Ok(Algorithm::Stochastic),
            "surrogate" => Ok(Algorithm::Surrogate),
            "brute" => Ok(Algorithm::Brute),
            other => Err(format!(
                "unknown algorithm '{other}' (expected greedy|stochastic|surrogate|brute)"
            )),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "lowercase")]
pub enum Trajectory {
    /// Straight line from `start`, one `step` along `direction` per frame;
    /// the body frame faces along `direction`.
    Line {
        start: [f64; 3],
        direction: [f64; 3],
        step: f64,
    },
    /// Planar arc around `center` at `radius`, heading tangent.
    Arc {
        center: [f64; 3],
        radius: f64,
        start_angle: f64,
        angular_step: f64,
    },
    /// Explicit positions; the body frame faces the next waypoint.
    Waypoints { points: Vec<[f64; 3]> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionSection {
    /// 3x3 state matrix, row major.
    pub a: [[f64; 3]; 3],
    /// 3x3 process-noise covariance, row major.
    pub lambda: [[f64; 3]; 3],
    pub initial_mean: [f64; 3],
    pub initial_cov: [[f64; 3]; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RigSection {
    pub fov_half_angle: f64,
    pub max_range: f64,
    /// Camera-in-body rotation, row major.
    pub r_c: [[f64; 3]; 3],
    pub x_c: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureSection {
    pub count: usize,
    pub box_min: [f64; 3],
    pub box_max: [f64; 3],
    pub placement_seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub version: u32,
    pub horizon: usize,
    pub sigma: f64,
    pub q: usize,
    pub epsilon: f64,
    pub seeds: Vec<u64>,
    pub algorithms: Vec<Algorithm>,
    pub trajectory: Trajectory,
    pub motion: MotionSection,
    pub rig: RigSection,
    pub features: FeatureSection,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let err = |msg: String| Err(ScenarioError::Config(msg));
        if self.version != CONFIG_VERSION {
            return err(format!(
                "unsupported config version {} (expected {CONFIG_VERSION})",
                self.version
            ));
        }
        if self.horizon < 1 {
            return err("horizon must be >= 1".into());
        }
        if self.q < 1 {
            return err("q must be >= 1".into());
        }
        if self.features.count < self.q {
            return err(format!(
                "feature count {} must be >= q {}",
                self.features.count, self.q
            ));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return err(format!("epsilon {} must lie in (0, 1)", self.epsilon));
        }
        if self.sigma <= 0.0 || self.sigma.is_nan() {
            return err(format!("sigma {} must be positive", self.sigma));
        }
        if self.seeds.is_empty() {
            return err("at least one seed is required".into());
        }
        if self.algorithms.is_empty() {
            return err("at least one algorithm is required".into());
        }
        for axis in 0..3 {
            if self.features.box_max[axis] <= self.features.box_min[axis]
                || self.features.box_max[axis].is_nan()
                || self.features.box_min[axis].is_nan()
            {
                return err(format!(
                    "degenerate feature box on axis {axis}: [{}, {}]",
                    self.features.box_min[axis], self.features.box_max[axis]
                ));
            }
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ScenarioError> {
        let config: ScenarioConfig =
            toml::from_str(text).map_err(|e| ScenarioError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Stable hash of the resolved config plus the generator name.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(RNG_NAME.as_bytes());
        hasher.update(b":");
        hasher.update(canonical.as_bytes());
        hex_string(&hasher.finalize())
    }

    pub fn motion_model(&self) -> Result<MotionModel, MotionError> {
        MotionModel::autonomous(mat3(&self.motion.a), mat3(&self.motion.lambda))
    }

    pub fn camera_rig(&self) -> Result<CameraRig, VisionError> {
        CameraRig::new(
            mat3(&self.rig.r_c),
            Vector3::from_row_slice(&self.rig.x_c),
            self.rig.fov_half_angle,
            self.rig.max_range,
        )
    }

    pub fn poses(&self) -> Result<PoseSequence, VisionError> {
        trajectory_poses(&self.trajectory, self.horizon)
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn mat3(rows: &[[f64; 3]; 3]) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| rows[i][j])
}

/// Rotation whose third column (boresight, once composed with an identity
/// camera rotation) points along `dir`.
fn facing_rotation(dir: &Vector3<f64>) -> Matrix3<f64> {
    let z = if dir.norm() > 1e-12 {
        dir.normalize()
    } else {
        Vector3::new(0.0, 0.0, 1.0)
    };
    let pick = if z.x.abs() < 0.9 {
        Vector3::new(1.0, 0.0, 0.0)
    } else {
        Vector3::new(0.0, 1.0, 0.0)
    };
    let x = (pick - z * pick.dot(&z)).normalize();
    let y = z.cross(&x);
    Matrix3::from_columns(&[x, y, z])
}

pub fn trajectory_poses(
    trajectory: &Trajectory,
    horizon: usize,
) -> Result<PoseSequence, VisionError> {
    let count = horizon + 1;
    let (positions, rotations): (Vec<_>, Vec<_>) = match trajectory {
        Trajectory::Line {
            start,
            direction,
            step,
        } => {
            let start = Vector3::from_row_slice(start);
            let dir = Vector3::from_row_slice(direction);
            let rot = facing_rotation(&dir);
            let unit = if dir.norm() > 1e-12 {
                dir.normalize()
            } else {
                dir
            };
            (0..count)
                .map(|i| (start + unit * (*step * i as f64), rot))
                .unzip()
        }
        Trajectory::Arc {
            center,
            radius,
            start_angle,
            angular_step,
        } => {
            let center = Vector3::from_row_slice(center);
            (0..count)
                .map(|i| {
                    let theta = start_angle + angular_step * i as f64;
                    let pos =
                        center + Vector3::new(radius * theta.cos(), radius * theta.sin(), 0.0);
                    let tangent = Vector3::new(-theta.sin(), theta.cos(), 0.0);
                    (pos, facing_rotation(&tangent))
                })
                .unzip()
        }
        Trajectory::Waypoints { points } => {
            if points.len() < count {
                return Err(VisionError::PoseLength {
                    expected: count,
                    actual: points.len(),
                });
            }
            let pts: Vec<Vector3<f64>> = points
                .iter()
                .take(count)
                .map(|p| Vector3::from_row_slice(p))
                .collect();
            let rots: Vec<Matrix3<f64>> = (0..count)
                .map(|i| {
                    let next = if i + 1 < count { i + 1 } else { i };
                    let prev = if i + 1 < count { i } else { i - 1 };
                    facing_rotation(&(pts[next] - pts[prev]))
                })
                .collect();
            (pts, rots)
        }
    };
    PoseSequence::new(positions, rotations)
}

/// Why a sampled feature was excluded from the candidate set.
#[derive(Debug, Clone, Serialize)]
pub struct RejectedFeature {
    pub id: u32,
    pub position: [f64; 3],
    pub reason: String,
}

/// Fully realized scenario: prior, poses, per-feature tracks and the
/// triangulable candidate map, with rejected features retained for the
/// report.
#[derive(Debug)]
pub struct Scenario {
    pub prior: HorizonPrior,
    pub poses: PoseSequence,
    pub tracks: Vec<FeatureTrack>,
    pub candidates: BTreeMap<u32, FeatureInfo>,
    pub rejected: Vec<RejectedFeature>,
    pub sigma: f64,
}

impl Scenario {
    pub fn objective(&self) -> Result<Objective, crate::selection::SelectionError> {
        Objective::new(self.prior.hbar.clone(), self.candidates.clone(), self.sigma)
    }
}

/// Builds the scenario for one run seed. Deterministic in
/// `(config, seed)`: feature placement mixes the config's placement seed
/// with the run seed into one ChaCha8 stream.
pub fn generate_scenario(config: &ScenarioConfig, seed: u64) -> Result<Scenario, ScenarioError> {
    config.validate()?;
    let model = config.motion_model()?;
    let prior = motion::propagate_prior(
        &model,
        &Vector3::zeros(),
        &mat3(&config.motion.initial_cov),
        &vec![DVector::zeros(0); config.horizon],
        config.horizon,
    )?;
    // config's initial mean enters the prior mean only
    let mut prior = prior;
    let mu0 = Vector3::from_row_slice(&config.motion.initial_mean);
    let mut mean = prior.mean.clone();
    let mut mu = mu0;
    let a = mat3(&config.motion.a);
    for tau in 0..=config.horizon {
        mean.rows_mut(3 * tau, 3).copy_from(&mu);
        mu = a * mu;
    }
    prior.mean = mean;

    let poses = config.poses()?;
    let rig = config.camera_rig()?;

    let mix = config.features.placement_seed ^ seed.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut rng = ChaCha8Rng::seed_from_u64(mix);

    let mut tracks = Vec::new();
    let mut candidates = BTreeMap::new();
    let mut rejected = Vec::new();
    for id in 0..config.features.count as u32 {
        let position = Vector3::new(
            rng.gen_range(config.features.box_min[0]..config.features.box_max[0]),
            rng.gen_range(config.features.box_min[1]..config.features.box_max[1]),
            rng.gen_range(config.features.box_min[2]..config.features.box_max[2]),
        );
        let vis = match vision::simulate_visibility(&poses, &rig, &position) {
            Ok(v) => v,
            Err(VisionError::DegenerateGeometry { frame }) => {
                rejected.push(RejectedFeature {
                    id,
                    position: [position.x, position.y, position.z],
                    reason: format!("degenerate geometry at frame {frame}"),
                });
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        if vis.frames.is_empty() {
            rejected.push(RejectedFeature {
                id,
                position: [position.x, position.y, position.z],
                reason: "never visible".into(),
            });
            continue;
        }
        let (f_mat, e_mat) = vision::build_fe(&vis, &poses, &rig, config.horizon)?;
        let track = FeatureTrack {
            id,
            position,
            frames: vis.frames,
            bearings: vis.bearings,
            f_mat,
            e_mat,
        };
        match vision::feature_information(id, &track.f_mat, &track.e_mat, config.sigma) {
            Ok(info) => {
                candidates.insert(id, info);
            }
            Err(VisionError::TriangulationFailure(e)) => {
                rejected.push(RejectedFeature {
                    id,
                    position: [position.x, position.y, position.z],
                    reason: format!("not triangulable ({} frames): {e}", track.n_frames()),
                });
            }
            Err(e) => return Err(e.into()),
        }
        tracks.push(track);
    }

    if candidates.len() < config.q {
        return Err(ScenarioError::Infeasible {
            triangulable: candidates.len(),
            total: config.features.count,
            required: config.q,
        });
    }

    Ok(Scenario {
        prior,
        poses,
        tracks,
        candidates,
        rejected,
        sigma: config.sigma,
    })
}
