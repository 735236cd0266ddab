//! Seeded generators for synthetic tracks, matrices and selection
//! instances. Used by the test suites and the benchmark harness; kept in
//! the library so every consumer draws from the same deterministic
//! constructions.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, Matrix3, Vector3};
use rand::Rng;

use crate::numerics::SymmetricMatrix;
use crate::selection::Objective;
use crate::vision::{self, CameraRig, FeatureInfo, FeatureTrack, PoseSequence, Visibility};

pub fn random_unit(rng: &mut impl Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 {
            return v / n;
        }
    }
}

/// Uniform-ish random rotation from a random axis and angle.
pub fn random_rotation(rng: &mut impl Rng) -> Matrix3<f64> {
    let axis = random_unit(rng);
    let angle = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle)
        .matrix()
        .into_owned()
}

pub fn random_pd(rng: &mut impl Rng, dim: usize) -> SymmetricMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
    SymmetricMatrix::new_unchecked(&g * g.transpose() + DMatrix::identity(dim, dim) * 0.5)
}

/// Random PSD matrix of the given rank (Gram matrix of `rank` vectors).
pub fn random_psd(rng: &mut impl Rng, dim: usize, rank: usize) -> SymmetricMatrix {
    let g = DMatrix::from_fn(dim, rank, |_, _| rng.gen_range(-1.0..1.0));
    SymmetricMatrix::new_unchecked(&g * g.transpose())
}

/// Random track with `n_frames` visible frames over the horizon: random
/// poses and bearings, retried until the bearing set is triangulable.
pub fn random_track(rng: &mut impl Rng, horizon: usize, n_frames: usize) -> FeatureTrack {
    assert!(n_frames <= horizon + 1, "n_frames must fit in the horizon");
    let rig = CameraRig::new(Matrix3::identity(), Vector3::zeros(), 1.3, 1e6).unwrap();
    loop {
        let positions: Vec<Vector3<f64>> = (0..=horizon)
            .map(|_| {
                Vector3::new(
                    rng.gen_range(-5.0..5.0),
                    rng.gen_range(-5.0..5.0),
                    rng.gen_range(-5.0..5.0),
                )
            })
            .collect();
        let rotations: Vec<Matrix3<f64>> = (0..=horizon).map(|_| random_rotation(rng)).collect();
        let poses = PoseSequence::new(positions, rotations).unwrap();

        // distinct frame offsets, sorted
        let mut offsets: Vec<usize> = (0..=horizon).collect();
        for i in 0..n_frames {
            let j = rng.gen_range(i..offsets.len());
            offsets.swap(i, j);
        }
        let mut frames: Vec<usize> = offsets[..n_frames].to_vec();
        frames.sort_unstable();
        let bearings: Vec<Vector3<f64>> = (0..n_frames).map(|_| random_unit(rng)).collect();

        let vis = Visibility {
            frames: frames.clone(),
            bearings: bearings.clone(),
        };
        let (f_mat, e_mat) = vision::build_fe(&vis, &poses, &rig, horizon).unwrap();
        let track = FeatureTrack {
            id: 0,
            position: Vector3::zeros(),
            frames,
            bearings,
            f_mat,
            e_mat,
        };
        if n_frames < 2 || vision::feature_information(0, &track.f_mat, &track.e_mat, 1.0).is_ok() {
            return track;
        }
    }
}

/// Selection instance with a random PD prior and `n` random low-rank PSD
/// candidate increments (ids `0..n`).
pub fn random_instance(rng: &mut impl Rng, dim: usize, n: usize) -> Objective {
    let hbar = random_pd(rng, dim);
    let mut candidates = BTreeMap::new();
    for id in 0..n as u32 {
        let rank = rng.gen_range(1..=3.min(dim));
        let n_frames = rng.gen_range(2..=8);
        candidates.insert(
            id,
            FeatureInfo::new(id, random_psd(rng, dim, rank), n_frames),
        );
    }
    Objective::new(hbar, candidates, 1.0).unwrap()
}

/// Small feasible scenario config: forward-facing line trajectory with
/// features scattered in front of the camera.
pub fn example_config() -> crate::scenario::ScenarioConfig {
    use crate::scenario::*;
    ScenarioConfig {
        version: 1,
        horizon: 8,
        sigma: 1.0,
        q: 3,
        epsilon: 0.2,
        seeds: vec![1, 2],
        algorithms: vec![Algorithm::Greedy, Algorithm::Surrogate],
        trajectory: Trajectory::Line {
            start: [0.0, 0.0, 0.0],
            direction: [0.0, 0.0, 1.0],
            step: 0.5,
        },
        motion: MotionSection {
            a: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            lambda: [[0.1, 0.0, 0.0], [0.0, 0.1, 0.0], [0.0, 0.0, 0.1]],
            initial_mean: [0.0, 0.0, 0.0],
            initial_cov: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        },
        rig: RigSection {
            fov_half_angle: 1.2,
            max_range: 60.0,
            r_c: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            x_c: [0.0, 0.0, 0.0],
        },
        features: FeatureSection {
            count: 40,
            box_min: [-6.0, -6.0, 8.0],
            box_max: [6.0, 6.0, 30.0],
            placement_seed: 99,
        },
    }
}

/// Selection instance built from real geometry: random triangulable
/// tracks converted to information matrices over a shared prior.
pub fn random_geometric_instance(
    rng: &mut impl Rng,
    horizon: usize,
    n: usize,
    sigma: f64,
) -> Objective {
    let dim = 3 * (horizon + 1);
    let hbar = random_pd(rng, dim);
    let mut candidates = BTreeMap::new();
    let mut id = 0u32;
    while candidates.len() < n {
        let n_frames = rng.gen_range(2..=horizon + 1);
        let track = random_track(rng, horizon, n_frames);
        if let Ok(mut info) = vision::feature_information(id, &track.f_mat, &track.e_mat, sigma) {
            info.id = id;
            candidates.insert(id, info);
            id += 1;
        }
    }
    Objective::new(hbar, candidates, sigma).unwrap()
}
