//! Property suites for the numeric kernel, the vision model and the
//! selection objective.

use nalgebra::{DMatrix, Vector3};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use featsel_core::numerics::{self, SymmetricMatrix};
use featsel_core::selection;
use featsel_core::testgen;
use featsel_core::vision;

fn unit_vector() -> impl Strategy<Value = Vector3<f64>> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("nonzero", |(x, y, z)| (x * x + y * y + z * z).sqrt() > 1e-3)
        .prop_map(|(x, y, z)| Vector3::new(x, y, z).normalize())
}

proptest! {
    #[test]
    fn skew_gram_is_projector(u in unit_vector()) {
        let s = numerics::skew(&u).unwrap();
        let gram = s.transpose() * s;
        let projector = nalgebra::Matrix3::identity() - u * u.transpose();
        prop_assert!((gram - projector).abs().max() <= 1e-12);
    }

    #[test]
    fn logdet_additive_over_block_diagonal(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = testgen::random_pd(&mut rng, 3);
        let b = testgen::random_pd(&mut rng, 4);
        let mut block = DMatrix::zeros(7, 7);
        block.view_mut((0, 0), (3, 3)).copy_from(a.matrix());
        block.view_mut((3, 3), (4, 4)).copy_from(b.matrix());
        let block = SymmetricMatrix::new_unchecked(block);
        let lhs = numerics::cholesky_logdet(&a).unwrap() + numerics::cholesky_logdet(&b).unwrap();
        prop_assert!((lhs - numerics::cholesky_logdet(&block).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn schur_of_pd_block_matrix_is_pd(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let full = testgen::random_pd(&mut rng, 7);
        let a = full.matrix().view((0, 0), (4, 4)).into_owned();
        let b = full.matrix().view((0, 4), (4, 3)).into_owned();
        let c = full.matrix().view((4, 4), (3, 3)).into_owned();
        let s = numerics::schur_complement(&a, &b, &c).unwrap();
        let s = SymmetricMatrix::new_unchecked(s);
        prop_assert!(numerics::cholesky_logdet(&s).is_ok());
    }

    #[test]
    fn eig_extremes_bracket_mean_eigenvalue(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = testgen::random_pd(&mut rng, 6);
        let (lo, hi) = numerics::eig_extremes(&m);
        let mean = m.trace() / m.dim() as f64;
        prop_assert!(lo <= mean + 1e-12);
        prop_assert!(mean <= hi + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn objective_monotone_and_submodular(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let obj = testgen::random_instance(&mut rng, 5, 7);
        let ids = obj.candidate_ids();
        let a = &ids[..2];
        let b = &ids[..4];
        let e = ids[6];
        prop_assert!(obj.rho(a).unwrap() <= obj.rho(b).unwrap() + 1e-10);
        let ga = obj.marginal_gain(a, e).unwrap();
        let gb = obj.marginal_gain(b, e).unwrap();
        prop_assert!(ga >= gb - 1e-10);
    }

    #[test]
    fn covariance_shrinks_in_loewner_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let obj = testgen::random_instance(&mut rng, 5, 6);
        let ids = obj.candidate_ids();
        let base: Vec<u32> = ids[..2].to_vec();
        let mut grown = base.clone();
        grown.push(ids[4]);
        let cov_max = |ids: &[u32]| {
            let h = obj.information(ids).unwrap();
            let inv = h.try_inverse().unwrap();
            numerics::eig_extremes(&inv).1
        };
        prop_assert!(cov_max(&grown) <= cov_max(&base) + 1e-10);
    }

    #[test]
    fn surrogate_invariant_to_storage_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = 5;
        let hbar = testgen::random_pd(&mut rng, dim);
        let mut entries: Vec<(u32, vision::FeatureInfo)> = (0..8u32)
            .map(|id| {
                let n_f = rng.gen_range(2..=9);
                (id, vision::FeatureInfo::new(id, testgen::random_psd(&mut rng, dim, 2), n_f))
            })
            .collect();
        let forward = selection::Objective::new(
            hbar.clone(),
            entries.iter().cloned().collect(),
            1.0,
        ).unwrap();
        // insert in a shuffled order; the selection must not change
        for i in 0..entries.len() {
            let j = rng.gen_range(i..entries.len());
            entries.swap(i, j);
        }
        let shuffled = selection::Objective::new(hbar, entries.into_iter().collect(), 1.0).unwrap();
        let a = selection::surrogate_greedy(&forward, 4).unwrap();
        let b = selection::surrogate_greedy(&shuffled, 4).unwrap();
        prop_assert_eq!(a.selected, b.selected);
    }
}

#[test]
fn information_invariant_to_rigid_reexpression() {
    // rotating the world frame conjugates H by blkdiag(R0) and leaves its
    // eigenvalues unchanged
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10 {
        let horizon = 5;
        let track = testgen::random_track(&mut rng, horizon, 4);
        let rig = vision::CameraRig::new(nalgebra::Matrix3::identity(), Vector3::zeros(), 1.3, 1e6)
            .unwrap();

        // reconstruct the pose sequence the track was built against is not
        // possible here, so build a fresh consistent pair instead
        let positions: Vec<Vector3<f64>> = (0..=horizon)
            .map(|_| Vector3::new(rng.gen(), rng.gen(), rng.gen()))
            .collect();
        let rotations: Vec<nalgebra::Matrix3<f64>> = (0..=horizon)
            .map(|_| testgen::random_rotation(&mut rng))
            .collect();
        let poses = vision::PoseSequence::new(positions.clone(), rotations.clone()).unwrap();
        let vis = vision::Visibility {
            frames: track.frames.clone(),
            bearings: track.bearings.clone(),
        };
        let (f1, e1) = vision::build_fe(&vis, &poses, &rig, horizon).unwrap();
        let h1 = match vision::feature_information(0, &f1, &e1, 1.0) {
            Ok(info) => info.info,
            Err(_) => continue,
        };

        let r0 = testgen::random_rotation(&mut rng);
        let rotated = vision::PoseSequence::new(
            positions.iter().map(|p| r0 * p).collect(),
            rotations.iter().map(|r| r0 * r).collect(),
        )
        .unwrap();
        let (f2, e2) = vision::build_fe(&vis, &rotated, &rig, horizon).unwrap();
        let h2 = vision::feature_information(0, &f2, &e2, 1.0).unwrap().info;

        let mut ev1 = h1.matrix().clone().symmetric_eigenvalues();
        let mut ev2 = h2.matrix().clone().symmetric_eigenvalues();
        let s1 = ev1.as_mut_slice();
        s1.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let s2 = ev2.as_mut_slice();
        s2.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in s1.iter().zip(s2.iter()) {
            assert!((a - b).abs() <= 1e-8 * (1.0 + a.abs()), "{a} vs {b}");
        }
    }
}
