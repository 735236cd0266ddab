//! Shared instance builders for the criterion benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use featsel_core::selection::Objective;
use featsel_core::testgen;

/// Geometry-backed selection instance with `n` triangulable candidates.
pub fn bench_instance(horizon: usize, n: usize, seed: u64) -> Objective {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    testgen::random_geometric_instance(&mut rng, horizon, n, 1.0)
}
