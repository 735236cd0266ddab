//! Head-to-head benchmark execution: fans (seed x algorithm) combinations
//! out to a worker pool and reduces the rows into a report. Output is
//! identical for any worker count; only wall times vary.

use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::report::{BenchReport, ConstructionRow, RejectedRecord, ReportRow};
use crate::scenario::{self, Algorithm, ScenarioConfig, ScenarioError, RNG_NAME};
use crate::selection::{self, SelectionError, BRUTE_FORCE_LIMIT};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("selection failure: {0}")]
    Selection(#[from] SelectionError),
    #[error("brute force refused: C({n}, {q}) = {combinations} exceeds {limit}")]
    GuardRefused {
        n: usize,
        q: usize,
        combinations: u64,
        limit: u64,
    },
    #[error("worker pool error: {0}")]
    Pool(String),
}

fn run_seed(
    config: &ScenarioConfig,
    seed: u64,
) -> Result<(ConstructionRow, Vec<RejectedRecord>, Vec<ReportRow>), RunError> {
    let built_at = Instant::now();
    let scenario = scenario::generate_scenario(config, seed)?;
    let objective = scenario.objective()?;
    let construction = ConstructionRow {
        seed,
        wall_time_s: built_at.elapsed().as_secs_f64(),
        candidates: scenario.candidates.len(),
        rejected: scenario.rejected.len(),
    };
    let rejected: Vec<RejectedRecord> = scenario
        .rejected
        .iter()
        .map(|r| RejectedRecord::from_rejected(seed, r))
        .collect();

    let n = objective.len();
    if config.algorithms.contains(&Algorithm::Brute) {
        let combinations = selection::brute_force_combinations(n, config.q);
        if combinations > BRUTE_FORCE_LIMIT {
            return Err(RunError::GuardRefused {
                n,
                q: config.q,
                combinations,
                limit: BRUTE_FORCE_LIMIT,
            });
        }
    }

    let mut rows = Vec::new();
    for algorithm in &config.algorithms {
        let result = match algorithm {
            Algorithm::Greedy => selection::greedy(&objective, config.q)?,
            Algorithm::Stochastic => {
                selection::stochastic_greedy(&objective, config.q, config.epsilon, seed)?
            }
            Algorithm::Surrogate => selection::surrogate_greedy(&objective, config.q)?,
            Algorithm::Brute => selection::brute_force(&objective, config.q)?,
        };
        rows.push(ReportRow::from_result(
            algorithm.name(),
            seed,
            config.q,
            config.epsilon,
            n,
            &result,
        ));
    }
    Ok((construction, rejected, rows))
}

/// Runs every requested algorithm on the identical candidate set per seed.
/// `threads = 0` uses rayon's default pool size.
pub fn run_benchmark(config: &ScenarioConfig, threads: usize) -> Result<BenchReport, RunError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| RunError::Pool(e.to_string()))?;

    let per_seed: Vec<Result<_, RunError>> = pool.install(|| {
        config
            .seeds
            .par_iter()
            .map(|&seed| run_seed(config, seed))
            .collect()
    });

    let mut construction = Vec::new();
    let mut rejected = Vec::new();
    let mut rows = Vec::new();
    for item in per_seed {
        let (c, rej, r) = item?;
        construction.push(c);
        rejected.extend(rej);
        rows.extend(r);
    }

    Ok(BenchReport {
        digest: config.digest(),
        rng: RNG_NAME.to_string(),
        construction,
        rejected,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{Algorithm, Trajectory};

    fn config() -> ScenarioConfig {
        let mut c = crate::testgen::example_config();
        c.seeds = vec![1, 2, 3];
        c.algorithms = vec![
            Algorithm::Greedy,
            Algorithm::Stochastic,
            Algorithm::Surrogate,
        ];
        c.features.count = 20;
        c
    }

    #[test]
    fn one_row_per_algorithm_seed_pair() {
        let c = config();
        let report = run_benchmark(&c, 1).unwrap();
        assert_eq!(report.rows.len(), c.seeds.len() * c.algorithms.len());
        assert_eq!(report.construction.len(), c.seeds.len());
        for (i, &seed) in c.seeds.iter().enumerate() {
            for (j, algo) in c.algorithms.iter().enumerate() {
                let row = &report.rows[i * c.algorithms.len() + j];
                assert_eq!(row.seed, seed);
                assert_eq!(row.algorithm, algo.name());
            }
        }
    }

    #[test]
    fn surrogate_only_run_counts_score_reads() {
        let mut c = config();
        c.algorithms = vec![Algorithm::Surrogate];
        let report = run_benchmark(&c, 1).unwrap();
        for row in &report.rows {
            assert_eq!(row.eval_count, row.n as u64);
        }
    }

    #[test]
    fn guard_refuses_oversized_brute() {
        let mut c = config();
        c.algorithms = vec![Algorithm::Brute];
        c.features.count = 200;
        c.q = 30;
        // dense box in front of the camera so far more than 60 candidates
        // survive and C(n, 30) blows past the guard
        match run_benchmark(&c, 1) {
            Err(RunError::GuardRefused { combinations, .. }) => {
                assert!(combinations > BRUTE_FORCE_LIMIT);
            }
            other => panic!("expected guard refusal, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_scenario_propagates() {
        let mut c = config();
        c.trajectory = Trajectory::Line {
            start: [0.0, 0.0, 0.0],
            direction: [0.0, 0.0, -1.0],
            step: 0.5,
        };
        // features stay in +z, camera now faces -z
        assert!(matches!(
            run_benchmark(&c, 1),
            Err(RunError::Scenario(ScenarioError::Infeasible { .. }))
        ));
    }
}
