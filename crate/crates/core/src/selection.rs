//! Normalized log-det objective and the selection algorithms: classic
//! greedy, stochastic greedy, trace-surrogate greedy and the exhaustive
//! oracle.
//!
//! All tie-breaking is "smallest feature id" so results are deterministic
//! and reproducible across runs and platforms. The stochastic variant
//! draws its per-round samples from a ChaCha8 stream seeded explicitly.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{self, NumericsError, SymmetricMatrix};
use crate::vision::FeatureInfo;

/// Subset enumeration guard for the exhaustive oracle.
pub const BRUTE_FORCE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Error)]
pub enum SelectionError {
    #[error("unknown feature id {0}")]
    UnknownFeature(u32),
    #[error("feature id {0} already selected")]
    AlreadySelected(u32),
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("budget must be at least 1 for stochastic sampling")]
    ZeroBudget,
    #[error("instance too large for exhaustive search: C({n}, {q}) = {combinations} > {limit}")]
    BruteForceTooLarge {
        n: usize,
        q: usize,
        combinations: u64,
        limit: u64,
    },
    #[error("candidate dimension {actual} does not match prior dimension {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("numerics failure: {0}")]
    Numerics(#[from] NumericsError),
}

/// The selection objective: prior information matrix plus additive
/// per-feature increments, scored by the normalized log-determinant
/// `rho(S) = logdet(Hbar + sum_{f in S} H^f) - logdet(Hbar)` so that
/// `rho(empty) = 0`.
#[derive(Debug)]
pub struct Objective {
    hbar: SymmetricMatrix,
    candidates: BTreeMap<u32, FeatureInfo>,
    sigma: f64,
    logdet_prior: f64,
    evals: AtomicU64,
}

impl Objective {
    pub fn new(
        hbar: SymmetricMatrix,
        candidates: BTreeMap<u32, FeatureInfo>,
        sigma: f64,
    ) -> Result<Self, SelectionError> {
        let dim = hbar.dim();
        for info in candidates.values() {
            if info.info.dim() != dim {
                return Err(SelectionError::DimensionMismatch {
                    expected: dim,
                    actual: info.info.dim(),
                });
            }
        }
        let logdet_prior = numerics::cholesky_logdet_with_jitter(&hbar)?;
        Ok(Self {
            hbar,
            candidates,
            sigma,
            logdet_prior,
            evals: AtomicU64::new(0),
        })
    }

    pub fn dim(&self) -> usize {
        self.hbar.dim()
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn prior(&self) -> &SymmetricMatrix {
        &self.hbar
    }

    pub fn candidates(&self) -> &BTreeMap<u32, FeatureInfo> {
        &self.candidates
    }

    pub fn candidate_ids(&self) -> Vec<u32> {
        self.candidates.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    /// Total marginal-gain evaluations recorded so far.
    pub fn eval_count(&self) -> u64 {
        self.evals.load(Ordering::SeqCst)
    }

    fn info(&self, id: u32) -> Result<&FeatureInfo, SelectionError> {
        self.candidates
            .get(&id)
            .ok_or(SelectionError::UnknownFeature(id))
    }

    /// Information matrix of the prior plus the increments of `ids`.
    pub fn information(&self, ids: &[u32]) -> Result<SymmetricMatrix, SelectionError> {
        let mut h = self.hbar.matrix().clone();
        for &id in ids {
            h += self.info(id)?.info.matrix();
        }
        Ok(SymmetricMatrix::new_unchecked(h))
    }

    /// Normalized log-det score of a subset; `rho(empty) = 0` exactly.
    pub fn rho(&self, ids: &[u32]) -> Result<f64, SelectionError> {
        if ids.is_empty() {
            // every id must still be known
            for &id in ids {
                self.info(id)?;
            }
            return Ok(0.0);
        }
        let h = self.information(ids)?;
        Ok(numerics::cholesky_logdet_with_jitter(&h)? - self.logdet_prior)
    }

    /// Marginal gain of adding `id` to `selected`; counts one evaluation.
    pub fn marginal_gain(&self, selected: &[u32], id: u32) -> Result<f64, SelectionError> {
        if selected.contains(&id) {
            return Err(SelectionError::AlreadySelected(id));
        }
        self.info(id)?;
        let base = self.rho(selected)?;
        let mut with = selected.to_vec();
        with.push(id);
        let after = self.rho(&with)?;
        self.evals.fetch_add(1, Ordering::SeqCst);
        Ok(after - base)
    }

    /// One counted gain evaluation against a running matrix whose logdet is
    /// already known. Returns the gain and the updated logdet.
    fn gain_against(
        &self,
        running: &DMatrix<f64>,
        running_logdet: f64,
        id: u32,
    ) -> Result<(f64, f64), SelectionError> {
        let info = self.info(id)?;
        let candidate = SymmetricMatrix::new_unchecked(running + info.info.matrix());
        let logdet = numerics::cholesky_logdet_with_jitter(&candidate)?;
        self.evals.fetch_add(1, Ordering::SeqCst);
        Ok((logdet - running_logdet, logdet))
    }
}

/// Table of scalar performance measures of an information matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measures {
    /// Trace of the covariance `H^-1`.
    pub variance: f64,
    /// Differential entropy direction: `-logdet H`.
    pub entropy: f64,
    /// Smallest eigenvalue of the covariance, i.e. `1 / lambda_max(H)`.
    pub spectral: f64,
}

/// Outcome of one selection run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelectionResult {
    /// Feature ids in selection order.
    pub selected: Vec<u32>,
    /// Normalized log-det score of the selected set.
    pub objective_value: f64,
    pub measures: Measures,
    /// Exact number of marginal-gain evaluations (score reads for the
    /// surrogate, subset scores for the oracle).
    pub eval_count: u64,
    /// Selection phase only; excludes measure computation.
    pub wall_time: f64,
    pub seed: Option<u64>,
    /// Set when the requested budget exceeded the candidate pool.
    pub clamped: bool,
}

/// Variance / entropy / spectral measures of a PD information matrix,
/// per the standard optimal-design criteria.
pub fn evaluate_measures(h: &SymmetricMatrix) -> Result<Measures, SelectionError> {
    let inv = h.try_inverse()?;
    let entropy = -numerics::cholesky_logdet(h)?;
    let (_, hi) = numerics::eig_extremes(h);
    Ok(Measures {
        variance: inv.trace(),
        entropy,
        spectral: 1.0 / hi,
    })
}

fn finish(
    obj: &Objective,
    selected: Vec<u32>,
    eval_count: u64,
    wall_time: f64,
    seed: Option<u64>,
    clamped: bool,
) -> Result<SelectionResult, SelectionError> {
    let h = obj.information(&selected)?;
    let objective_value = numerics::cholesky_logdet_with_jitter(&h)? - obj.logdet_prior;
    let measures = evaluate_measures(&h)?;
    Ok(SelectionResult {
        selected,
        objective_value,
        measures,
        eval_count,
        wall_time,
        seed,
        clamped,
    })
}

/// Classic greedy: each round takes the candidate with the largest
/// marginal gain over the whole remaining pool. Evaluation count is
/// exactly `sum_{k=0}^{q-1} (n - k)`.
pub fn greedy(obj: &Objective, q: usize) -> Result<SelectionResult, SelectionError> {
    let clamped = q > obj.len();
    let q = q.min(obj.len());
    let evals_before = obj.eval_count();
    let start = Instant::now();

    let mut remaining = obj.candidate_ids();
    let mut selected = Vec::with_capacity(q);
    let mut running = obj.hbar.matrix().clone();
    let mut running_logdet = obj.logdet_prior;
    for _ in 0..q {
        let mut best: Option<(f64, f64, usize)> = None;
        for (pos, &id) in remaining.iter().enumerate() {
            let (gain, logdet) = obj.gain_against(&running, running_logdet, id)?;
            // strict > keeps the smallest id on ties (ascending order)
            if best.is_none_or(|(g, _, _)| gain > g) {
                best = Some((gain, logdet, pos));
            }
        }
        let (_, logdet, pos) = best.expect("non-empty pool");
        let id = remaining.remove(pos);
        running += obj.candidates[&id].info.matrix();
        running_logdet = logdet;
        selected.push(id);
    }

    let wall_time = start.elapsed().as_secs_f64();
    let eval_count = obj.eval_count() - evals_before;
    finish(obj, selected, eval_count, wall_time, None, clamped)
}

/// Per-round sample size `ceil((n / q) * ln(1 / epsilon))`.
pub fn stochastic_sample_size(n: usize, q: usize, epsilon: f64) -> usize {
    (((n as f64) / (q as f64)) * (1.0 / epsilon).ln()).ceil() as usize
}

/// Stochastic greedy: each round scores a uniform without-replacement
/// sample of the remaining pool (clamped to its size) and keeps the best.
/// Deterministic given the seed, for any thread count.
pub fn stochastic_greedy(
    obj: &Objective,
    q: usize,
    epsilon: f64,
    seed: u64,
) -> Result<SelectionResult, SelectionError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(SelectionError::InvalidEpsilon(epsilon));
    }
    if q == 0 {
        return Err(SelectionError::ZeroBudget);
    }
    let clamped = q > obj.len();
    let q = q.min(obj.len());
    if q == 0 {
        return finish(obj, Vec::new(), 0, 0.0, Some(seed), clamped);
    }
    let n_total = obj.len();
    let s = stochastic_sample_size(n_total, q, epsilon).max(1);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let evals_before = obj.eval_count();
    let start = Instant::now();

    let mut remaining = obj.candidate_ids();
    let mut selected = Vec::with_capacity(q);
    let mut running = obj.hbar.matrix().clone();
    let mut running_logdet = obj.logdet_prior;
    for _ in 0..q {
        let k = s.min(remaining.len());
        // partial Fisher-Yates over the remaining pool
        for i in 0..k {
            let j = rng.gen_range(i..remaining.len());
            remaining.swap(i, j);
        }
        let mut sample: Vec<u32> = remaining[..k].to_vec();
        sample.sort_unstable();
        let mut best: Option<(f64, f64, u32)> = None;
        for &id in &sample {
            let (gain, logdet) = obj.gain_against(&running, running_logdet, id)?;
            if best.is_none_or(|(g, _, _)| gain > g) {
                best = Some((gain, logdet, id));
            }
        }
        let (_, logdet, id) = best.expect("non-empty sample");
        remaining.retain(|&x| x != id);
        remaining.sort_unstable();
        running += obj.candidates[&id].info.matrix();
        running_logdet = logdet;
        selected.push(id);
    }

    let wall_time = start.elapsed().as_secs_f64();
    let eval_count = obj.eval_count() - evals_before;
    finish(obj, selected, eval_count, wall_time, Some(seed), clamped)
}

/// Trace-surrogate greedy: score every candidate by its frame count,
/// sort descending (ties to the smallest id) and take the top `q`. No
/// information matrix is formed or log-det evaluated during selection;
/// the evaluation count is the `n` score reads.
pub fn surrogate_greedy(obj: &Objective, q: usize) -> Result<SelectionResult, SelectionError> {
    let clamped = q > obj.len();
    let q = q.min(obj.len());
    let start = Instant::now();

    let mut scores: Vec<(usize, u32)> = obj
        .candidates
        .iter()
        .map(|(&id, info)| (info.n_frames, id))
        .collect();
    let eval_count = scores.len() as u64;
    scores.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let selected: Vec<u32> = scores.into_iter().take(q).map(|(_, id)| id).collect();

    let wall_time = start.elapsed().as_secs_f64();
    finish(obj, selected, eval_count, wall_time, None, clamped)
}

fn binomial(n: usize, q: usize) -> u64 {
    let q = q.min(n - q.min(n));
    let mut acc: u128 = 1;
    for i in 0..q {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Number of subsets the exhaustive oracle would enumerate.
pub fn brute_force_combinations(n: usize, q: usize) -> u64 {
    binomial(n, q.min(n))
}

/// Exhaustive oracle: enumerates every subset of size `q` and returns the
/// maximizer of `rho`, preferring the lexicographically smallest id set on
/// ties. Refuses instances with more than [`BRUTE_FORCE_LIMIT`] subsets.
pub fn brute_force(obj: &Objective, q: usize) -> Result<SelectionResult, SelectionError> {
    use itertools::Itertools;

    let clamped = q > obj.len();
    let q = q.min(obj.len());
    let combinations = brute_force_combinations(obj.len(), q);
    if combinations > BRUTE_FORCE_LIMIT {
        return Err(SelectionError::BruteForceTooLarge {
            n: obj.len(),
            q,
            combinations,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let start = Instant::now();
    let ids = obj.candidate_ids();
    let mut best: Option<(f64, Vec<u32>)> = None;
    let mut evaluated = 0u64;
    for subset in ids.into_iter().combinations(q) {
        let value = obj.rho(&subset)?;
        evaluated += 1;
        // lexicographic enumeration order: strict > keeps the smallest set
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, subset));
        }
    }
    let selected = best.map(|(_, s)| s).unwrap_or_default();
    let wall_time = start.elapsed().as_secs_f64();
    finish(obj, selected, evaluated, wall_time, None, clamped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testgen;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn synthetic_objective(rng: &mut ChaCha8Rng, dim: usize, n: usize) -> Objective {
        testgen::random_instance(rng, dim, n)
    }

    #[test]
    fn rho_empty_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let obj = synthetic_objective(&mut rng, 6, 5);
        assert_eq!(obj.rho(&[]).unwrap(), 0.0);
    }

    #[test]
    fn rho_identity_plus_identity() {
        let dim = 4;
        let hbar = SymmetricMatrix::identity(dim);
        let info = FeatureInfo::new(0, SymmetricMatrix::identity(dim), 2);
        let obj = Objective::new(hbar, [(0u32, info)].into(), 1.0).unwrap();
        assert_relative_eq!(
            obj.rho(&[0]).unwrap(),
            dim as f64 * 2.0_f64.ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn rho_matches_determinant_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let obj = synthetic_objective(&mut rng, 5, 4);
            let ids = obj.candidate_ids();
            let s = &ids[..2];
            let h = obj.information(s).unwrap();
            let oracle = h.matrix().clone().lu().determinant().ln()
                - obj.prior().matrix().clone().lu().determinant().ln();
            assert_relative_eq!(obj.rho(s).unwrap(), oracle, max_relative = 1e-9);
        }
    }

    #[test]
    fn rho_rejects_unknown_id() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let obj = synthetic_objective(&mut rng, 4, 3);
        assert!(matches!(
            obj.rho(&[999]),
            Err(SelectionError::UnknownFeature(999))
        ));
    }

    #[test]
    fn marginal_gain_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let obj = synthetic_objective(&mut rng, 5, 6);
        let ids = obj.candidate_ids();
        let f = ids[0];
        let gain = obj.marginal_gain(&[], f).unwrap();
        assert_relative_eq!(gain, obj.rho(&[f]).unwrap(), epsilon = 1e-12);
        assert!(gain >= 0.0);
        assert_eq!(obj.eval_count(), 1);
        assert!(matches!(
            obj.marginal_gain(&[f], f),
            Err(SelectionError::AlreadySelected(_))
        ));
    }

    #[test]
    fn marginal_gain_diminishes_on_nested_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let obj = synthetic_objective(&mut rng, 5, 6);
            let ids = obj.candidate_ids();
            let a = &ids[..1];
            let b = &ids[..3];
            let e = ids[5];
            let ga = obj.marginal_gain(a, e).unwrap();
            let gb = obj.marginal_gain(b, e).unwrap();
            assert!(ga >= gb - 1e-10, "submodularity violated: {ga} < {gb}");
        }
    }

    #[test]
    fn greedy_empty_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let obj = synthetic_objective(&mut rng, 5, 4);
        let res = greedy(&obj, 0).unwrap();
        assert!(res.selected.is_empty());
        assert_eq!(res.objective_value, 0.0);
        assert_eq!(res.eval_count, 0);
    }

    #[test]
    fn greedy_picks_dominant_candidate_first() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let dim = 5;
        let hbar = SymmetricMatrix::identity(dim);
        let mut candidates = std::collections::BTreeMap::new();
        for id in 0..4u32 {
            let base = testgen::random_psd(&mut rng, dim, 3);
            let scaled = if id == 2 { base.scaled(100.0) } else { base };
            candidates.insert(id, FeatureInfo::new(id, scaled, 3));
        }
        let obj = Objective::new(hbar, candidates, 1.0).unwrap();
        let res = greedy(&obj, 2).unwrap();
        assert_eq!(res.selected[0], 2);
    }

    #[test]
    fn greedy_eval_count_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let obj = synthetic_objective(&mut rng, 5, 8);
        let res = greedy(&obj, 3).unwrap();
        assert_eq!(res.eval_count, 8 + 7 + 6);
        assert_eq!(res.selected.len(), 3);
        assert!(!res.clamped);
    }

    #[test]
    fn greedy_clamps_oversized_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let obj = synthetic_objective(&mut rng, 4, 3);
        let res = greedy(&obj, 10).unwrap();
        assert_eq!(res.selected.len(), 3);
        assert!(res.clamped);
    }

    #[test]
    fn greedy_meets_nemhauser_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..10 {
            let obj = synthetic_objective(&mut rng, 5, 8);
            let g = greedy(&obj, 3).unwrap();
            let opt = brute_force(&obj, 3).unwrap();
            let bound = (1.0 - (-1.0f64).exp()) * opt.objective_value;
            assert!(g.objective_value >= bound - 1e-9);
        }
    }

    #[test]
    fn stochastic_sample_size_forced_arithmetic() {
        // s = ceil((100 / 10) * ln 20) = 30
        assert_eq!(stochastic_sample_size(100, 10, 0.05), 30);
    }

    #[test]
    fn stochastic_rejects_bad_epsilon() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let obj = synthetic_objective(&mut rng, 4, 4);
        assert!(matches!(
            stochastic_greedy(&obj, 2, 0.0, 1),
            Err(SelectionError::InvalidEpsilon(_))
        ));
        assert!(matches!(
            stochastic_greedy(&obj, 2, 1.0, 1),
            Err(SelectionError::InvalidEpsilon(_))
        ));
    }

    #[test]
    fn stochastic_full_sample_equals_greedy() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for seed in 0..5u64 {
            let obj = synthetic_objective(&mut rng, 5, 6);
            // epsilon tiny: sample size covers the whole pool every round
            let sg = stochastic_greedy(&obj, 3, 1e-6, seed).unwrap();
            let g = greedy(&obj, 3).unwrap();
            assert_eq!(sg.selected, g.selected);
            assert_eq!(sg.eval_count, g.eval_count);
            assert_eq!(sg.objective_value, g.objective_value);
        }
    }

    #[test]
    fn stochastic_deterministic_per_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let obj = synthetic_objective(&mut rng, 6, 12);
        let a = stochastic_greedy(&obj, 4, 0.3, 77).unwrap();
        let b = stochastic_greedy(&obj, 4, 0.3, 77).unwrap();
        assert_eq!(a.selected, b.selected);
        assert_eq!(a.objective_value, b.objective_value);
        assert_eq!(a.eval_count, b.eval_count);
    }

    #[test]
    fn stochastic_eval_counter_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let n = 12;
        let q = 4;
        let eps = 0.2;
        let obj = synthetic_objective(&mut rng, 5, n);
        let res = stochastic_greedy(&obj, q, eps, 5).unwrap();
        let s = stochastic_sample_size(n, q, eps);
        let expected: u64 = (0..q).map(|k| s.min(n - k) as u64).sum();
        assert_eq!(res.eval_count, expected);
    }

    #[test]
    fn surrogate_top_k_by_frames() {
        let dim = 5;
        let hbar = SymmetricMatrix::identity(dim);
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let frames = [7usize, 2, 9, 5];
        let mut candidates = std::collections::BTreeMap::new();
        for (id, &n_f) in frames.iter().enumerate() {
            candidates.insert(
                id as u32,
                FeatureInfo::new(id as u32, testgen::random_psd(&mut rng, dim, 3), n_f),
            );
        }
        let obj = Objective::new(hbar, candidates, 1.0).unwrap();
        let res = surrogate_greedy(&obj, 2).unwrap();
        assert_eq!(res.selected, vec![2, 0]);
        assert_eq!(res.eval_count, 4);
    }

    #[test]
    fn surrogate_tie_break_smallest_ids() {
        let dim = 4;
        let hbar = SymmetricMatrix::identity(dim);
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let mut candidates = std::collections::BTreeMap::new();
        for id in [5u32, 1, 9, 3] {
            candidates.insert(
                id,
                FeatureInfo::new(id, testgen::random_psd(&mut rng, dim, 2), 4),
            );
        }
        let obj = Objective::new(hbar, candidates, 1.0).unwrap();
        let res = surrogate_greedy(&obj, 2).unwrap();
        assert_eq!(res.selected, vec![1, 3]);
    }

    #[test]
    fn surrogate_performs_no_logdet_evaluations() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let obj = synthetic_objective(&mut rng, 5, 6);
        let before = obj.eval_count();
        let _ = surrogate_greedy(&obj, 3).unwrap();
        assert_eq!(obj.eval_count(), before);
    }

    #[test]
    fn brute_force_full_and_singleton() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let obj = synthetic_objective(&mut rng, 4, 5);
        let full = brute_force(&obj, 5).unwrap();
        assert_eq!(full.selected, obj.candidate_ids());
        let single = brute_force(&obj, 1).unwrap();
        let best_by_scan = obj
            .candidate_ids()
            .into_iter()
            .max_by(|&a, &b| {
                obj.rho(&[a])
                    .unwrap()
                    .partial_cmp(&obj.rho(&[b]).unwrap())
                    .unwrap()
            })
            .unwrap();
        assert_eq!(single.selected, vec![best_by_scan]);
    }

    #[test]
    fn brute_force_matches_nested_loop_enumerator() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let obj = synthetic_objective(&mut rng, 4, 6);
        let res = brute_force(&obj, 2).unwrap();
        // second, independently coded enumerator
        let ids = obj.candidate_ids();
        let mut best_val = f64::NEG_INFINITY;
        let mut best_set = Vec::new();
        for i in 0..ids.len() {
            for j in (i + 1)..ids.len() {
                let v = obj.rho(&[ids[i], ids[j]]).unwrap();
                if v > best_val {
                    best_val = v;
                    best_set = vec![ids[i], ids[j]];
                }
            }
        }
        assert_eq!(res.selected, best_set);
        assert_relative_eq!(res.objective_value, best_val, epsilon = 1e-12);
    }

    #[test]
    fn brute_force_guard_refuses_oversized() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let obj = synthetic_objective(&mut rng, 3, 50);
        assert!(matches!(
            brute_force(&obj, 25),
            Err(SelectionError::BruteForceTooLarge { .. })
        ));
    }

    #[test]
    fn measures_identity() {
        let m = evaluate_measures(&SymmetricMatrix::identity(4)).unwrap();
        assert_relative_eq!(m.variance, 4.0, epsilon = 1e-12);
        assert_relative_eq!(m.entropy, 0.0, epsilon = 1e-12);
        assert_relative_eq!(m.spectral, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn measures_diagonal() {
        let m = evaluate_measures(&SymmetricMatrix::from_diagonal(&[2.0, 4.0])).unwrap();
        assert_relative_eq!(m.variance, 0.75, epsilon = 1e-12);
        assert_relative_eq!(m.entropy, -(8.0f64).ln(), epsilon = 1e-12);
        assert_relative_eq!(m.spectral, 0.25, epsilon = 1e-9);
    }

    #[test]
    fn measures_match_inversion_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let h = testgen::random_pd(&mut rng, 6);
            let m = evaluate_measures(&h).unwrap();
            let inv = h.matrix().clone().try_inverse().unwrap();
            assert_relative_eq!(m.variance, inv.trace(), max_relative = 1e-9);
            assert_relative_eq!(
                m.entropy,
                -h.matrix().clone().lu().determinant().ln(),
                max_relative = 1e-9
            );
            let inv_sym = SymmetricMatrix::new_unchecked(inv);
            let (lo, _) = numerics::eig_extremes(&inv_sym);
            assert_relative_eq!(m.spectral, lo, max_relative = 1e-9);
        }
    }
}
