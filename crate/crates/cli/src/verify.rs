//! Built-in property suites for the `verify` subcommand. Each suite
//! prints one PASS/FAIL line; any failure exits nonzero.

use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use featsel_core::scenario::{self, ScenarioConfig};
use featsel_core::selection::{self, Objective};
use featsel_core::testgen;
use featsel_core::vision;

struct Suite {
    failures: u32,
}

impl Suite {
    fn report(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            println!("PASS {name}");
        } else {
            println!("FAIL {name}: {detail}");
            self.failures += 1;
        }
    }
}

fn trace_identity(suite: &mut Suite, obj: &Objective, sigma: f64, rng: &mut ChaCha8Rng) {
    let mut worst: f64 = 0.0;
    for info in obj.candidates().values() {
        let expected = vision::feature_trace_shortcut(info.n_frames, sigma).unwrap();
        worst = worst.max((info.trace - expected).abs() / expected);
    }
    // plus synthetic random tracks away from the scenario geometry
    for _ in 0..50 {
        let horizon = rng.gen_range(3..=12);
        let n_frames = rng.gen_range(2..=horizon + 1);
        let track = testgen::random_track(rng, horizon, n_frames);
        let info = vision::feature_information(0, &track.f_mat, &track.e_mat, 1.0).unwrap();
        let expected = (2 * n_frames - 3) as f64;
        worst = worst.max((info.trace - expected).abs() / expected);
    }
    suite.report(
        "trace-identity (tr H = sigma^-2 (2 n_f - 3))",
        worst <= 1e-8,
        format!("worst relative error {worst:.3e}"),
    );
}

fn monotonicity(suite: &mut Suite, obj: &Objective, rng: &mut ChaCha8Rng) {
    let ids = obj.candidate_ids();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let mut pool = ids.clone();
        for i in 0..pool.len() {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        let b_len = rng.gen_range(1..=pool.len().min(6));
        let a_len = rng.gen_range(0..b_len);
        let mut b: Vec<u32> = pool[..b_len].to_vec();
        b.sort_unstable();
        let mut a: Vec<u32> = pool[..a_len].to_vec();
        a.sort_unstable();
        let rho_a = obj.rho(&a).unwrap();
        let rho_b = obj.rho(&b).unwrap();
        worst = worst.max(rho_a - rho_b);
    }
    suite.report(
        "monotonicity (rho(A) <= rho(B) for A subset B)",
        worst <= 1e-10,
        format!("worst violation {worst:.3e}"),
    );
}

fn submodularity(suite: &mut Suite, obj: &Objective, rng: &mut ChaCha8Rng) {
    let ids = obj.candidate_ids();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let mut pool = ids.clone();
        for i in 0..pool.len() {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        if pool.len() < 3 {
            break;
        }
        let b_len = rng.gen_range(2..=pool.len().min(6) - 1);
        let a_len = rng.gen_range(1..b_len);
        let e = pool[pool.len() - 1];
        let b: Vec<u32> = pool[..b_len].to_vec();
        let a: Vec<u32> = pool[..a_len].to_vec();
        let gain_a = obj.rho(&[a.clone(), vec![e]].concat()).unwrap() - obj.rho(&a).unwrap();
        let gain_b = obj.rho(&[b.clone(), vec![e]].concat()).unwrap() - obj.rho(&b).unwrap();
        worst = worst.max(gain_b - gain_a);
    }
    suite.report(
        "submodularity (diminishing marginal gains)",
        worst <= 1e-10,
        format!("worst violation {worst:.3e}"),
    );
}

fn greedy_ratio(suite: &mut Suite, obj: &Objective, q: usize) {
    let n = obj.len().min(10);
    let subset: Vec<u32> = obj.candidate_ids().into_iter().take(n).collect();
    let small = Objective::new(
        obj.prior().clone(),
        subset
            .iter()
            .map(|id| (*id, obj.candidates()[id].clone()))
            .collect(),
        obj.sigma(),
    )
    .unwrap();
    let q = q.min(3).min(n);
    let greedy = selection::greedy(&small, q).unwrap();
    let opt = selection::brute_force(&small, q).unwrap();
    let bound = (1.0 - (-1.0f64).exp()) * opt.objective_value - 1e-9;
    suite.report(
        "greedy-vs-oracle ((1 - 1/e) ratio)",
        greedy.objective_value >= bound,
        format!("greedy {:.6} < bound {:.6}", greedy.objective_value, bound),
    );
}

pub fn run(config: &ScenarioConfig, seed: u64) -> ExitCode {
    let scenario = match scenario::generate_scenario(config, seed) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                scenario::ScenarioError::Infeasible { .. } => 3,
                _ => 2,
            });
        }
    };
    let objective = match scenario.objective() {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xFEA7);
    let mut suite = Suite { failures: 0 };
    trace_identity(&mut suite, &objective, config.sigma, &mut rng);
    monotonicity(&mut suite, &objective, &mut rng);
    submodularity(&mut suite, &objective, &mut rng);
    greedy_ratio(&mut suite, &objective, config.q);
    if suite.failures == 0 {
        println!("all property suites passed");
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
