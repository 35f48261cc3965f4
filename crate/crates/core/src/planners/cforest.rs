//! CForest: a forest of informed, pruning RRT* workers coupled through
//! one shared best-solution cell. Workers never block on each other
//! except at that cell.

use super::rrt_star::{RrtEngine, RrtOptions};
use super::shared::SharedBest;
use super::{
    Budget, Path, PlanError, PlannerParams, PlannerResult, Problem, SolutionStatus,
};
use crate::rng::{rng_from_seed, worker_seed, ChaCha8Rng};
use rand::Rng;
use std::time::{Duration, Instant};

const OPTS: RrtOptions = RrtOptions {
    informed: true,
    lb_prune: true,
};

struct WorkerOut {
    gap: f64,
    approx: Option<Path>,
    iterations: u64,
    samples: u64,
    motion_checks: u64,
}

fn drain(engine: RrtEngine<'_>) -> WorkerOut {
    WorkerOut {
        gap: engine.nearest_gap(),
        approx: engine.approximate_path(),
        iterations: engine.iterations(),
        samples: engine.samples(),
        motion_checks: engine.motion_checks(),
    }
}

/// Runs `params.workers` coupled RRT* searches. Every worker prunes
/// against — and restricts its sampling to — the cost of the shared
/// best solution, which is replaced only by strict improvements, so the
/// merged cost trace is non-increasing.
///
/// Under an [`Budget::Iterations`] budget the workers are stepped
/// round-robin on one thread, each for the full budget, making the
/// result reproducible; a wall-clock budget runs them on real threads.
pub fn plan_cforest(
    problem: &Problem,
    budget: Budget,
    params: &PlannerParams,
    rng: &mut ChaCha8Rng,
) -> Result<PlannerResult, PlanError> {
    if params.workers < 1 {
        return Err(PlanError::InvalidParams("workers must be at least 1"));
    }
    budget.validate()?;
    problem.validate()?;
    let master = rng.gen::<u64>();
    let shared = SharedBest::new();

    let outs: Vec<WorkerOut> = match budget {
        Budget::Iterations(rounds) => {
            let mut engines = Vec::with_capacity(params.workers);
            for w in 0..params.workers {
                engines.push(RrtEngine::new(
                    problem,
                    params,
                    OPTS,
                    rng_from_seed(worker_seed(master, w)),
                )?);
            }
            let mut at = 0u64;
            for _ in 0..rounds {
                for engine in engines.iter_mut() {
                    at += 1;
                    engine.step(at as f64, Some(&shared));
                }
            }
            engines.into_iter().map(drain).collect()
        }
        Budget::WallClock(secs) => {
            let t0 = Instant::now();
            let deadline = t0 + Duration::from_secs_f64(secs);
            let shared = &shared;
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..params.workers)
                    .map(|w| {
                        scope.spawn(move || {
                            let mut engine = RrtEngine::new(
                                problem,
                                params,
                                OPTS,
                                rng_from_seed(worker_seed(master, w)),
                            )
                            .expect("problem validated before spawning workers");
                            while Instant::now() < deadline {
                                engine.step(t0.elapsed().as_secs_f64(), Some(shared));
                            }
                            drain(engine)
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("planner workers do not panic"))
                    .collect()
            })
        }
    };

    let iterations = outs.iter().map(|o| o.iterations).sum();
    let samples_generated = outs.iter().map(|o| o.samples).sum();
    let motion_checks = outs.iter().map(|o| o.motion_checks).sum();
    let (_, best_path, cost_trace) = shared.into_parts();

    let (status, path) = if best_path.is_some() {
        (SolutionStatus::Exact, best_path)
    } else {
        // No worker solved: fall back to the tree that got nearest.
        let mut outs = outs;
        let pick = outs
            .iter()
            .enumerate()
            .filter(|(_, o)| o.approx.is_some())
            .min_by(|a, b| a.1.gap.total_cmp(&b.1.gap).then(a.0.cmp(&b.0)))
            .map(|(i, _)| i);
        match pick {
            Some(i) => (SolutionStatus::Approximate, outs.swap_remove(i).approx),
            None => (SolutionStatus::Failure, None),
        }
    };
    Ok(PlannerResult {
        status,
        path,
        cost_trace,
        iterations,
        samples_generated,
        motion_checks,
    })
}
