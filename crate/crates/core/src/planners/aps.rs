//! APS (anytime path shortening): independent plain RRT* workers whose
//! every new solution is shortcut-simplified and re-interpolated; the
//! best post-processed path is retained. Worker paths are never
//! hybridized with one another.

use super::rrt_star::{RrtEngine, RrtOptions};
use super::shared::SharedBest;
use super::simplify::{interpolate_path, shortcut_simplify_counted};
use super::{
    Budget, PlanError, PlannerParams, PlannerResult, Problem, SolutionStatus,
};
use crate::rng::{rng_from_seed, worker_seed, ChaCha8Rng};
use rand::Rng;
use std::time::{Duration, Instant};

const OPTS: RrtOptions = RrtOptions {
    informed: false,
    lb_prune: false,
};

/// Splits the simplification rng away from the worker's search rng so
/// shortcutting does not perturb tree growth.
const SIMPLIFY_SEED_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

struct ApsWorker<'a> {
    engine: RrtEngine<'a>,
    simplify_rng: ChaCha8Rng,
    /// Engine cost of the last solution this worker post-processed.
    last_polished: f64,
    simplify_checks: u64,
}

impl<'a> ApsWorker<'a> {
    fn new(
        problem: &'a Problem,
        params: &'a PlannerParams,
        master: u64,
        worker: usize,
    ) -> Result<Self, PlanError> {
        let seed = worker_seed(master, worker);
        Ok(ApsWorker {
            engine: RrtEngine::new(problem, params, OPTS, rng_from_seed(seed))?,
            simplify_rng: rng_from_seed(seed ^ SIMPLIFY_SEED_SALT),
            last_polished: f64::INFINITY,
            simplify_checks: 0,
        })
    }

    /// One plain RRT* step; when it improved this worker's own best
    /// solution, post-process that solution and offer it to the cell.
    fn step(
        &mut self,
        at: f64,
        problem: &Problem,
        params: &PlannerParams,
        shared: &SharedBest,
    ) {
        self.engine.step(at, None);
        let cost = self.engine.best_cost();
        if cost + 1e-12 >= self.last_polished {
            return;
        }
        self.last_polished = cost;
        let raw = self
            .engine
            .best_path()
            .expect("an improved cost implies a solution path");
        let short = shortcut_simplify_counted(
            &raw,
            problem,
            params.simplify_attempts,
            &mut self.simplify_rng,
            &mut self.simplify_checks,
        );
        let polished = interpolate_path(&short, params.interpolate_states, &problem.space);
        let length = polished.cost(&problem.space);
        shared.offer(length, at, || polished.clone());
    }

    fn totals(&self) -> (u64, u64, u64) {
        (
            self.engine.iterations(),
            self.engine.samples(),
            self.engine.motion_checks() + self.simplify_checks,
        )
    }
}

/// Runs `params.workers` independent RRT* searches, shortcut-simplifying
/// and re-interpolating each solution as it appears. Returns the best
/// post-processed path, or `Failure` if the budget ends before any
/// worker solves.
pub fn plan_aps(
    problem: &Problem,
    budget: Budget,
    params: &PlannerParams,
    rng: &mut ChaCha8Rng,
) -> Result<PlannerResult, PlanError> {
    if params.workers < 1 {
        return Err(PlanError::InvalidParams("workers must be at least 1"));
    }
    if params.interpolate_states < 2 {
        return Err(PlanError::InvalidParams(
            "interpolate_states must be at least 2",
        ));
    }
    budget.validate()?;
    problem.validate()?;
    let master = rng.gen::<u64>();
    let shared = SharedBest::new();

    let totals: Vec<(u64, u64, u64)> = match budget {
        Budget::Iterations(rounds) => {
            let mut workers = Vec::with_capacity(params.workers);
            for w in 0..params.workers {
                workers.push(ApsWorker::new(problem, params, master, w)?);
            }
            let mut at = 0u64;
            for _ in 0..rounds {
                for worker in workers.iter_mut() {
                    at += 1;
                    worker.step(at as f64, problem, params, &shared);
                }
            }
            workers.iter().map(ApsWorker::totals).collect()
        }
        Budget::WallClock(secs) => {
            let t0 = Instant::now();
            let deadline = t0 + Duration::from_secs_f64(secs);
            let shared = &shared;
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..params.workers)
                    .map(|w| {
                        scope.spawn(move || {
                            let mut worker = ApsWorker::new(problem, params, master, w)
                                .expect("problem validated before spawning workers");
                            while Instant::now() < deadline {
                                worker.step(
                                    t0.elapsed().as_secs_f64(),
                                    problem,
                                    params,
                                    shared,
                                );
                            }
                            worker.totals()
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

    let iterations = totals.iter().map(|t| t.0).sum();
    let samples_generated = totals.iter().map(|t| t.1).sum();
    let motion_checks = totals.iter().map(|t| t.2).sum();
    let (_, best_path, cost_trace) = shared.into_parts();
    let (status, path) = match best_path {
        Some(p) => (SolutionStatus::Exact, Some(p)),
        None => (SolutionStatus::Failure, None),
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
