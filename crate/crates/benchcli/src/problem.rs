//! Randomized benchmark problems: pose pairs drawn inside the sampling
//! bounds, screened for feasibility, and priced by a long-budget
//! reference plan.
//!
//! A problem is only worth benchmarking if a valid plan exists and its
//! quality is known, so generation runs three gated stages:
//!
//! 1. rejection-sample start and goal until both are collision-free and
//!    far enough apart;
//! 2. a feasibility precheck — a plain goal-biased tree search that
//!    stops at the first connection, since only existence matters here;
//! 3. the ground-truth plan, a full optimizing run under a much larger
//!    budget, whose length becomes the 100-point of the normalized
//!    score. A pair whose ground truth comes back non-exact is thrown
//!    away and redrawn.

use std::time::Instant;

use sbo_core::collision::{is_motion_valid, is_state_valid};
use sbo_core::metrics::path_length;
use sbo_core::planners::{
    interpolate_path, plan_rrt_star, Budget, Path, PlannerParams, Problem, SolutionStatus,
};
use sbo_core::rng::{rng_from_seed, ChaCha8Rng};
use sbo_core::statespace::{State, StateSpace};
use sbo_core::worldmap::OccupancyOctree;
use rand::Rng;
use thiserror::Error;

use crate::config::BenchmarkConfig;

const MAX_POSE_DRAWS: usize = 10_000;
const MAX_FEASIBILITY_FAILURES: usize = 20;

/// One accepted benchmark problem. The ground-truth path always has
/// `Exact` status by construction.
#[derive(Clone, Debug)]
pub struct BenchProblem {
    pub id: u32,
    pub start: State,
    pub goal: State,
    pub ground_truth: Path,
    pub ground_truth_length: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum GenerateError {
    #[error(
        "pose rejection: no valid start/goal pair within {draws} draws \
         (map too crowded or min distance too large for the bounds)"
    )]
    PoseRejection { draws: usize },
    #[error("feasibility precheck: {failures} candidate pairs had no plan within the precheck budget")]
    PrecheckExhausted { failures: usize },
    #[error("ground truth: {failures} candidate pairs produced no exact reference plan")]
    GroundTruthExhausted { failures: usize },
    #[error("problem construction: {0}")]
    Construction(String),
}

/// Budgets for the two screening phases. Wall-clock budgets match the
/// configured timeouts; iteration budgets make generation replayable.
#[derive(Clone, Copy, Debug)]
pub struct ScreenBudgets {
    pub precheck: Budget,
    pub ground_truth: Budget,
}

/// Draws a feasible, priced benchmark problem.
///
/// `rng` drives the pose draws; each precheck and ground-truth attempt
/// runs on a child generator forked from it, so the stream consumed per
/// attempt is fixed regardless of how long the inner searches run.
pub fn generate_problem(
    config: &BenchmarkConfig,
    map: &OccupancyOctree,
    space: &StateSpace,
    budgets: ScreenBudgets,
    id: u32,
    rng: &mut ChaCha8Rng,
) -> Result<BenchProblem, GenerateError> {
    let mut draws = 0;
    let mut precheck_failures = 0;
    let mut ground_truth_failures = 0;

    loop {
        let (start, goal) = draw_pose_pair(config, map, space, &mut draws, rng)?;

        let mut problem = Problem::new(space.clone(), map.clone(), config.body.clone(), start, goal)
            .map_err(|e| GenerateError::Construction(e.to_string()))?;
        problem.goal_tolerance = config.goal_tolerance;

        let mut precheck_rng = rng_from_seed(rng.gen());
        if !feasibility_precheck(&problem, budgets.precheck, &mut precheck_rng) {
            precheck_failures += 1;
            if precheck_failures >= MAX_FEASIBILITY_FAILURES {
                return Err(GenerateError::PrecheckExhausted {
                    failures: precheck_failures,
                });
            }
            continue;
        }

        let mut gt_rng = rng_from_seed(rng.gen());
        let reference = plan_rrt_star(
            &problem,
            budgets.ground_truth,
            &PlannerParams::default(),
            &mut gt_rng,
        );
        match reference {
            Ok(result) if result.status == SolutionStatus::Exact => {
                let path = result.path.expect("exact results carry a path");
                // Price the reference through the same resampling the
                // benchmark rows go through, so a score of 100 means
                // "as good as the reference", not "as good as the
                // reference before resampling".
                let resampled = interpolate_path(&path, config.interpolation_parameter, space);
                let ground_truth_length = path_length(&resampled, space);
                return Ok(BenchProblem {
                    id,
                    start,
                    goal,
                    ground_truth: path,
                    ground_truth_length,
                });
            }
            _ => {
                ground_truth_failures += 1;
                if precheck_failures + ground_truth_failures >= MAX_FEASIBILITY_FAILURES {
                    return Err(GenerateError::GroundTruthExhausted {
                        failures: ground_truth_failures,
                    });
                }
            }
        }
    }
}

fn draw_pose_pair(
    config: &BenchmarkConfig,
    map: &OccupancyOctree,
    space: &StateSpace,
    draws: &mut usize,
    rng: &mut ChaCha8Rng,
) -> Result<(State, State), GenerateError> {
    let draw_valid = |draws: &mut usize, rng: &mut ChaCha8Rng| -> Result<State, GenerateError> {
        loop {
            if *draws >= MAX_POSE_DRAWS {
                return Err(GenerateError::PoseRejection { draws: *draws });
            }
            *draws += 1;
            let state = space.sample_uniform(rng);
            if is_state_valid(&state, &config.body, map, space) {
                return Ok(state);
            }
        }
    };
    loop {
        let start = draw_valid(draws, rng)?;
        let goal = draw_valid(draws, rng)?;
        let separation = (goal.position() - start.position()).norm();
        if separation >= config.min_start_goal_dist {
            return Ok((start, goal));
        }
        // Pair too close: both poses count as spent draws.
    }
}

/// Plain goal-biased tree search; succeeds at the first state placed
/// within the goal tolerance. Nearest lookup is a linear scan — the
/// tree stays small because the search stops as soon as a connection
/// exists.
fn feasibility_precheck(problem: &Problem, budget: Budget, rng: &mut ChaCha8Rng) -> bool {
    const GOAL_BIAS: f64 = 0.05;
    const MAX_EDGE: f64 = 2.5;

    let space = &problem.space;
    let started = Instant::now();
    let mut remaining_iterations = match budget {
        Budget::Iterations(n) => n,
        Budget::WallClock(_) => u64::MAX,
    };
    let deadline = match budget {
        Budget::WallClock(seconds) => Some(seconds),
        Budget::Iterations(_) => None,
    };

    let mut nodes = vec![problem.start];
    loop {
        if remaining_iterations == 0 {
            return false;
        }
        remaining_iterations -= 1;
        if let Some(seconds) = deadline {
            if started.elapsed().as_secs_f64() >= seconds {
                return false;
            }
        }

        let target = if rng.gen_bool(GOAL_BIAS) {
            problem.goal
        } else {
            space.sample_uniform(rng)
        };
        let Some(nearest) = nodes
            .iter()
            .map(|n| {
                space
                    .distance(n, &target)
                    .expect("tree states share the space kind")
            })
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(&b.1).expect("distances are never NaN"))
            .map(|(index, _)| index)
        else {
            return false;
        };
        let from = nodes[nearest];
        let gap = space
            .distance(&from, &target)
            .expect("tree states share the space kind");
        if gap < 1e-9 {
            continue;
        }
        let t = (MAX_EDGE / gap).min(1.0);
        let Ok(new) = space.interpolate(&from, &target, t) else {
            continue;
        };
        if !is_state_valid(&new, &problem.body, &problem.map, space)
            || !is_motion_valid(
                &from,
                &new,
                &problem.body,
                &problem.map,
                space,
                problem.validation_step,
            )
        {
            continue;
        }
        let goal_gap = space
            .distance(&new, &problem.goal)
            .expect("tree states share the space kind");
        if goal_gap <= problem.goal_tolerance {
            return true;
        }
        nodes.push(new);
    }
}
