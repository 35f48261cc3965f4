//! Properties every planner must uphold regardless of scene or budget:
//! monotone cost traces, collision-free output, honest status reporting,
//! and bit-for-bit replay under iteration budgets.

mod common;

use common::*;
use sbo_core::collision::is_motion_valid;
use sbo_core::metrics::classify_status;
use sbo_core::planners::{
    plan_aps, plan_cforest, plan_fmt_star, plan_informed_rrt_star, plan_lazy_prm_star,
    plan_prm_star, plan_rrt_star, Budget, PlannerParams, PlannerResult, Problem,
    SolutionStatus,
};
use sbo_core::rng::rng_from_seed;
use std::time::Instant;

fn roster() -> Vec<(&'static str, PlanFn, Budget)> {
    vec![
        ("rrt-star", plan_rrt_star as PlanFn, Budget::Iterations(4000)),
        (
            "informed-rrt-star",
            plan_informed_rrt_star,
            Budget::Iterations(4000),
        ),
        ("prm-star", plan_prm_star, Budget::Iterations(2500)),
        ("lazy-prm-star", plan_lazy_prm_star, Budget::Iterations(2500)),
        ("fmt-star", plan_fmt_star, Budget::Iterations(1_000_000)),
        ("cforest", plan_cforest, Budget::Iterations(8000)),
        ("aps", plan_aps, Budget::Iterations(8000)),
    ]
}

fn ensemble_params() -> PlannerParams {
    PlannerParams {
        workers: 2,
        ..PlannerParams::default()
    }
}

/// The checks every result must pass, whatever its status.
fn check_result(name: &str, problem: &Problem, result: &PlannerResult) {
    for pair in result.cost_trace.windows(2) {
        assert!(
            pair[1].cost <= pair[0].cost + 1e-12,
            "{name}: cost trace rose from {} to {}",
            pair[0].cost,
            pair[1].cost
        );
    }
    let status = classify_status(result, problem)
        .unwrap_or_else(|e| panic!("{name}: status disagrees with the path: {e}"));
    assert_eq!(status, result.status, "{name}");

    if let Some(path) = &result.path {
        assert_eq!(path.first(), &problem.start, "{name}: path must start at the start");
        // Re-sweep every motion at a tenth of a voxel. This passes only
        // if the planner truly validated each returned edge (a spliced
        // or stale edge would face this check for the first time here).
        for w in path.states().windows(2) {
            assert!(
                is_motion_valid(
                    &w[0],
                    &w[1],
                    &problem.body,
                    &problem.map,
                    &problem.space,
                    problem.map.resolution() / 10.0,
                ),
                "{name}: a reported motion fails the dense collision sweep"
            );
        }
        if result.status == SolutionStatus::Exact {
            let final_cost = result
                .cost_trace
                .last()
                .expect("an exact result records at least one improvement")
                .cost;
            let replayed = path.cost(&problem.space);
            assert!(
                (final_cost - replayed).abs() <= 1e-9,
                "{name}: trace ends at {final_cost} but the path costs {replayed}"
            );
        }
    } else {
        assert_eq!(result.status, SolutionStatus::Failure, "{name}");
    }
    assert!(result.iterations > 0, "{name}: no work recorded");
}

#[test]
fn every_planner_is_sound_and_honest_on_a_cluttered_yard() {
    let problem = cluttered_problem(17);
    let params = ensemble_params();
    for (name, plan, budget) in roster() {
        let mut rng = rng_from_seed(0x1701);
        let result = plan(&problem, budget, &params, &mut rng)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        check_result(name, &problem, &result);
        // Iteration budgets run workers round-robin on one thread, so
        // discovery stamps must come out ordered. (Wall-clock ensembles
        // may interleave stamps across threads.)
        for pair in result.cost_trace.windows(2) {
            assert!(
                pair[1].at >= pair[0].at,
                "{name}: trace timestamps went backwards"
            );
        }
        assert!(
            result.path.is_some(),
            "{name}: expected at least an approximation on a solvable yard"
        );
    }
}

#[test]
fn iteration_budgets_replay_bit_for_bit() {
    let problem = cluttered_problem(23);
    let params = ensemble_params();
    for (name, plan, budget) in roster() {
        let mut rng = rng_from_seed(0x2302);
        let first = plan(&problem, budget, &params, &mut rng).expect(name);
        let mut rng = rng_from_seed(0x2302);
        let second = plan(&problem, budget, &params, &mut rng).expect(name);
        assert_eq!(first, second, "{name}: reruns with one seed must agree exactly");
    }
}

#[test]
fn wall_clock_budgets_return_promptly() {
    let problem = cluttered_problem(17);
    let params = ensemble_params();
    for (name, plan, seconds) in [
        ("rrt-star", plan_rrt_star as PlanFn, 0.25),
        ("cforest", plan_cforest, 0.4),
        ("aps", plan_aps, 0.4),
    ] {
        let mut rng = rng_from_seed(0xD0);
        let t0 = Instant::now();
        let result = plan(&problem, Budget::WallClock(seconds), &params, &mut rng).expect(name);
        let elapsed = t0.elapsed().as_secs_f64();
        assert!(
            elapsed < seconds + 1.5,
            "{name}: a {seconds}s budget ran for {elapsed:.2}s"
        );
        check_result(name, &problem, &result);
        for entry in &result.cost_trace {
            assert!(
                entry.at >= 0.0 && entry.at <= elapsed + 0.1,
                "{name}: trace timestamp {} outside the run", entry.at
            );
        }
    }
}

#[test]
fn exactness_tracks_the_goal_tolerance() {
    // A tolerance wider than the start-goal gap makes the problem
    // trivially exact even though the goal sits in a sealed box.
    let mut generous = sealed_goal_problem();
    generous.goal_tolerance = 9.0;
    let params = PlannerParams::default();
    let mut rng = rng_from_seed(5);
    let result =
        plan_rrt_star(&generous, Budget::Iterations(800), &params, &mut rng).expect("valid");
    assert_eq!(result.status, SolutionStatus::Exact);
    let path = result.path.expect("exact");
    let gap = generous
        .space
        .distance(path.terminal(), &generous.goal)
        .expect("matching kinds");
    assert!(gap <= generous.goal_tolerance);

    // A needle-thin tolerance is still reachable because steering toward
    // a goal-biased sample lands on the goal state exactly.
    let mut strict = short_empty_problem();
    strict.goal_tolerance = 1e-6;
    let mut rng = rng_from_seed(6);
    let result =
        plan_rrt_star(&strict, Budget::Iterations(4000), &params, &mut rng).expect("valid");
    assert_eq!(result.status, SolutionStatus::Exact);
    let path = result.path.expect("exact");
    let gap = strict
        .space
        .distance(path.terminal(), &strict.goal)
        .expect("matching kinds");
    assert!(gap <= strict.goal_tolerance);
}

#[test]
fn cforest_falls_back_to_its_best_approximation() {
    let problem = sealed_goal_problem();
    let params = ensemble_params();
    let mut rng = rng_from_seed(0xFA11);
    let result =
        plan_cforest(&problem, Budget::Iterations(2000), &params, &mut rng).expect("valid");
    assert_eq!(result.status, SolutionStatus::Approximate);
    check_result("cforest", &problem, &result);
}

#[test]
fn fmt_star_reports_failure_across_a_split_free_space() {
    let problem = sealed_goal_problem();
    let params = PlannerParams::default();
    let mut rng = rng_from_seed(0x5EA1);
    let result =
        plan_fmt_star(&problem, Budget::Iterations(1_000_000), &params, &mut rng).expect("valid");
    assert_eq!(result.status, SolutionStatus::Failure);
    assert!(result.path.is_none());
    assert!(result.samples_generated >= params.num_samples as u64);
}
