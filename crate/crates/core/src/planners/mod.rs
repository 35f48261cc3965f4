//! Sampling-based optimizing planners behind one anytime interface.
//!
//! Seven planners share the machinery in this module: a positional
//! nearest-neighbor index with metric re-ranking ([`nn`]), the
//! connection-radius formulas ([`radius`]), informed sampling
//! ([`sampling`]), and shortcut simplification ([`simplify`]). All of
//! them consume a [`Problem`] and a [`Budget`] and produce a
//! [`PlannerResult`] whose cost trace is non-increasing.
//!
//! Determinism contract: under an [`Budget::Iterations`] budget and a
//! fixed seed, single-worker planners are bit-reproducible, and the
//! multi-worker ensembles run their workers on a single thread in
//! round-robin order so they are too. Wall-clock budgets trade that
//! for real concurrency.

mod aps;
mod cforest;
mod fmt_star;
mod nn;
mod prm_star;
mod radius;
mod rrt_star;
mod sampling;
mod shared;
mod simplify;

pub use aps::plan_aps;
pub use cforest::plan_cforest;
pub use fmt_star::plan_fmt_star;
pub use prm_star::{plan_lazy_prm_star, plan_prm_star};
pub use radius::{default_gamma, prm_star_k, rewiring_radius, ETA_CAP};
pub use rrt_star::{plan_informed_rrt_star, plan_rrt_star};
pub use sampling::informed_sample;
pub use simplify::{interpolate_path, shortcut_simplify};

use crate::collision::{is_motion_valid, is_state_valid, RobotBody};
use crate::statespace::{SpaceKind, State, StateSpace};
use crate::worldmap::OccupancyOctree;
use std::cell::Cell;
use thiserror::Error;

/// What the planners minimize. Only path length is implemented; the
/// enum keeps call sites explicit about that choice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Objective {
    #[default]
    PathLength,
}

/// One planning query: the space, the world, the robot, and the two
/// states to connect.
#[derive(Clone, Debug)]
pub struct Problem {
    pub space: StateSpace,
    pub map: OccupancyOctree,
    pub body: RobotBody,
    pub start: State,
    pub goal: State,
    /// A path ending within this metric distance of the goal solves the
    /// problem exactly.
    pub goal_tolerance: f64,
    /// Spacing of collision checks along candidate motions.
    pub validation_step: f64,
    pub objective: Objective,
}

impl Problem {
    /// Builds a problem with the default goal tolerance (0.2 m) and a
    /// validation step of a tenth of a voxel. Fails if either endpoint
    /// state is invalid.
    ///
    /// The step is deliberately finer than the half-voxel default that
    /// suffices for one-off motion queries: optimizing planners converge
    /// onto whatever corner clearance the motion checker cannot see, so
    /// paths built at a coarse step routinely hide millimeter clips that
    /// a denser re-check exposes. Planning at the re-check resolution
    /// keeps returned paths valid under that scrutiny by construction.
    pub fn new(
        space: StateSpace,
        map: OccupancyOctree,
        body: RobotBody,
        start: State,
        goal: State,
    ) -> Result<Self, PlanError> {
        let problem = Problem {
            validation_step: (map.resolution() / 10.0).min(0.1),
            space,
            map,
            body,
            start,
            goal,
            goal_tolerance: 0.2,
            objective: Objective::PathLength,
        };
        problem.validate()?;
        Ok(problem)
    }

    /// Re-checks the invariants planners rely on. Called by every
    /// planner before searching, since the fields are public.
    pub fn validate(&self) -> Result<(), PlanError> {
        if !(self.goal_tolerance > 0.0) {
            return Err(PlanError::InvalidTolerance(self.goal_tolerance));
        }
        if !(self.validation_step > 0.0) {
            return Err(PlanError::InvalidValidationStep(self.validation_step));
        }
        if !is_state_valid(&self.start, &self.body, &self.map, &self.space) {
            return Err(PlanError::InvalidStart);
        }
        if !is_state_valid(&self.goal, &self.body, &self.map, &self.space) {
            return Err(PlanError::InvalidGoal);
        }
        Ok(())
    }
}

/// How long a planner may run: real time for benchmarks, an iteration
/// count for reproducible tests.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Budget {
    WallClock(f64),
    Iterations(u64),
}

impl Budget {
    pub fn validate(&self) -> Result<(), PlanError> {
        match *self {
            Budget::WallClock(s) if s > 0.0 => Ok(()),
            Budget::Iterations(n) if n > 0 => Ok(()),
            _ => Err(PlanError::InvalidBudget),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionStatus {
    /// The path terminates within `goal_tolerance` of the goal.
    Exact,
    /// A path exists but its terminal state is outside the tolerance.
    Approximate,
    Failure,
}

/// An ordered sequence of states whose consecutive motions were valid
/// when the path was built.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    states: Vec<State>,
    kind: SpaceKind,
}

impl Path {
    pub fn new(states: Vec<State>, kind: SpaceKind) -> Self {
        assert!(states.len() >= 2, "a path has at least two states");
        Path { states, kind }
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn first(&self) -> &State {
        &self.states[0]
    }

    pub fn terminal(&self) -> &State {
        self.states.last().expect("paths are never empty")
    }

    /// Sum of metric segment lengths.
    pub fn cost(&self, space: &StateSpace) -> f64 {
        self.states
            .windows(2)
            .map(|w| space.metric(&w[0], &w[1]))
            .sum()
    }
}

/// One point on the anytime convergence curve: `at` is seconds under a
/// wall-clock budget and an iteration count under an iteration budget.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceEntry {
    pub at: f64,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlannerResult {
    pub status: SolutionStatus,
    pub path: Option<Path>,
    /// Best solution cost after each improvement, in discovery order.
    pub cost_trace: Vec<TraceEntry>,
    pub iterations: u64,
    pub samples_generated: u64,
    /// Motion validity queries issued, the dominant cost of planning.
    pub motion_checks: u64,
}

/// Per-planner tuning knobs. The defaults are the values used by the
/// benchmark harness.
#[derive(Clone, Debug)]
pub struct PlannerParams {
    /// Steering bound for tree extensions, meters.
    pub max_edge: f64,
    /// Probability of sampling the goal state in tree planners.
    pub goal_bias: f64,
    /// Optional override of the connection-radius constant; `None`
    /// derives it from the space via [`default_gamma`].
    pub gamma: Option<f64>,
    /// Batch size for FMT*.
    pub num_samples: usize,
    /// Worker count for the CForest and APS ensembles.
    pub workers: usize,
    /// Shortcut attempts per simplification pass in APS.
    pub simplify_attempts: usize,
    /// States in APS's resampled output paths.
    pub interpolate_states: usize,
}

impl Default for PlannerParams {
    fn default() -> Self {
        PlannerParams {
            max_edge: 2.5,
            goal_bias: 0.05,
            gamma: None,
            num_samples: 2000,
            workers: 8,
            simplify_attempts: 60,
            interpolate_states: 120,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum PlanError {
    #[error("start state is invalid (out of bounds or in collision)")]
    InvalidStart,
    #[error("goal state is invalid (out of bounds or in collision)")]
    InvalidGoal,
    #[error("goal tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("validation step must be positive, got {0}")]
    InvalidValidationStep(f64),
    #[error("budget must be positive")]
    InvalidBudget,
    #[error("invalid planner parameter: {0}")]
    InvalidParams(&'static str),
    #[error("informed sampling needs best cost {c_best} >= minimum cost {c_min}")]
    CostBelowMinimum { c_best: f64, c_min: f64 },
}

/// Collision queries routed through one place so every planner reports
/// a comparable `motion_checks` count.
pub(crate) struct Checker<'a> {
    pub problem: &'a Problem,
    motion_checks: Cell<u64>,
}

impl<'a> Checker<'a> {
    pub fn new(problem: &'a Problem) -> Self {
        Checker {
            problem,
            motion_checks: Cell::new(0),
        }
    }

    pub fn state_valid(&self, s: &State) -> bool {
        let p = self.problem;
        is_state_valid(s, &p.body, &p.map, &p.space)
    }

    pub fn motion_valid(&self, a: &State, b: &State) -> bool {
        self.motion_checks.set(self.motion_checks.get() + 1);
        let p = self.problem;
        is_motion_valid(a, b, &p.body, &p.map, &p.space, p.validation_step)
    }

    pub fn motion_checks(&self) -> u64 {
        self.motion_checks.get()
    }
}

/// Positional straight-line lower bound on the cost of any path through
/// `s`, used for CForest pruning.
pub(crate) fn cost_lower_bound(start: &State, goal: &State, s: &State) -> f64 {
    let p = s.position();
    (p - start.position()).norm() + (goal.position() - p).norm()
}
