//! The RRT* engine. Plain RRT* and Informed RRT* are thin wrappers; the
//! CForest and APS ensembles drive the same engine one step at a time.

use super::nn::PositionIndex;
use super::radius::{default_gamma, rewiring_radius};
use super::sampling::informed_sample;
use super::shared::SharedBest;
use super::{
    cost_lower_bound, Budget, Checker, Path, PlanError, PlannerParams, PlannerResult, Problem,
    SolutionStatus, TraceEntry,
};
use crate::rng::ChaCha8Rng;
use crate::statespace::State;
use rand::Rng;
use std::time::{Duration, Instant};

const NO_PARENT: usize = usize::MAX;

/// Behavioral switches distinguishing the engine's users.
#[derive(Clone, Copy, Debug)]
pub(crate) struct RrtOptions {
    /// Draw from the informed spheroid once a solution exists.
    pub informed: bool,
    /// Discard samples whose straight-line cost bound cannot beat the
    /// best known solution.
    pub lb_prune: bool,
}

struct Node {
    state: State,
    parent: usize,
    /// Metric length of the edge from the parent.
    edge_cost: f64,
    /// Cost to come from the start; always `parent.cost + edge_cost`.
    cost: f64,
    children: Vec<usize>,
    /// Metric distance from this state to the goal, fixed at insertion.
    goal_gap: f64,
}

pub(crate) struct RrtEngine<'a> {
    checker: Checker<'a>,
    params: &'a PlannerParams,
    opts: RrtOptions,
    rng: ChaCha8Rng,
    nodes: Vec<Node>,
    index: PositionIndex,
    gamma: f64,
    dim: usize,
    /// Euclidean start-goal gap; floors the informed spheroid diameter,
    /// since a path ending inside the tolerance can cost less than it.
    c_min: f64,
    /// Indices of nodes within the goal tolerance.
    solution_nodes: Vec<usize>,
    best_cost: f64,
    best_node: usize,
    nearest_to_goal: (f64, usize),
    iterations: u64,
    samples: u64,
    trace: Vec<TraceEntry>,
}

impl<'a> RrtEngine<'a> {
    pub fn new(
        problem: &'a Problem,
        params: &'a PlannerParams,
        opts: RrtOptions,
        rng: ChaCha8Rng,
    ) -> Result<Self, PlanError> {
        problem.validate()?;
        let goal_gap = problem.space.metric(&problem.start, &problem.goal);
        let c_min = (problem.goal.position() - problem.start.position()).norm();
        let root = Node {
            state: problem.start,
            parent: NO_PARENT,
            edge_cost: 0.0,
            cost: 0.0,
            children: Vec::new(),
            goal_gap,
        };
        let mut index = PositionIndex::new();
        index.insert(0, problem.start.position());
        let mut engine = RrtEngine {
            checker: Checker::new(problem),
            params,
            opts,
            rng,
            nodes: vec![root],
            index,
            gamma: params.gamma.unwrap_or_else(|| default_gamma(&problem.space)),
            dim: problem.space.dimension(),
            c_min,
            solution_nodes: Vec::new(),
            best_cost: f64::INFINITY,
            best_node: NO_PARENT,
            nearest_to_goal: (goal_gap, 0),
            iterations: 0,
            samples: 0,
            trace: Vec::new(),
        };
        if goal_gap <= problem.goal_tolerance {
            engine.solution_nodes.push(0);
            engine.refresh_best(0.0, None);
        }
        Ok(engine)
    }

    fn problem(&self) -> &'a Problem {
        self.checker.problem
    }

    /// One sample-extend-rewire pass. `at` stamps any improvement in
    /// the trace; `shared` is the ensemble cell, if any.
    pub fn step(&mut self, at: f64, shared: Option<&SharedBest>) {
        self.iterations += 1;
        let problem = self.problem();
        let space = problem.space;
        let goal = problem.goal;
        let c_best = match shared {
            Some(cell) => self.best_cost.min(cell.cost()),
            None => self.best_cost,
        };

        // Sample: goal-biased, informed once a solution bounds the cost.
        // The spheroid diameter is floored at the focal distance because a
        // path ending inside the goal tolerance can cost slightly less.
        let informed_cost =
            (self.opts.informed && c_best.is_finite()).then(|| c_best.max(self.c_min));
        let goal_draw = self.rng.gen::<f64>() < self.params.goal_bias;
        let sample = if goal_draw {
            goal
        } else if let Some(c) = informed_cost {
            informed_sample(&problem.start, &goal, c, &space, &mut self.rng)
                .expect("spheroid cost is floored at the focal distance")
        } else {
            space.sample_uniform(&mut self.rng)
        };
        self.samples += 1;
        if let Some(c) = informed_cost {
            if !goal_draw {
                debug_assert!(
                    cost_lower_bound(&problem.start, &goal, &sample) <= c + 1e-9,
                    "informed sample escaped the spheroid"
                );
            }
        }
        if self.opts.lb_prune
            && c_best.is_finite()
            && cost_lower_bound(&problem.start, &goal, &sample) >= c_best
        {
            return;
        }

        // Steer from the metrically nearest node toward the sample.
        let near_idx = self.metric_nearest(&sample);
        let near_state = self.nodes[near_idx].state;
        let d_near = space.metric(&near_state, &sample);
        if d_near < 1e-12 {
            return;
        }
        let new_state = if d_near <= self.params.max_edge {
            sample
        } else {
            space
                .interpolate(&near_state, &sample, self.params.max_edge / d_near)
                .expect("engine states always match the space")
        };
        if !self.checker.state_valid(&new_state) {
            return;
        }
        if self.opts.lb_prune
            && c_best.is_finite()
            && cost_lower_bound(&problem.start, &goal, &new_state) >= c_best
        {
            return;
        }

        // Neighbors within the shrinking radius; the nearest node stays
        // a parent candidate even when the radius no longer reaches it.
        let r = rewiring_radius(self.nodes.len().max(2), self.dim, self.gamma);
        let mut neighbors = self.index.within_positional(new_state.position(), r);
        if !neighbors.contains(&near_idx) {
            neighbors.push(near_idx);
        }

        // Choose the parent minimizing cost to come, validating motions
        // cheapest-first.
        let mut candidates: Vec<(f64, f64, usize)> = neighbors
            .iter()
            .filter_map(|&i| {
                let edge = space.metric(&self.nodes[i].state, &new_state);
                (edge <= r || i == near_idx).then(|| (self.nodes[i].cost + edge, edge, i))
            })
            .collect();
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
        let mut chosen = None;
        for &(_, edge, i) in &candidates {
            if self.checker.motion_valid(&self.nodes[i].state, &new_state) {
                chosen = Some((i, edge));
                break;
            }
        }
        let Some((parent, edge_cost)) = chosen else {
            return;
        };

        // Insert.
        let new_idx = self.nodes.len();
        let goal_gap = space.metric(&new_state, &goal);
        let cost = self.nodes[parent].cost + edge_cost;
        self.nodes.push(Node {
            state: new_state,
            parent,
            edge_cost,
            cost,
            children: Vec::new(),
            goal_gap,
        });
        self.nodes[parent].children.push(new_idx);
        self.index.insert(new_idx, new_state.position());
        if goal_gap < self.nearest_to_goal.0 {
            self.nearest_to_goal = (goal_gap, new_idx);
        }
        let mut solutions_dirty = false;
        if goal_gap <= problem.goal_tolerance {
            self.solution_nodes.push(new_idx);
            solutions_dirty = true;
        }

        // Rewire neighbors through the new node where that is cheaper.
        for &y in &neighbors {
            if y == parent || y == 0 {
                continue;
            }
            let edge = space.metric(&new_state, &self.nodes[y].state);
            if edge > r {
                continue;
            }
            let through_new = cost + edge;
            if through_new + 1e-12 < self.nodes[y].cost
                && self.checker.motion_valid(&new_state, &self.nodes[y].state)
            {
                self.reparent(y, new_idx, edge);
                solutions_dirty |= self.propagate_costs(y);
            }
        }

        if solutions_dirty {
            self.refresh_best(at, shared);
        }
    }

    /// Nearest tree node by the directed metric toward `target`,
    /// re-ranked from a 4x positional over-fetch.
    fn metric_nearest(&self, target: &State) -> usize {
        let space = &self.problem().space;
        let candidates = self.index.k_nearest_positional(target.position(), 4);
        candidates
            .into_iter()
            .map(|(_, i)| (space.metric(&self.nodes[i].state, target), i))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .map(|(_, i)| i)
            .expect("the tree always holds the root")
    }

    fn reparent(&mut self, child: usize, new_parent: usize, edge_cost: f64) {
        let old = self.nodes[child].parent;
        let slot = self.nodes[old]
            .children
            .iter()
            .position(|&c| c == child)
            .expect("child listed under its parent");
        self.nodes[old].children.swap_remove(slot);
        self.nodes[child].parent = new_parent;
        self.nodes[child].edge_cost = edge_cost;
        self.nodes[new_parent].children.push(child);
    }

    /// Recomputes costs below `root` after a reparent. Returns whether
    /// any solution node was touched.
    fn propagate_costs(&mut self, root: usize) -> bool {
        let tol = self.problem().goal_tolerance;
        let mut touched_solution = false;
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            let parent = self.nodes[i].parent;
            self.nodes[i].cost = self.nodes[parent].cost + self.nodes[i].edge_cost;
            if self.nodes[i].goal_gap <= tol {
                touched_solution = true;
            }
            stack.extend_from_slice(&self.nodes[i].children);
        }
        touched_solution
    }

    /// Re-derives the best solution node; records and publishes any
    /// improvement.
    fn refresh_best(&mut self, at: f64, shared: Option<&SharedBest>) {
        let best = self
            .solution_nodes
            .iter()
            .map(|&i| (self.nodes[i].cost, i))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let Some((cost, idx)) = best else { return };
        if cost + 1e-12 < self.best_cost {
            self.best_cost = cost;
            self.best_node = idx;
            self.trace.push(TraceEntry { at, cost });
            if let Some(cell) = shared {
                cell.offer(cost, at, || self.build_path(idx));
            }
        }
    }

    fn build_path(&self, terminal: usize) -> Path {
        let mut states = Vec::new();
        let mut cur = terminal;
        while cur != NO_PARENT {
            states.push(self.nodes[cur].state);
            cur = self.nodes[cur].parent;
        }
        states.reverse();
        if states.len() < 2 {
            // Start within tolerance of goal: the degenerate exact path.
            states.push(self.nodes[terminal].state);
        }
        Path::new(states, self.problem().space.kind())
    }

    pub fn best_cost(&self) -> f64 {
        self.best_cost
    }

    pub fn best_path(&self) -> Option<Path> {
        (self.best_node != NO_PARENT).then(|| self.build_path(self.best_node))
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn motion_checks(&self) -> u64 {
        self.checker.motion_checks()
    }

    /// Distance from the tree to the goal, and the corresponding
    /// approximate path, for ensembles that merge worker fallbacks.
    pub fn nearest_gap(&self) -> f64 {
        self.nearest_to_goal.0
    }

    pub fn approximate_path(&self) -> Option<Path> {
        let (_, idx) = self.nearest_to_goal;
        (idx != 0).then(|| self.build_path(idx))
    }

    pub fn into_result(self) -> PlannerResult {
        let (status, path) = if self.best_node != NO_PARENT {
            (SolutionStatus::Exact, Some(self.build_path(self.best_node)))
        } else if let Some(path) = self.approximate_path() {
            (SolutionStatus::Approximate, Some(path))
        } else {
            (SolutionStatus::Failure, None)
        };
        PlannerResult {
            status,
            path,
            cost_trace: self.trace,
            iterations: self.iterations,
            samples_generated: self.samples,
            motion_checks: self.checker.motion_checks(),
        }
    }

    /// Runs the engine alone to budget exhaustion.
    fn run(mut self, budget: Budget) -> PlannerResult {
        match budget {
            Budget::Iterations(n) => {
                for i in 1..=n {
                    self.step(i as f64, None);
                }
            }
            Budget::WallClock(secs) => {
                let t0 = Instant::now();
                let deadline = t0 + Duration::from_secs_f64(secs);
                while Instant::now() < deadline {
                    self.step(t0.elapsed().as_secs_f64(), None);
                }
            }
        }
        self.into_result()
    }
}

pub(crate) fn plan_rrt_star_with(
    problem: &Problem,
    budget: Budget,
    params: &PlannerParams,
    opts: RrtOptions,
    rng: &mut ChaCha8Rng,
) -> Result<PlannerResult, PlanError> {
    budget.validate()?;
    let seed = rng.gen::<u64>();
    let engine = RrtEngine::new(problem, params, opts, crate::rng::rng_from_seed(seed))?;
    Ok(engine.run(budget))
}

/// Anytime RRT*: uniform sampling, cost-aware parent choice, rewiring.
pub fn plan_rrt_star(
    problem: &Problem,
    budget: Budget,
    params: &PlannerParams,
    rng: &mut ChaCha8Rng,
) -> Result<PlannerResult, PlanError> {
    plan_rrt_star_with(
        problem,
        budget,
        params,
        RrtOptions {
            informed: false,
            lb_prune: false,
        },
        rng,
    )
}

/// RRT* that restricts sampling to the informed spheroid once a first
/// solution bounds the optimal cost. Identical to [`plan_rrt_star`]
/// until that first solution.
pub fn plan_informed_rrt_star(
    problem: &Problem,
    budget: Budget,
    params: &PlannerParams,
    rng: &mut ChaCha8Rng,
) -> Result<PlannerResult, PlanError> {
    plan_rrt_star_with(
        problem,
        budget,
        params,
        RrtOptions {
            informed: true,
            lb_prune: false,
        },
        rng,
    )
}
