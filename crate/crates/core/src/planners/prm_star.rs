//! PRM* and LazyPRM*: roadmaps over uniformly sampled valid states with
//! k-nearest connections, answered by graph search. The lazy variant
//! defers edge validation until a candidate shortest path is extracted,
//! then invalidates colliding edges and searches again.

use super::nn::PositionIndex;
use super::radius::prm_star_k;
use super::{
    Budget, Checker, Path, PlanError, PlannerParams, PlannerResult, Problem, SolutionStatus,
    TraceEntry,
};
use crate::rng::{rng_from_seed, ChaCha8Rng};
use crate::statespace::{SpaceKind, State};
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::EdgeFiltered;
use rand::Rng;
use std::cell::Cell;
use std::time::{Duration, Instant};

/// Vertices between the first searches; later searches are spaced
/// geometrically so search cost stays proportional to growth cost.
const SEARCH_SPACING_MIN: usize = 25;

/// Cap on uniform draws per vertex; hit only when free space is nearly
/// nonexistent.
const MAX_SAMPLE_DRAWS: usize = 1000;

#[derive(Clone, Copy, PartialEq, Eq)]
enum EdgeStatus {
    Unknown,
    Valid,
    Invalid,
}

struct EdgeInfo {
    cost: f64,
    status: Cell<EdgeStatus>,
}

struct RoadmapPlanner<'a> {
    checker: Checker<'a>,
    lazy: bool,
    /// Straight-segment spaces traverse the same geometry in both
    /// directions, so one validity check settles both directed edges.
    shared_geometry: bool,
    graph: DiGraph<State, EdgeInfo>,
    index: PositionIndex,
    /// Metric distance from each vertex to the goal state.
    goal_gap: Vec<f64>,
    dim: usize,
    start_ix: NodeIndex,
    next_search_at: usize,
    best_cost: f64,
    best_nodes: Option<Vec<NodeIndex>>,
    trace: Vec<TraceEntry>,
    iterations: u64,
    samples: u64,
}

impl<'a> RoadmapPlanner<'a> {
    fn new(problem: &'a Problem, lazy: bool) -> Self {
        let space = problem.space;
        let mut graph = DiGraph::new();
        let start_ix = graph.add_node(problem.start);
        let goal_ix = graph.add_node(problem.goal);
        let mut index = PositionIndex::new();
        index.insert(start_ix.index(), problem.start.position());
        index.insert(goal_ix.index(), problem.goal.position());
        let goal_gap = vec![space.metric(&problem.start, &problem.goal), 0.0];
        RoadmapPlanner {
            checker: Checker::new(problem),
            lazy,
            shared_geometry: matches!(space.kind(), SpaceKind::Se2 | SpaceKind::Se3),
            graph,
            index,
            goal_gap,
            dim: space.dimension(),
            start_ix,
            next_search_at: 2 + SEARCH_SPACING_MIN,
            best_cost: f64::INFINITY,
            best_nodes: None,
            trace: Vec::new(),
            iterations: 0,
            samples: 0,
        }
    }

    fn sample_valid(&mut self, rng: &mut ChaCha8Rng) -> Option<State> {
        let space = self.checker.problem.space;
        for _ in 0..MAX_SAMPLE_DRAWS {
            let s = space.sample_uniform(rng);
            self.samples += 1;
            if self.checker.state_valid(&s) {
                return Some(s);
            }
        }
        None
    }

    /// One growth iteration: sample a valid state and wire it to its
    /// k-nearest neighbors under the space's metric.
    fn grow(&mut self, rng: &mut ChaCha8Rng) {
        self.iterations += 1;
        let problem = self.checker.problem;
        let space = problem.space;
        let Some(state) = self.sample_valid(rng) else {
            return;
        };
        let new_ix = self.graph.add_node(state);
        self.goal_gap.push(space.metric(&state, &problem.goal));
        let k = prm_star_k(self.graph.node_count(), self.dim);

        // Positional over-fetch, re-ranked by the true metric; the index
        // does not yet contain the new vertex.
        let fetched = self.index.k_nearest_positional(state.position(), 4 * k);
        if space.kind() == SpaceKind::Dubins {
            // The Dubins metric is directed: nearest outgoing and
            // incoming neighbor sets differ and are validated apart.
            let outgoing = self.rank(&fetched, k, |other| space.metric(&state, other));
            for (cost, id) in outgoing {
                let other_ix = NodeIndex::new(id);
                self.wire(new_ix, other_ix, cost);
            }
            let incoming = self.rank(&fetched, k, |other| space.metric(other, &state));
            for (cost, id) in incoming {
                let other_ix = NodeIndex::new(id);
                self.wire(other_ix, new_ix, cost);
            }
        } else {
            let ranked = self.rank(&fetched, k, |other| space.metric(&state, other));
            for (cost, id) in ranked {
                let other_ix = NodeIndex::new(id);
                if self.shared_geometry {
                    self.wire_pair(new_ix, other_ix, cost);
                } else {
                    // The metric is symmetric but the swept curves are
                    // not the same set of poses, so validate each way.
                    self.wire(new_ix, other_ix, cost);
                    self.wire(other_ix, new_ix, cost);
                }
            }
        }
        self.index.insert(new_ix.index(), state.position());
    }

    fn rank<F: Fn(&State) -> f64>(
        &self,
        fetched: &[(f64, usize)],
        k: usize,
        metric: F,
    ) -> Vec<(f64, usize)> {
        let mut ranked: Vec<(f64, usize)> = fetched
            .iter()
            .map(|&(_, id)| (metric(&self.graph[NodeIndex::new(id)]), id))
            .collect();
        ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        ranked.truncate(k);
        ranked
    }

    /// Adds the directed edge, validating it now unless lazy.
    fn wire(&mut self, from: NodeIndex, to: NodeIndex, cost: f64) {
        let status = if self.lazy {
            EdgeStatus::Unknown
        } else if self.checker.motion_valid(&self.graph[from], &self.graph[to]) {
            EdgeStatus::Valid
        } else {
            return;
        };
        self.graph.add_edge(
            from,
            to,
            EdgeInfo {
                cost,
                status: Cell::new(status),
            },
        );
    }

    /// Adds both directed edges of a geometrically shared pair on the
    /// strength of a single validity check.
    fn wire_pair(&mut self, a: NodeIndex, b: NodeIndex, cost: f64) {
        let status = if self.lazy {
            EdgeStatus::Unknown
        } else if self.checker.motion_valid(&self.graph[a], &self.graph[b]) {
            EdgeStatus::Valid
        } else {
            return;
        };
        self.graph.add_edge(
            a,
            b,
            EdgeInfo {
                cost,
                status: Cell::new(status),
            },
        );
        self.graph.add_edge(
            b,
            a,
            EdgeInfo {
                cost,
                status: Cell::new(status),
            },
        );
    }

    fn due_for_search(&self) -> bool {
        self.graph.node_count() >= self.next_search_at
    }

    /// Searches the roadmap, records any improvement, and schedules the
    /// next search geometrically.
    fn search(&mut self, at: f64) {
        let n = self.graph.node_count();
        self.next_search_at = n + SEARCH_SPACING_MIN.max(n / 4);
        let Some((cost, nodes)) = self.find_valid_path() else {
            return;
        };
        if cost + 1e-12 < self.best_cost {
            self.best_cost = cost;
            self.best_nodes = Some(nodes);
            self.trace.push(TraceEntry { at, cost });
        }
    }

    /// Shortest path whose edges are all known-valid. Eager roadmaps
    /// hold only valid edges; lazy ones validate along each candidate
    /// and re-search after invalidating, until a path survives or the
    /// start and goal fall in different components.
    fn find_valid_path(&self) -> Option<(f64, Vec<NodeIndex>)> {
        let problem = self.checker.problem;
        let tol = problem.goal_tolerance;
        let goal_pos = problem.goal.position();
        loop {
            let filtered = EdgeFiltered::from_fn(&self.graph, |e| {
                e.weight().status.get() != EdgeStatus::Invalid
            });
            // Positional distance lower-bounds every metric, and any
            // accepting vertex lies within `tol` of the goal, so this
            // heuristic is admissible and consistent.
            let found = petgraph::algo::astar(
                &filtered,
                self.start_ix,
                |n| self.goal_gap[n.index()] <= tol,
                |e| e.weight().cost,
                |n| ((self.graph[n].position() - goal_pos).norm() - tol).max(0.0),
            );
            let (cost, nodes) = found?;
            if !self.lazy || self.validate_candidate(&nodes) {
                return Some((cost, nodes));
            }
        }
    }

    /// Checks a candidate path's unknown edges in order. On the first
    /// collision the edge (and its twin, when geometry is shared) is
    /// invalidated and the caller re-searches.
    fn validate_candidate(&self, nodes: &[NodeIndex]) -> bool {
        for w in nodes.windows(2) {
            let edge = self
                .graph
                .find_edge(w[0], w[1])
                .expect("search walks existing edges");
            let info = &self.graph[edge];
            if info.status.get() != EdgeStatus::Unknown {
                continue;
            }
            let ok = self.checker.motion_valid(&self.graph[w[0]], &self.graph[w[1]]);
            let status = if ok {
                EdgeStatus::Valid
            } else {
                EdgeStatus::Invalid
            };
            info.status.set(status);
            if self.shared_geometry {
                if let Some(rev) = self.graph.find_edge(w[1], w[0]) {
                    self.graph[rev].status.set(status);
                }
            }
            if !ok {
                return false;
            }
        }
        true
    }

    fn into_result(self) -> PlannerResult {
        let kind = self.checker.problem.space.kind();
        let (status, path) = match self.best_nodes {
            Some(nodes) => {
                let mut states: Vec<State> =
                    nodes.iter().map(|&ix| self.graph[ix]).collect();
                if states.len() < 2 {
                    // Start already within tolerance of the goal.
                    states.push(states[0]);
                }
                (SolutionStatus::Exact, Some(Path::new(states, kind)))
            }
            None => (SolutionStatus::Failure, None),
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
}

fn plan_roadmap(
    problem: &Problem,
    budget: Budget,
    rng: &mut ChaCha8Rng,
    lazy: bool,
) -> Result<PlannerResult, PlanError> {
    budget.validate()?;
    problem.validate()?;
    let mut rng = rng_from_seed(rng.gen::<u64>());
    let mut planner = RoadmapPlanner::new(problem, lazy);
    planner.search(0.0);
    match budget {
        Budget::Iterations(n) => {
            for i in 1..=n {
                planner.grow(&mut rng);
                if planner.due_for_search() {
                    planner.search(i as f64);
                }
            }
            planner.search(n as f64);
        }
        Budget::WallClock(secs) => {
            let t0 = Instant::now();
            let deadline = t0 + Duration::from_secs_f64(secs);
            while Instant::now() < deadline {
                planner.grow(&mut rng);
                if planner.due_for_search() {
                    planner.search(t0.elapsed().as_secs_f64());
                }
            }
            planner.search(t0.elapsed().as_secs_f64());
        }
    }
    Ok(planner.into_result())
}

/// PRM*: every inserted edge is collision-checked immediately, so each
/// search answers over a roadmap of known-valid motions.
pub fn plan_prm_star(
    problem: &Problem,
    budget: Budget,
    _params: &PlannerParams,
    rng: &mut ChaCha8Rng,
) -> Result<PlannerResult, PlanError> {
    plan_roadmap(problem, budget, rng, false)
}

/// LazyPRM*: edges enter the roadmap unchecked and are validated only
/// when they appear on a candidate shortest path, which typically costs
/// far fewer motion checks than eager validation.
pub fn plan_lazy_prm_star(
    problem: &Problem,
    budget: Budget,
    _params: &PlannerParams,
    rng: &mut ChaCha8Rng,
) -> Result<PlannerResult, PlanError> {
    plan_roadmap(problem, budget, rng, true)
}
