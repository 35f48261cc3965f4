//! FMT*: one up-front batch of valid samples swept outward from the
//! start by lazy dynamic programming. Single-shot — once the batch is
//! exhausted the planner fails regardless of remaining budget.

use super::nn::PositionIndex;
use super::radius::{default_gamma, rewiring_radius};
use super::{
    Budget, Checker, Path, PlanError, PlannerParams, PlannerResult, Problem, SolutionStatus,
    TraceEntry,
};
use crate::rng::{rng_from_seed, ChaCha8Rng};
use crate::statespace::State;
use ordered_float::OrderedFloat;
use rand::Rng;
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

const START: usize = 0;
const GOAL: usize = 1;

/// Cap on uniform draws while filling the batch, as a multiple of the
/// requested batch size; reached only in nearly-solid worlds.
const MAX_DRAW_FACTOR: usize = 50;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Label {
    Unvisited,
    Open,
    Closed,
}

/// Directed neighborhoods within the connection radius, computed on
/// first use. The positional index over-fetches a superset because every
/// metric dominates positional distance.
struct Neighborhoods<'a> {
    states: &'a [State],
    index: &'a PositionIndex,
    problem: &'a Problem,
    radius: f64,
    out: Vec<Option<Vec<(f64, usize)>>>,
    inc: Vec<Option<Vec<(f64, usize)>>>,
}

impl<'a> Neighborhoods<'a> {
    fn new(
        states: &'a [State],
        index: &'a PositionIndex,
        problem: &'a Problem,
        radius: f64,
    ) -> Self {
        let n = states.len();
        Neighborhoods {
            states,
            index,
            problem,
            radius,
            out: vec![None; n],
            inc: vec![None; n],
        }
    }

    fn compute(&self, i: usize, outgoing: bool) -> Vec<(f64, usize)> {
        let space = &self.problem.space;
        self.index
            .within_positional(self.states[i].position(), self.radius)
            .into_iter()
            .filter(|&j| j != i)
            .filter_map(|j| {
                let d = if outgoing {
                    space.metric(&self.states[i], &self.states[j])
                } else {
                    space.metric(&self.states[j], &self.states[i])
                };
                (d <= self.radius).then_some((d, j))
            })
            .collect()
    }

    fn outgoing(&mut self, i: usize) -> &[(f64, usize)] {
        if self.out[i].is_none() {
            self.out[i] = Some(self.compute(i, true));
        }
        self.out[i].as_deref().expect("just filled")
    }

    fn incoming(&mut self, i: usize) -> &[(f64, usize)] {
        if self.inc[i].is_none() {
            self.inc[i] = Some(self.compute(i, false));
        }
        self.inc[i].as_deref().expect("just filled")
    }
}

/// Fast Marching Tree*. Samples `params.num_samples` valid states, then
/// grows a minimum-cost-to-come tree by expanding the cheapest open
/// node, connecting each unvisited neighbor through its locally optimal
/// open parent with a single lazy collision check.
pub fn plan_fmt_star(
    problem: &Problem,
    budget: Budget,
    params: &PlannerParams,
    rng: &mut ChaCha8Rng,
) -> Result<PlannerResult, PlanError> {
    if params.num_samples < 2 {
        return Err(PlanError::InvalidParams("num_samples must be at least 2"));
    }
    budget.validate()?;
    problem.validate()?;
    let mut rng = rng_from_seed(rng.gen::<u64>());
    let space = problem.space;
    let checker = Checker::new(problem);

    // Batch: start, goal, then valid uniform samples.
    let mut states = vec![problem.start, problem.goal];
    let mut samples_generated = 0u64;
    let mut draws = 0usize;
    let cap = params.num_samples.saturating_mul(MAX_DRAW_FACTOR);
    while states.len() < params.num_samples + 2 && draws < cap {
        let s = space.sample_uniform(&mut rng);
        draws += 1;
        samples_generated += 1;
        if checker.state_valid(&s) {
            states.push(s);
        }
    }
    let n = states.len();
    let mut index = PositionIndex::new();
    for (i, s) in states.iter().enumerate() {
        index.insert(i, s.position());
    }
    let gamma = params.gamma.unwrap_or_else(|| default_gamma(&space));
    let radius = rewiring_radius(n.max(2), space.dimension(), gamma);
    let mut hood = Neighborhoods::new(&states, &index, problem, radius);

    let mut cost = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut label = vec![Label::Unvisited; n];
    let mut open: BinaryHeap<Reverse<(OrderedFloat<f64>, usize)>> = BinaryHeap::new();
    cost[START] = 0.0;
    label[START] = Label::Open;
    open.push(Reverse((OrderedFloat(0.0), START)));

    let (deadline, max_iterations) = match budget {
        Budget::WallClock(secs) => (
            Some(Instant::now() + Duration::from_secs_f64(secs)),
            u64::MAX,
        ),
        Budget::Iterations(k) => (None, k),
    };
    let t0 = Instant::now();
    let mut iterations = 0u64;
    let mut reached = false;

    while iterations < max_iterations {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
        let Some(Reverse((_, z))) = open.pop() else {
            break; // batch exhausted: fail even with budget left
        };
        debug_assert!(label[z] == Label::Open, "each node enters the heap once");
        iterations += 1;
        if z == GOAL {
            reached = true;
            break;
        }
        let neighbors: Vec<usize> = hood
            .outgoing(z)
            .iter()
            .filter(|&&(_, x)| label[x] == Label::Unvisited)
            .map(|&(_, x)| x)
            .collect();
        for x in neighbors {
            // Locally optimal one-step connection from the open set.
            let best = hood
                .incoming(x)
                .iter()
                .filter(|&&(_, y)| label[y] == Label::Open)
                .map(|&(d, y)| (cost[y] + d, y))
                .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let Some((total, y)) = best else { continue };
            if checker.motion_valid(&states[y], &states[x]) {
                cost[x] = total;
                parent[x] = y;
                label[x] = Label::Open;
                open.push(Reverse((OrderedFloat(total), x)));
            }
            // On failure x stays unvisited and may be retried from a
            // later expansion with a different optimal parent.
        }
        label[z] = Label::Closed;
    }

    let (status, path, cost_trace) = if reached {
        let mut chain = Vec::new();
        let mut cur = GOAL;
        while cur != usize::MAX {
            chain.push(states[cur]);
            cur = parent[cur];
        }
        chain.reverse();
        let at = match budget {
            Budget::Iterations(_) => iterations as f64,
            Budget::WallClock(_) => t0.elapsed().as_secs_f64(),
        };
        let trace = vec![TraceEntry {
            at,
            cost: cost[GOAL],
        }];
        (
            SolutionStatus::Exact,
            Some(Path::new(chain, space.kind())),
            trace,
        )
    } else {
        (SolutionStatus::Failure, None, Vec::new())
    };
    Ok(PlannerResult {
        status,
        path,
        cost_trace,
        iterations,
        samples_generated,
        motion_checks: checker.motion_checks(),
    })
}
