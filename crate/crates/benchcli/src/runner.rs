//! Campaign execution: `epochs` problems × selected planners ×
//! `batch_size` repeats, one CSV row per run — failures included, so
//! the row count is always the full product.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path as StdPath;
use std::time::Instant;

use sbo_core::metrics::{path_length, path_smoothness};
use sbo_core::planners::{
    interpolate_path, plan_aps, plan_cforest, plan_fmt_star, plan_informed_rrt_star,
    plan_lazy_prm_star, plan_prm_star, plan_rrt_star, Budget, PlanError, PlannerParams,
    PlannerResult, Problem, SolutionStatus,
};
use sbo_core::rng::{derive_seed, rng_from_seed, ChaCha8Rng};
use sbo_core::statespace::StateSpace;
use sbo_core::worldmap::OccupancyOctree;
use thiserror::Error;

use crate::config::{BenchmarkConfig, PlannerKind};
use crate::problem::{generate_problem, BenchProblem, GenerateError, ScreenBudgets};
use crate::records::{emit_csv, normalize_length, render_summary, BenchRecord, RecordError};

/// How run budgets are expressed. Wall-clock is the benchmark protocol;
/// iteration budgets trade realism for bit-exact reproducibility (two
/// campaigns with the same master seed emit identical rows, wall time
/// aside).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BudgetMode {
    WallClock,
    Iterations,
}

// Fixed iteration budgets for reproducible campaigns. The planner
// budget approximates what the configured 1 s wall-clock achieves on
// the bundled scenes; the screening budgets are sized so feasible
// problems essentially never get rejected for want of iterations.
pub const PLANNER_ITERATIONS: u64 = 2_000;
pub const PRECHECK_ITERATIONS: u64 = 30_000;
pub const GROUND_TRUTH_ITERATIONS: u64 = 40_000;

impl BudgetMode {
    pub fn planner_budget(self, config: &BenchmarkConfig) -> Budget {
        match self {
            BudgetMode::WallClock => Budget::WallClock(config.planner_timeout),
            BudgetMode::Iterations => Budget::Iterations(PLANNER_ITERATIONS),
        }
    }

    pub fn screen_budgets(self, config: &BenchmarkConfig) -> ScreenBudgets {
        match self {
            BudgetMode::WallClock => ScreenBudgets {
                precheck: Budget::WallClock(config.precheck_timeout),
                ground_truth: Budget::WallClock(config.ground_truth_timeout),
            },
            BudgetMode::Iterations => ScreenBudgets {
                precheck: Budget::Iterations(PRECHECK_ITERATIONS),
                ground_truth: Budget::Iterations(GROUND_TRUTH_ITERATIONS),
            },
        }
    }
}

type PlanFn = fn(
    &Problem,
    Budget,
    &PlannerParams,
    &mut ChaCha8Rng,
) -> Result<PlannerResult, PlanError>;

pub fn plan_fn(kind: PlannerKind) -> PlanFn {
    match kind {
        PlannerKind::RrtStar => plan_rrt_star,
        PlannerKind::InformedRrtStar => plan_informed_rrt_star,
        PlannerKind::PrmStar => plan_prm_star,
        PlannerKind::LazyPrmStar => plan_lazy_prm_star,
        PlannerKind::FmtStar => plan_fmt_star,
        PlannerKind::CForest => plan_cforest,
        PlannerKind::Aps => plan_aps,
    }
}

/// Everything a finished (or aborted) campaign produced.
#[derive(Clone, Debug)]
pub struct Campaign {
    pub problems: Vec<BenchProblem>,
    pub records: Vec<BenchRecord>,
    /// Set when the campaign stopped early; the records gathered up to
    /// that point are still valid.
    pub aborted: Option<String>,
}

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("problem {id}: {source}")]
    Generation { id: u32, source: GenerateError },
    #[error(transparent)]
    Record(#[from] RecordError),
    #[error("failed to write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Runs the full campaign in memory: generates the problems, then runs
/// every planner × repeat cell.
pub fn run_campaign(
    config: &BenchmarkConfig,
    map: &OccupancyOctree,
    space: &StateSpace,
    mode: BudgetMode,
) -> Result<Campaign, CampaignError> {
    let screen = mode.screen_budgets(config);
    let planner_budget = mode.planner_budget(config);

    let mut problems = Vec::with_capacity(config.epochs as usize);
    for id in 0..config.epochs {
        let mut rng = rng_from_seed(derive_seed(config.master_seed, "problem", &[id as u64]));
        let problem = generate_problem(config, map, space, screen, id, &mut rng)
            .map_err(|source| CampaignError::Generation { id, source })?;
        problems.push(problem);
    }

    let mut records = Vec::new();
    let mut aborted = None;
    'campaign: for problem in &problems {
        let mut planning = Problem::new(
            space.clone(),
            map.clone(),
            config.body.clone(),
            problem.start,
            problem.goal,
        )
        .expect("generated problems have valid endpoints");
        planning.goal_tolerance = config.goal_tolerance;

        for &planner in &config.planners {
            for repeat in 0..config.batch_size {
                let record = run_one(
                    config,
                    &planning,
                    problem,
                    planner,
                    repeat,
                    planner_budget,
                    space,
                )?;
                records.push(record);

                if let Some(rss) = current_rss_mb() {
                    if rss > config.max_memory_mb {
                        aborted = Some(format!(
                            "memory watermark exceeded: {rss} MB resident > max_memory {} MB \
                             after {} of {} runs",
                            config.max_memory_mb,
                            records.len(),
                            expected_rows(config),
                        ));
                        break 'campaign;
                    }
                }
            }
        }
    }

    Ok(Campaign {
        problems,
        records,
        aborted,
    })
}

pub fn expected_rows(config: &BenchmarkConfig) -> usize {
    config.epochs as usize * config.batch_size as usize * config.planners.len()
}

fn run_one(
    config: &BenchmarkConfig,
    planning: &Problem,
    problem: &BenchProblem,
    planner: PlannerKind,
    repeat: u32,
    budget: Budget,
    space: &StateSpace,
) -> Result<BenchRecord, CampaignError> {
    let seed = derive_seed(
        config.master_seed,
        planner.canonical_name(),
        &[problem.id as u64, repeat as u64],
    );
    let plan = plan_fn(planner);
    let params = PlannerParams::default();

    let started = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        let mut rng = rng_from_seed(seed);
        plan(planning, budget, &params, &mut rng)
    }));
    let wall_time = started.elapsed().as_secs_f64();

    let mut record = BenchRecord {
        planner: planner.canonical_name().to_string(),
        problem_id: problem.id,
        repeat,
        status: SolutionStatus::Failure,
        raw_length: None,
        normalized_length: None,
        smoothness: None,
        wall_time,
        iterations: 0,
        samples: 0,
        seed,
    };

    match outcome {
        Ok(Ok(result)) => {
            record.status = result.status;
            record.iterations = result.iterations;
            record.samples = result.samples_generated;
            if let Some(path) = &result.path {
                let resampled = interpolate_path(path, config.interpolation_parameter, space);
                let raw = path_length(&resampled, space);
                record.raw_length = Some(raw);
                record.normalized_length =
                    Some(normalize_length(raw, problem.ground_truth_length)?);
                record.smoothness = Some(path_smoothness(&resampled));
            }
        }
        Ok(Err(error)) => {
            eprintln!(
                "warning: {} on problem {} repeat {repeat} reported an error: {error}",
                planner.canonical_name(),
                problem.id
            );
        }
        Err(_) => {
            eprintln!(
                "warning: {} on problem {} repeat {repeat} panicked; recorded as Failure",
                planner.canonical_name(),
                problem.id
            );
        }
    }
    Ok(record)
}

/// Resident set size in MB from the kernel's own accounting; `None` on
/// platforms without procfs.
pub fn current_rss_mb() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmRSS:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb / 1024)
}

/// Runs the campaign and writes the results file plus a summary next to
/// it; returns the campaign and the rendered summary text.
pub fn run_benchmark(
    config: &BenchmarkConfig,
    map: &OccupancyOctree,
    space: &StateSpace,
    mode: BudgetMode,
    results_path: &StdPath,
) -> Result<(Campaign, String), CampaignError> {
    let campaign = run_campaign(config, map, space, mode)?;
    let csv = emit_csv(&campaign.records);
    fs::write(results_path, csv).map_err(|source| CampaignError::Io {
        path: results_path.display().to_string(),
        source,
    })?;

    let mut summary = render_summary(&campaign.records, config.interpolation_parameter);
    if let Some(reason) = &campaign.aborted {
        summary.push_str(&format!("# campaign aborted early: {reason}\n"));
    }
    let summary_path = results_path.with_extension("summary.txt");
    fs::write(&summary_path, &summary).map_err(|source| CampaignError::Io {
        path: summary_path.display().to_string(),
        source,
    })?;
    Ok((campaign, summary))
}
