//! `sbo-bench`: run planner benchmark campaigns from a YAML config.
//!
//! Subcommands: `gen-map` materializes the configured scene to a map
//! file, `gt` generates and prices the benchmark problems, `bench` runs
//! the full campaign to a CSV results file, `plot` renders the figures.
//!
//! Exit codes: 0 success, 2 configuration error, 3 problem/scene
//! generation failure, 1 anything else.

use std::fs;
use std::path::{Path as StdPath, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sbo_bench::config::{parse_config, BenchmarkConfig, SceneSource};
use sbo_bench::records::parse_csv;
use sbo_bench::runner::{run_benchmark, BudgetMode};
use sbo_bench::{emit_plots, generate_problem, CampaignError};
use sbo_core::rng::{derive_seed, rng_from_seed};
use sbo_core::worldmap::save_map_file;

#[derive(Parser)]
#[command(name = "sbo-bench", about = "Sampling-based planner benchmark harness")]
struct Cli {
    /// YAML configuration file.
    #[arg(long, global = true, default_value = "bench.yaml")]
    config: PathBuf,
    /// Override the configured master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Budget discipline: wall-clock timeouts (the benchmark protocol)
    /// or fixed iteration counts (bit-reproducible runs).
    #[arg(long, global = true, value_enum, default_value_t = BudgetModeArg::Wallclock)]
    budget_mode: BudgetModeArg,
    /// Output directory; defaults to the configured output locations.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BudgetModeArg {
    Wallclock,
    Iterations,
}

impl From<BudgetModeArg> for BudgetMode {
    fn from(arg: BudgetModeArg) -> BudgetMode {
        match arg {
            BudgetModeArg::Wallclock => BudgetMode::WallClock,
            BudgetModeArg::Iterations => BudgetMode::Iterations,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the configured scene and save it as a map file.
    GenMap,
    /// Generate the benchmark problems and print their ground truths.
    Gt,
    /// Run the full campaign and write the CSV results file.
    Bench,
    /// Render SVG figures from the results file.
    Plot,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_GENERATION: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(error.exit_code())
        }
    }
}

#[derive(Debug)]
struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> CliError {
        CliError {
            message: message.into(),
            code,
        }
    }

    fn exit_code(&self) -> u8 {
        self.code
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

fn load_config(cli: &Cli) -> Result<BenchmarkConfig, CliError> {
    let text = fs::read_to_string(&cli.config).map_err(|e| {
        CliError::new(
            EXIT_CONFIG,
            format!("cannot read config {}: {e}", cli.config.display()),
        )
    })?;
    let mut config =
        parse_config(&text).map_err(|e| CliError::new(EXIT_CONFIG, e.to_string()))?;
    if let Some(seed) = cli.seed {
        config.master_seed = seed;
    }
    for warning in &config.warnings {
        eprintln!("warning: {warning}");
    }
    Ok(config)
}

/// Scene file paths in the config resolve against the config file's
/// directory, so a config and its map travel together.
fn config_dir(cli: &Cli) -> PathBuf {
    cli.config
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(StdPath::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn results_path(cli: &Cli, config: &BenchmarkConfig) -> PathBuf {
    match &cli.out {
        Some(dir) => {
            let name = config
                .results_output_file
                .file_name()
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("result.log"));
            dir.join(name)
        }
        None => config.results_output_file.clone(),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let config = load_config(cli)?;
    let map = config
        .build_map(&config_dir(cli))
        .map_err(|e| CliError::new(EXIT_GENERATION, e.to_string()))?;
    let space = config
        .build_space()
        .map_err(|e| CliError::new(EXIT_CONFIG, e.to_string()))?;
    let mode = BudgetMode::from(cli.budget_mode);

    match cli.command {
        Command::GenMap => {
            if config.scene.is_none() {
                return Err(CliError::new(
                    EXIT_CONFIG,
                    "gen-map needs a `scene` key in the config",
                ));
            }
            let out_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            let name = match &config.scene {
                Some(SceneSource::File(path)) => path
                    .file_name()
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from("map.bin")),
                _ => PathBuf::from("map.bin"),
            };
            let out = out_dir.join(name);
            save_map_file(&map, &out)
                .map_err(|e| CliError::new(1, format!("cannot write {}: {e}", out.display())))?;
            println!(
                "map: {} occupied voxels at {} m resolution -> {}",
                map.occupied_count(),
                map.resolution(),
                out.display()
            );
            Ok(())
        }
        Command::Gt => {
            let budgets = mode.screen_budgets(&config);
            println!(
                "{:<4} {:>30} {:>30} {:>10}",
                "id", "start (x,y,yaw)", "goal (x,y,yaw)", "gt length"
            );
            for id in 0..config.epochs {
                let mut rng =
                    rng_from_seed(derive_seed(config.master_seed, "problem", &[id as u64]));
                let problem = generate_problem(&config, &map, &space, budgets, id, &mut rng)
                    .map_err(|e| {
                        CliError::new(EXIT_GENERATION, format!("problem {id}: {e}"))
                    })?;
                let fmt_state = |s: &sbo_core::statespace::State| {
                    let p = s.position();
                    match s.as_planar() {
                        Some(pose) => format!("({:.2}, {:.2}, {:.2})", pose.x, pose.y, pose.yaw),
                        None => format!("({:.2}, {:.2}, {:.2})", p.x, p.y, p.z),
                    }
                };
                println!(
                    "{:<4} {:>30} {:>30} {:>9.2}m",
                    problem.id,
                    fmt_state(&problem.start),
                    fmt_state(&problem.goal),
                    problem.ground_truth_length
                );
            }
            Ok(())
        }
        Command::Bench => {
            let out = results_path(cli, &config);
            if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| {
                    CliError::new(1, format!("cannot create {}: {e}", parent.display()))
                })?;
            }
            let (campaign, summary) = run_benchmark(&config, &map, &space, mode, &out)
                .map_err(|e| match e {
                    CampaignError::Generation { .. } => {
                        CliError::new(EXIT_GENERATION, e.to_string())
                    }
                    other => CliError::new(1, other.to_string()),
                })?;
            println!(
                "{} rows -> {}\n{summary}",
                campaign.records.len(),
                out.display()
            );
            if let Some(reason) = &campaign.aborted {
                return Err(CliError::new(1, format!("campaign aborted: {reason}")));
            }
            Ok(())
        }
        Command::Plot => {
            let results = results_path(cli, &config);
            let text = fs::read_to_string(&results).map_err(|e| {
                CliError::new(1, format!("cannot read results {}: {e}", results.display()))
            })?;
            let records =
                parse_csv(&text).map_err(|e| CliError::new(1, format!("bad results file: {e}")))?;
            let out_dir = cli
                .out
                .clone()
                .or_else(|| results.parent().map(StdPath::to_path_buf))
                .unwrap_or_else(|| PathBuf::from("."));
            let stem = results
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("results")
                .to_string();
            let figures = emit_plots(&records, &out_dir, &stem)
                .map_err(|e| CliError::new(1, e.to_string()))?;
            for figure in figures {
                println!("{}", figure.display());
            }
            Ok(())
        }
    }
}
