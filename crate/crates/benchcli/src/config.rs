//! Benchmark configuration: a YAML schema mirroring the fields the
//! on-robot benchmark node consumes, resolved into typed values.
//!
//! Every key is optional and falls back to the stock default, so an
//! empty document is a valid configuration. Unknown keys are rejected
//! rather than ignored: a typo in a tuning key silently reverting to a
//! default would invalidate a whole campaign.

use std::fmt;
use std::path::{Path as StdPath, PathBuf};

use sbo_core::collision::RobotBody;
use sbo_core::geom::Vec3;
use sbo_core::rng::derive_seed;
use sbo_core::statespace::{Bounds, StateSpace};
use sbo_core::worldmap::{
    generate_scene, load_map_file, Corridor, Ground, MapError, Obstacle, OccupancyOctree,
    SceneError, SceneSpec,
};
use serde::Deserialize;
use thiserror::Error;

/// The seven planners the harness can run, named as in the results
/// table. Selection strings accept both the starred display names and
/// the plain-ASCII spellings used in configuration files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlannerKind {
    RrtStar,
    InformedRrtStar,
    PrmStar,
    LazyPrmStar,
    FmtStar,
    CForest,
    Aps,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 7] = [
        PlannerKind::PrmStar,
        PlannerKind::LazyPrmStar,
        PlannerKind::RrtStar,
        PlannerKind::InformedRrtStar,
        PlannerKind::FmtStar,
        PlannerKind::CForest,
        PlannerKind::Aps,
    ];

    /// Display name, used in CSV rows, summaries, and plot labels.
    pub fn canonical_name(self) -> &'static str {
        match self {
            PlannerKind::RrtStar => "RRT*",
            PlannerKind::InformedRrtStar => "InformedRRT*",
            PlannerKind::PrmStar => "PRM*",
            PlannerKind::LazyPrmStar => "LazyPRM*",
            PlannerKind::FmtStar => "FMT*",
            PlannerKind::CForest => "CFOREST",
            PlannerKind::Aps => "APS",
        }
    }

    pub fn from_name(name: &str) -> Option<PlannerKind> {
        match name {
            "RRT*" | "RRTstar" => Some(PlannerKind::RrtStar),
            "InformedRRT*" | "InformedRRTstar" => Some(PlannerKind::InformedRrtStar),
            "PRM*" | "PRMstar" => Some(PlannerKind::PrmStar),
            "LazyPRM*" | "LazyPRMstar" => Some(PlannerKind::LazyPrmStar),
            "FMT*" | "FMTstar" => Some(PlannerKind::FmtStar),
            "CFOREST" | "CForest" => Some(PlannerKind::CForest),
            "APS" | "AnytimePartShortening" | "AnytimePartShortening(APS)" => {
                Some(PlannerKind::Aps)
            }
            _ => None,
        }
    }
}

impl fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.canonical_name())
    }
}

/// State space selector, matching the strings the config format uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceSelection {
    Se2,
    Dubins,
    ReedsShepp,
    Se3,
}

impl SpaceSelection {
    pub fn from_name(name: &str) -> Option<SpaceSelection> {
        match name {
            "SE2" => Some(SpaceSelection::Se2),
            "DUBINS" => Some(SpaceSelection::Dubins),
            "REEDS" => Some(SpaceSelection::ReedsShepp),
            "SE3" => Some(SpaceSelection::Se3),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpaceSelection::Se2 => "SE2",
            SpaceSelection::Dubins => "DUBINS",
            SpaceSelection::ReedsShepp => "REEDS",
            SpaceSelection::Se3 => "SE3",
        }
    }
}

/// Where the occupancy map comes from: a serialized map file or an
/// inline procedural scene. Absent entirely means an empty map — the
/// open-field setting the stock configuration describes.
#[derive(Clone, Debug)]
pub enum SceneSource {
    File(PathBuf),
    Generated {
        seed: Option<u64>,
        ground: Ground,
        obstacles: Vec<Obstacle>,
        corridor: Option<Corridor>,
    },
}

/// Fully resolved benchmark configuration.
#[derive(Clone, Debug)]
pub struct BenchmarkConfig {
    pub planner_timeout: f64,
    pub interpolation_parameter: usize,
    pub octomap_voxel_size: f64,
    pub state_space: SpaceSelection,
    pub planners: Vec<PlannerKind>,
    pub min_turning_radius: f64,
    pub bounds: Bounds,
    pub body: RobotBody,
    pub goal_tolerance: f64,
    pub min_start_goal_dist: f64,
    pub epochs: u32,
    pub batch_size: u32,
    pub max_memory_mb: u64,
    pub results_output_file: PathBuf,
    pub scene: Option<SceneSource>,
    pub master_seed: u64,
    pub precheck_timeout: f64,
    pub ground_truth_timeout: f64,
    /// Notes about accepted-but-ignored keys, for the caller to log.
    pub warnings: Vec<String>,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config syntax error: {0}")]
    Syntax(String),
    #[error("config error at `{path}`: {message}")]
    Invalid { path: String, message: String },
    #[error("config constraint violated at `{key}`: {message}")]
    Constraint { key: String, message: String },
}

#[derive(Debug, Error)]
pub enum MapBuildError {
    #[error("failed to load map file {path}: {source}")]
    Load { path: PathBuf, source: MapError },
    #[error("failed to open map file {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("scene generation failed: {0}")]
    Scene(#[from] SceneError),
}

// Raw mirror of the YAML document. Everything is optional; resolution
// applies defaults and checks constraints.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    planner_timeout: Option<f64>,
    interpolation_parameter: Option<usize>,
    octomap_topic: Option<String>,
    octomap_voxel_size: Option<f64>,
    selected_state_space: Option<String>,
    selected_planners: Option<Vec<String>>,
    min_turning_radius: Option<f64>,
    state_space_boundries: Option<RawBounds>,
    robot_body_dimens: Option<RawBody>,
    goal_tolerance: Option<f64>,
    min_euclidean_dist_start_to_goal: Option<f64>,
    epochs: Option<u32>,
    batch_size: Option<u32>,
    max_memory: Option<u64>,
    results_output_file: Option<String>,
    visualize_a_sample_benchmark: Option<bool>,
    sample_benchmark_plans_topic: Option<String>,
    scene: Option<RawScene>,
    master_seed: Option<u64>,
    precheck_timeout: Option<f64>,
    ground_truth_timeout: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBounds {
    minx: Option<f64>,
    maxx: Option<f64>,
    miny: Option<f64>,
    maxy: Option<f64>,
    minz: Option<f64>,
    maxz: Option<f64>,
    minyaw: Option<f64>,
    maxyaw: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBody {
    x: f64,
    y: f64,
    z: f64,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawScene {
    File(String),
    Spec(RawSceneSpec),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSceneSpec {
    seed: Option<u64>,
    ground: Option<RawGround>,
    obstacles: Option<Vec<RawObstacle>>,
    corridor: Option<RawCorridor>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawGround {
    Flat,
    HeightField { amplitude: f64, wavelength: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawObstacle {
    Box {
        center: [f64; 3],
        extents: [f64; 3],
    },
    Cylinder {
        center: [f64; 3],
        radius: f64,
        height: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCorridor {
    width: f64,
    z_min: f64,
    z_max: f64,
}

mod defaults {
    pub const PLANNER_TIMEOUT: f64 = 1.0;
    pub const INTERPOLATION_PARAMETER: usize = 120;
    pub const OCTOMAP_VOXEL_SIZE: f64 = 0.2;
    pub const MIN_TURNING_RADIUS: f64 = 1.5;
    pub const BOUNDS: [f64; 8] = [-100.0, 100.0, -50.0, 50.0, 0.0, 2.0, -3.14, 3.14];
    pub const BODY: [f64; 3] = [1.5, 1.5, 0.5];
    pub const GOAL_TOLERANCE: f64 = 0.2;
    pub const MIN_START_GOAL_DIST: f64 = 65.0;
    pub const EPOCHS: u32 = 20;
    pub const BATCH_SIZE: u32 = 5;
    pub const MAX_MEMORY_MB: u64 = 4096;
    pub const RESULTS_OUTPUT_FILE: &str = "result.log";
    pub const MASTER_SEED: u64 = 0;
    pub const PRECHECK_TIMEOUT: f64 = 10.0;
    pub const GROUND_TRUTH_TIMEOUT: f64 = 30.0;
}

/// Parses a YAML configuration document. An empty document yields the
/// default configuration.
pub fn parse_config(text: &str) -> Result<BenchmarkConfig, ConfigError> {
    let value: serde_yaml::Value =
        serde_yaml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    let raw = if value.is_null() {
        RawConfig::default()
    } else {
        serde_path_to_error::deserialize(value).map_err(|e| ConfigError::Invalid {
            path: e.path().to_string(),
            message: e.into_inner().to_string(),
        })?
    };
    resolve(raw)
}

fn constraint(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Constraint {
        key: key.to_string(),
        message: message.into(),
    }
}

fn require_positive(key: &str, value: f64) -> Result<f64, ConfigError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(constraint(key, format!("must be positive, got {value}")))
    }
}

fn resolve(raw: RawConfig) -> Result<BenchmarkConfig, ConfigError> {
    let mut warnings = Vec::new();
    if let Some(topic) = &raw.octomap_topic {
        warnings.push(format!(
            "octomap_topic: \"{topic}\" ignored; maps come from the scene key or a map file"
        ));
    }
    if raw.visualize_a_sample_benchmark.is_some() {
        warnings.push("visualize_a_sample_benchmark: ignored; no live visualization".to_string());
    }
    if let Some(topic) = &raw.sample_benchmark_plans_topic {
        warnings.push(format!(
            "sample_benchmark_plans_topic: \"{topic}\" ignored; no live visualization"
        ));
    }

    let planner_timeout = require_positive(
        "planner_timeout",
        raw.planner_timeout.unwrap_or(defaults::PLANNER_TIMEOUT),
    )?;
    let interpolation_parameter = raw
        .interpolation_parameter
        .unwrap_or(defaults::INTERPOLATION_PARAMETER);
    if interpolation_parameter < 2 {
        return Err(constraint(
            "interpolation_parameter",
            format!("needs at least 2 states, got {interpolation_parameter}"),
        ));
    }
    let octomap_voxel_size = require_positive(
        "octomap_voxel_size",
        raw.octomap_voxel_size
            .unwrap_or(defaults::OCTOMAP_VOXEL_SIZE),
    )?;

    let state_space = match raw.selected_state_space.as_deref() {
        None => SpaceSelection::Se2,
        Some(name) => SpaceSelection::from_name(name).ok_or_else(|| {
            constraint(
                "selected_state_space",
                format!("unknown state space \"{name}\"; options are SE2, DUBINS, REEDS, SE3"),
            )
        })?,
    };

    let planners = match raw.selected_planners {
        None => PlannerKind::ALL.to_vec(),
        Some(names) => {
            if names.is_empty() {
                return Err(constraint("selected_planners", "must not be empty"));
            }
            names
                .iter()
                .map(|name| {
                    PlannerKind::from_name(name).ok_or_else(|| {
                        constraint(
                            "selected_planners",
                            format!(
                                "unknown planner \"{name}\"; known: {}",
                                PlannerKind::ALL.map(|p| p.canonical_name()).join(", ")
                            ),
                        )
                    })
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };

    let min_turning_radius = require_positive(
        "min_turning_radius",
        raw.min_turning_radius
            .unwrap_or(defaults::MIN_TURNING_RADIUS),
    )?;

    let [dminx, dmaxx, dminy, dmaxy, dminz, dmaxz, dminyaw, dmaxyaw] = defaults::BOUNDS;
    let b = raw.state_space_boundries;
    let (minx, maxx, miny, maxy, minz, maxz, minyaw, maxyaw) = match b {
        None => (dminx, dmaxx, dminy, dmaxy, dminz, dmaxz, dminyaw, dmaxyaw),
        Some(rb) => (
            rb.minx.unwrap_or(dminx),
            rb.maxx.unwrap_or(dmaxx),
            rb.miny.unwrap_or(dminy),
            rb.maxy.unwrap_or(dmaxy),
            rb.minz.unwrap_or(dminz),
            rb.maxz.unwrap_or(dmaxz),
            rb.minyaw.unwrap_or(dminyaw),
            rb.maxyaw.unwrap_or(dmaxyaw),
        ),
    };
    let bounds = Bounds::new(minx, maxx, miny, maxy, minz, maxz, minyaw, maxyaw)
        .map_err(|e| constraint("state_space_boundries", e.to_string()))?;

    let [bx, by, bz] = match raw.robot_body_dimens {
        None => defaults::BODY,
        Some(body) => [body.x, body.y, body.z],
    };
    for (axis, v) in [("x", bx), ("y", by), ("z", bz)] {
        if !(v > 0.0) {
            return Err(constraint(
                &format!("robot_body_dimens.{axis}"),
                format!("must be positive, got {v}"),
            ));
        }
    }
    let body = RobotBody::new(bx, by, bz);

    let goal_tolerance = require_positive(
        "goal_tolerance",
        raw.goal_tolerance.unwrap_or(defaults::GOAL_TOLERANCE),
    )?;

    let min_start_goal_dist = raw
        .min_euclidean_dist_start_to_goal
        .unwrap_or(defaults::MIN_START_GOAL_DIST);
    if !(min_start_goal_dist >= 0.0) {
        return Err(constraint(
            "min_euclidean_dist_start_to_goal",
            format!("must be non-negative, got {min_start_goal_dist}"),
        ));
    }
    let diagonal = (bounds.x_extent().powi(2)
        + bounds.y_extent().powi(2)
        + bounds.z_extent().powi(2))
    .sqrt();
    if min_start_goal_dist >= diagonal {
        return Err(constraint(
            "min_euclidean_dist_start_to_goal",
            format!("{min_start_goal_dist} m can never be met inside bounds with diagonal {diagonal:.1} m"),
        ));
    }

    let epochs = raw.epochs.unwrap_or(defaults::EPOCHS);
    if epochs < 1 {
        return Err(constraint("epochs", "must be at least 1"));
    }
    let batch_size = raw.batch_size.unwrap_or(defaults::BATCH_SIZE);
    if batch_size < 1 {
        return Err(constraint("batch_size", "must be at least 1"));
    }
    let max_memory_mb = raw.max_memory.unwrap_or(defaults::MAX_MEMORY_MB);
    if max_memory_mb < 1 {
        return Err(constraint("max_memory", "must be at least 1 MB"));
    }

    let results_output_file = PathBuf::from(
        raw.results_output_file
            .unwrap_or_else(|| defaults::RESULTS_OUTPUT_FILE.to_string()),
    );

    let scene = match raw.scene {
        None => None,
        Some(RawScene::File(path)) => Some(SceneSource::File(PathBuf::from(path))),
        Some(RawScene::Spec(spec)) => {
            let ground = match spec.ground {
                None | Some(RawGround::Flat) => Ground::Flat,
                Some(RawGround::HeightField {
                    amplitude,
                    wavelength,
                }) => Ground::HeightField {
                    amplitude,
                    wavelength,
                },
            };
            let obstacles = spec
                .obstacles
                .unwrap_or_default()
                .into_iter()
                .map(|o| match o {
                    RawObstacle::Box { center, extents } => Obstacle::Box {
                        center: Vec3::new(center[0], center[1], center[2]),
                        extents: Vec3::new(extents[0], extents[1], extents[2]),
                    },
                    RawObstacle::Cylinder {
                        center,
                        radius,
                        height,
                    } => Obstacle::Cylinder {
                        center: Vec3::new(center[0], center[1], center[2]),
                        radius,
                        height,
                    },
                })
                .collect();
            let corridor = spec.corridor.map(|c| Corridor {
                width: c.width,
                z_min: c.z_min,
                z_max: c.z_max,
            });
            Some(SceneSource::Generated {
                seed: spec.seed,
                ground,
                obstacles,
                corridor,
            })
        }
    };

    let precheck_timeout = require_positive(
        "precheck_timeout",
        raw.precheck_timeout.unwrap_or(defaults::PRECHECK_TIMEOUT),
    )?;
    let ground_truth_timeout = require_positive(
        "ground_truth_timeout",
        raw.ground_truth_timeout
            .unwrap_or(defaults::GROUND_TRUTH_TIMEOUT),
    )?;

    Ok(BenchmarkConfig {
        planner_timeout,
        interpolation_parameter,
        octomap_voxel_size,
        state_space,
        planners,
        min_turning_radius,
        bounds,
        body,
        goal_tolerance,
        min_start_goal_dist,
        epochs,
        batch_size,
        max_memory_mb,
        results_output_file,
        scene,
        master_seed: raw.master_seed.unwrap_or(defaults::MASTER_SEED),
        precheck_timeout,
        ground_truth_timeout,
        warnings,
    })
}

impl BenchmarkConfig {
    /// Instantiates the configured state space.
    pub fn build_space(&self) -> Result<StateSpace, ConfigError> {
        let bounds = self.bounds;
        match self.state_space {
            SpaceSelection::Se2 => Ok(StateSpace::se2(bounds)),
            SpaceSelection::Se3 => Ok(StateSpace::se3(bounds)),
            SpaceSelection::Dubins => StateSpace::dubins(bounds, self.min_turning_radius)
                .map_err(|e| constraint("min_turning_radius", e.to_string())),
            SpaceSelection::ReedsShepp => StateSpace::reeds_shepp(bounds, self.min_turning_radius)
                .map_err(|e| constraint("min_turning_radius", e.to_string())),
        }
    }

    /// Builds the occupancy map: loads the file, generates the scene,
    /// or returns an empty map when no scene is configured. Relative
    /// map paths resolve against `base_dir`.
    pub fn build_map(&self, base_dir: &StdPath) -> Result<OccupancyOctree, MapBuildError> {
        match &self.scene {
            None => {
                let origin = Vec3::new(self.bounds.min_x, self.bounds.min_y, self.bounds.min_z);
                Ok(sbo_core::worldmap::build_octree(
                    Vec::new(),
                    self.octomap_voxel_size,
                    origin,
                ))
            }
            Some(SceneSource::File(path)) => {
                let full = if path.is_absolute() {
                    path.clone()
                } else {
                    base_dir.join(path)
                };
                load_map_file(&full).map_err(|source| MapBuildError::Load { path: full, source })
            }
            Some(SceneSource::Generated {
                seed,
                ground,
                obstacles,
                corridor,
            }) => {
                let spec = SceneSpec {
                    ground: *ground,
                    obstacles: obstacles.clone(),
                    extent: self.bounds,
                    resolution: self.octomap_voxel_size,
                    seed: seed.unwrap_or_else(|| derive_seed(self.master_seed, "scene", &[])),
                    corridor: *corridor,
                };
                Ok(generate_scene(&spec)?)
            }
        }
    }
}
