//! Configuration schema: stock-format keys, defaults, aliases, and
//! rejection paths.

use sbo_bench::config::{parse_config, ConfigError, PlannerKind, SceneSource, SpaceSelection};

// The full stock configuration document, every key populated.
const FULL_CONFIG: &str = r#"
planner_timeout: 1.0
interpolation_parameter: 120
octomap_topic: "octomap"
octomap_voxel_size: 0.2
selected_state_space: "SE2"
selected_planners: ["RRT*","PRMstar","LazyPRM*","InformedRRT*","FMT*","CFOREST","APS"]
min_turning_radius: 1.5
state_space_boundries:
  minx: -100.0
  maxx: 100.0
  miny: -50.0
  maxy: 50.0
  minz: 0.0
  maxz: 2.0
  minyaw: -3.14
  maxyaw: 3.14
robot_body_dimens:
  x: 1.5
  y: 1.5
  z: 0.5
goal_tolerance: 0.2
min_euclidean_dist_start_to_goal: 65.0
epochs: 20
batch_size: 5
max_memory: 4096
results_output_file: "/path_to/result.log"
visualize_a_sample_benchmark: true
sample_benchmark_plans_topic: "benchmark_plan"
"#;

#[test]
fn full_document_resolves_to_its_stated_values() {
    let config = parse_config(FULL_CONFIG).expect("the stock document parses");
    assert_eq!(config.planner_timeout, 1.0);
    assert_eq!(config.interpolation_parameter, 120);
    assert_eq!(config.octomap_voxel_size, 0.2);
    assert_eq!(config.state_space, SpaceSelection::Se2);
    assert_eq!(
        config.planners,
        vec![
            PlannerKind::RrtStar,
            PlannerKind::PrmStar,
            PlannerKind::LazyPrmStar,
            PlannerKind::InformedRrtStar,
            PlannerKind::FmtStar,
            PlannerKind::CForest,
            PlannerKind::Aps,
        ]
    );
    assert_eq!(config.min_turning_radius, 1.5);
    assert_eq!(config.bounds.min_x, -100.0);
    assert_eq!(config.bounds.max_x, 100.0);
    assert_eq!(config.bounds.min_y, -50.0);
    assert_eq!(config.bounds.max_y, 50.0);
    assert_eq!(config.bounds.min_z, 0.0);
    assert_eq!(config.bounds.max_z, 2.0);
    assert_eq!(config.bounds.min_yaw, -3.14);
    assert_eq!(config.bounds.max_yaw, 3.14);
    assert_eq!(config.body.extents(), sbo_core::geom::Vec3::new(1.5, 1.5, 0.5));
    assert_eq!(config.goal_tolerance, 0.2);
    assert_eq!(config.min_start_goal_dist, 65.0);
    assert_eq!(config.epochs, 20);
    assert_eq!(config.batch_size, 5);
    assert_eq!(config.max_memory_mb, 4096);
    assert_eq!(
        config.results_output_file.to_str(),
        Some("/path_to/result.log")
    );
    // The ROS-plumbing keys parse but do nothing except warn.
    assert_eq!(config.warnings.len(), 3);
    assert!(config.warnings.iter().any(|w| w.contains("octomap_topic")));
    assert!(config
        .warnings
        .iter()
        .any(|w| w.contains("visualize_a_sample_benchmark")));
    assert!(config
        .warnings
        .iter()
        .any(|w| w.contains("sample_benchmark_plans_topic")));
}

#[test]
fn empty_document_yields_all_defaults() {
    for text in ["", "---\n", "# just a comment\n"] {
        let config = parse_config(text).expect("empty documents are valid");
        assert_eq!(config.planner_timeout, 1.0);
        assert_eq!(config.interpolation_parameter, 120);
        assert_eq!(config.octomap_voxel_size, 0.2);
        assert_eq!(config.state_space, SpaceSelection::Se2);
        assert_eq!(config.planners, PlannerKind::ALL.to_vec());
        assert_eq!(config.min_turning_radius, 1.5);
        assert_eq!(config.bounds.min_x, -100.0);
        assert_eq!(config.bounds.max_yaw, 3.14);
        assert_eq!(config.body.extents(), sbo_core::geom::Vec3::new(1.5, 1.5, 0.5));
        assert_eq!(config.goal_tolerance, 0.2);
        assert_eq!(config.min_start_goal_dist, 65.0);
        assert_eq!(config.epochs, 20);
        assert_eq!(config.batch_size, 5);
        assert_eq!(config.max_memory_mb, 4096);
        assert_eq!(config.master_seed, 0);
        assert_eq!(config.precheck_timeout, 10.0);
        assert_eq!(config.ground_truth_timeout, 30.0);
        assert!(config.scene.is_none());
        assert!(config.warnings.is_empty());
    }
}

#[test]
fn zero_epochs_is_a_constraint_error_naming_the_key() {
    let error = parse_config("epochs: 0").unwrap_err();
    match &error {
        ConfigError::Constraint { key, .. } => assert_eq!(key, "epochs"),
        other => panic!("expected a constraint error, got {other:?}"),
    }
    assert!(error.to_string().contains("epochs"));
}

#[test]
fn zero_batch_size_is_rejected() {
    let error = parse_config("batch_size: 0").unwrap_err();
    assert!(error.to_string().contains("batch_size"));
}

#[test]
fn unknown_keys_are_rejected_with_their_name() {
    let error = parse_config("planner_timeot: 1.0").unwrap_err();
    let message = error.to_string();
    assert!(
        message.contains("planner_timeot"),
        "message should name the bad key: {message}"
    );

    // Nested unknown keys carry their path.
    let error = parse_config("state_space_boundries:\n  minx: 0.0\n  mins: 3.0\n").unwrap_err();
    let message = error.to_string();
    assert!(message.contains("mins"), "bad nested key named: {message}");
    assert!(
        message.contains("state_space_boundries"),
        "path includes the parent key: {message}"
    );
}

#[test]
fn type_mismatches_carry_the_key_path() {
    let error = parse_config("epochs: twenty").unwrap_err();
    let message = error.to_string();
    assert!(message.contains("epochs"), "path in message: {message}");

    let error = parse_config("robot_body_dimens:\n  x: wide\n  y: 1.0\n  z: 1.0\n").unwrap_err();
    let message = error.to_string();
    assert!(
        message.contains("robot_body_dimens"),
        "path in message: {message}"
    );
}

#[test]
fn syntax_errors_are_reported_as_such() {
    let error = parse_config("epochs: [unclosed").unwrap_err();
    assert!(matches!(error, ConfigError::Syntax(_)));
}

#[test]
fn planner_name_aliases_resolve_to_the_same_planner() {
    let aliased = [
        ("RRT*", "RRTstar", PlannerKind::RrtStar),
        ("PRM*", "PRMstar", PlannerKind::PrmStar),
        ("LazyPRM*", "LazyPRMstar", PlannerKind::LazyPrmStar),
        ("InformedRRT*", "InformedRRTstar", PlannerKind::InformedRrtStar),
        ("FMT*", "FMTstar", PlannerKind::FmtStar),
        ("CFOREST", "CForest", PlannerKind::CForest),
        ("APS", "AnytimePartShortening(APS)", PlannerKind::Aps),
    ];
    for (starred, ascii, expected) in aliased {
        for name in [starred, ascii] {
            let text = format!("selected_planners: [\"{name}\"]");
            let config = parse_config(&text).expect("known alias");
            assert_eq!(config.planners, vec![expected], "alias {name}");
        }
        assert_eq!(expected.canonical_name(), starred);
    }
}

#[test]
fn unknown_planners_and_spaces_are_constraint_errors() {
    let error = parse_config("selected_planners: [\"BIT*\"]").unwrap_err();
    let message = error.to_string();
    assert!(message.contains("BIT*"), "names the offender: {message}");
    assert!(
        message.contains("selected_planners"),
        "names the key: {message}"
    );

    let error = parse_config("selected_state_space: \"SE2.5\"").unwrap_err();
    assert!(error.to_string().contains("selected_state_space"));

    let error = parse_config("selected_planners: []").unwrap_err();
    assert!(error.to_string().contains("selected_planners"));
}

#[test]
fn impossible_minimum_distance_is_rejected() {
    // Diagonal of the default bounds is ~223.6 m; ask for more.
    let error = parse_config("min_euclidean_dist_start_to_goal: 250.0").unwrap_err();
    assert!(error
        .to_string()
        .contains("min_euclidean_dist_start_to_goal"));
}

#[test]
fn inverted_bounds_are_rejected() {
    let error = parse_config("state_space_boundries:\n  minx: 5.0\n  maxx: -5.0\n").unwrap_err();
    assert!(error.to_string().contains("state_space_boundries"));
}

#[test]
fn partial_bounds_merge_with_defaults() {
    let config = parse_config("state_space_boundries:\n  maxx: 30.0\n").unwrap();
    assert_eq!(config.bounds.max_x, 30.0);
    assert_eq!(config.bounds.min_x, -100.0);
    assert_eq!(config.bounds.max_y, 50.0);
}

#[test]
fn scene_accepts_a_file_path_or_an_inline_spec() {
    let config = parse_config("scene: \"maps/yard.map\"").unwrap();
    match &config.scene {
        Some(SceneSource::File(path)) => assert_eq!(path.to_str(), Some("maps/yard.map")),
        other => panic!("expected a file source, got {other:?}"),
    }

    let text = r#"
scene:
  seed: 11
  ground: flat
  obstacles:
    - box: {center: [5.0, 3.0, 1.0], extents: [1.6, 2.4, 2.0]}
    - cylinder: {center: [7.2, 6.0, 1.0], radius: 0.7, height: 2.0}
  corridor: {width: 2.2, z_min: 0.4, z_max: 1.0}
"#;
    let config = parse_config(text).unwrap();
    match &config.scene {
        Some(SceneSource::Generated {
            seed,
            obstacles,
            corridor,
            ..
        }) => {
            assert_eq!(*seed, Some(11));
            assert_eq!(obstacles.len(), 2);
            assert!(corridor.is_some());
        }
        other => panic!("expected a generated source, got {other:?}"),
    }
}

#[test]
fn curve_spaces_build_with_the_configured_radius() {
    let config = parse_config("selected_state_space: \"DUBINS\"").unwrap();
    let space = config.build_space().expect("dubins space builds");
    assert_eq!(space.turning_radius(), Some(1.5));

    let config = parse_config("selected_state_space: \"REEDS\"\nmin_turning_radius: 2.0").unwrap();
    let space = config.build_space().expect("reeds-shepp space builds");
    assert_eq!(space.turning_radius(), Some(2.0));

    let error = parse_config("min_turning_radius: -1.0").unwrap_err();
    assert!(error.to_string().contains("min_turning_radius"));
}

#[test]
fn extension_keys_resolve() {
    let text = "master_seed: 99\nprecheck_timeout: 3.5\nground_truth_timeout: 120.0\n";
    let config = parse_config(text).unwrap();
    assert_eq!(config.master_seed, 99);
    assert_eq!(config.precheck_timeout, 3.5);
    assert_eq!(config.ground_truth_timeout, 120.0);
}
