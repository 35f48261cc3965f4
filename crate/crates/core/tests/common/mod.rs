//! Problem fixtures shared by the planner integration tests.
#![allow(dead_code)]

use sbo_core::collision::RobotBody;
use sbo_core::geom::Vec3;
use sbo_core::planners::{Budget, PlanError, PlannerParams, PlannerResult, Problem};
use sbo_core::rng::ChaCha8Rng;
use sbo_core::statespace::{Bounds, State, StateSpace};
use sbo_core::worldmap::{
    build_octree, generate_scene, Corridor, Ground, Obstacle, OccupancyOctree, SceneSpec,
};
use std::f64::consts::PI;

/// The signature every planner entry point shares.
pub type PlanFn =
    fn(&Problem, Budget, &PlannerParams, &mut ChaCha8Rng) -> Result<PlannerResult, PlanError>;

pub const RES: f64 = 0.2;

pub fn planar_bounds(max_x: f64, max_y: f64) -> Bounds {
    Bounds::new(0.0, max_x, 0.0, max_y, 0.0, 3.0, -PI, PI).expect("valid bounds")
}

pub fn empty_map() -> OccupancyOctree {
    build_octree(Vec::<[u32; 3]>::new(), RES, Vec3::zeros())
}

/// Obstacle-free SE2 problem with start and goal 85 m apart.
pub fn long_empty_problem() -> Problem {
    Problem::new(
        StateSpace::se2(planar_bounds(90.0, 10.0)),
        empty_map(),
        RobotBody::default(),
        State::planar(2.0, 5.0, 0.0),
        State::planar(87.0, 5.0, 0.0),
    )
    .expect("valid endpoints")
}

/// Obstacle-free SE2 problem at benchmark scale (about 17 m apart).
pub fn short_empty_problem() -> Problem {
    Problem::new(
        StateSpace::se2(planar_bounds(20.0, 12.0)),
        empty_map(),
        RobotBody::default(),
        State::planar(1.5, 6.0, 0.0),
        State::planar(18.5, 6.0, 0.0),
    )
    .expect("valid endpoints")
}

/// A 20 x 12 m yard of boxes and cylinders with a guaranteed corridor
/// from the low-x to the high-x edge. Obstacle jitter varies with the
/// seed; the start and goal strips stay clear.
pub fn cluttered_map(seed: u64) -> OccupancyOctree {
    let spec = SceneSpec {
        ground: Ground::Flat,
        obstacles: vec![
            Obstacle::Box {
                center: Vec3::new(5.0, 3.0, 1.0),
                extents: Vec3::new(1.6, 2.4, 2.0),
            },
            Obstacle::Box {
                center: Vec3::new(9.0, 8.5, 1.0),
                extents: Vec3::new(2.0, 1.6, 2.0),
            },
            Obstacle::Box {
                center: Vec3::new(13.5, 4.5, 1.0),
                extents: Vec3::new(1.6, 1.6, 2.0),
            },
            Obstacle::Cylinder {
                center: Vec3::new(7.2, 6.0, 1.0),
                radius: 0.7,
                height: 2.0,
            },
            Obstacle::Cylinder {
                center: Vec3::new(11.0, 2.5, 1.0),
                radius: 0.6,
                height: 2.0,
            },
            Obstacle::Cylinder {
                center: Vec3::new(16.0, 8.5, 1.0),
                radius: 0.8,
                height: 2.0,
            },
        ],
        extent: planar_bounds(20.0, 12.0),
        resolution: RES,
        seed,
        corridor: Some(Corridor {
            width: 2.2,
            z_min: 0.4,
            z_max: 1.0,
        }),
    };
    generate_scene(&spec).expect("jittered layout always leaves a corridor")
}

pub fn cluttered_problem(seed: u64) -> Problem {
    Problem::new(
        StateSpace::se2(planar_bounds(20.0, 12.0)),
        cluttered_map(seed),
        RobotBody::default(),
        State::planar(1.0, 6.0, 0.0),
        State::planar(19.0, 6.0, 0.0),
    )
    .expect("valid endpoints")
}

pub fn cluttered_dubins_problem(seed: u64, turning_radius: f64) -> Problem {
    Problem::new(
        StateSpace::dubins(planar_bounds(20.0, 12.0), turning_radius).expect("valid radius"),
        cluttered_map(seed),
        RobotBody::default(),
        State::planar(1.0, 6.0, 0.0),
        State::planar(19.0, 6.0, 0.0),
    )
    .expect("valid endpoints")
}

/// Goal enclosed in a hollow box with full-height walls: reachable by
/// no path, though the goal state itself is collision-free.
pub fn sealed_goal_problem() -> Problem {
    let mut voxels = Vec::new();
    // Walls two voxels thick around the cell block [44, 56] x [21, 30],
    // rising through the whole z extent.
    for ix in 42u32..=58 {
        for iy in 19u32..=32 {
            let in_x_wall = !(44..=56).contains(&ix);
            let in_y_wall = !(21..=30).contains(&iy);
            if in_x_wall || in_y_wall {
                for iz in 0..15 {
                    voxels.push([ix, iy, iz]);
                }
            }
        }
    }
    let map = build_octree(voxels, RES, Vec3::zeros());
    Problem::new(
        StateSpace::se2(planar_bounds(20.0, 10.0)),
        map,
        RobotBody::default(),
        State::planar(2.0, 5.0, 0.0),
        State::planar(10.0, 5.0, 0.0),
    )
    .expect("goal is collision-free inside the box")
}

pub fn median(values: &mut Vec<f64>) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(|a, b| a.total_cmp(b));
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}
