//! Occupancy world model: a sparse binary octree over a voxel lattice,
//! a bit-exact binary map file format, and a seeded procedural scene
//! generator for outdoor-style benchmark worlds.
//!
//! Trees are immutable after construction, so any number of planner
//! workers may query one map concurrently.

mod io;
mod octree;
mod scene;

pub use io::{load_map, load_map_file, save_map, save_map_file, MapError};
pub use octree::{build_octree, query_overlapping_voxels, OccupancyOctree};
pub use scene::{generate_scene, Corridor, Ground, Obstacle, SceneError, SceneSpec};
