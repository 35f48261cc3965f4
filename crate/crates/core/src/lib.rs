//! Sampling-based optimal motion planning over occupancy octree worlds.
//!
//! The crate is organized bottom-up:
//!
//! - [`geom`]: boxes, oriented boxes, and their overlap tests;
//! - [`rng`]: deterministic seed derivation for reproducible runs;
//! - [`statespace`]: SE(2)/SE(3)/Dubins/Reeds-Shepp states, metrics,
//!   sampling, and interpolation;
//! - [`worldmap`]: binary occupancy octrees, their serialized form, and
//!   procedural scene generation;
//! - [`collision`]: state and motion validity of a box-shaped body;
//! - [`planners`]: the optimizing planners and path post-processing;
//! - [`metrics`]: path length, smoothness, and run classification.

pub mod collision;
pub mod geom;
pub mod metrics;
pub mod planners;
pub mod rng;
pub mod statespace;
pub mod worldmap;
