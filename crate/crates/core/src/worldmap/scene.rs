//! Seeded procedural outdoor scenes: a ground surface plus rasterized
//! box/cylinder obstacles, with a guaranteed traversable corridor.

use super::octree::{build_octree, OccupancyOctree};
use crate::geom::Vec3;
use crate::rng::{derive_seed, rng_from_seed};
use crate::statespace::Bounds;
use rand::Rng;
use std::collections::{HashSet, VecDeque};
use thiserror::Error;

/// Ground surface model. The height field is a smooth egg-crate bump
/// pattern with surface height in [0, amplitude]:
/// `h(x, y) = amplitude/2 * (1 + sin(2*pi*x/wavelength) * sin(2*pi*y/wavelength))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ground {
    Flat,
    HeightField { amplitude: f64, wavelength: f64 },
}

impl Ground {
    fn height(&self, x: f64, y: f64) -> f64 {
        match *self {
            Ground::Flat => 0.0,
            Ground::HeightField {
                amplitude,
                wavelength,
            } => {
                let w = std::f64::consts::TAU / wavelength;
                amplitude * 0.5 * (1.0 + (w * x).sin() * (w * y).sin())
            }
        }
    }
}

/// Solid obstacle primitives: axis-aligned boxes (houses, walls) and
/// vertical cylinders (posts, plants). Centers are world coordinates of
/// the solid's geometric center.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Obstacle {
    Box { center: Vec3, extents: Vec3 },
    Cylinder { center: Vec3, radius: f64, height: f64 },
}

/// Clearance requirement the generated scene must satisfy: a free
/// corridor of this width, within this height band, connecting the
/// extent's low-x edge to its high-x edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Corridor {
    pub width: f64,
    pub z_min: f64,
    pub z_max: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SceneSpec {
    pub ground: Ground,
    pub obstacles: Vec<Obstacle>,
    pub extent: Bounds,
    pub resolution: f64,
    pub seed: u64,
    /// `None` skips corridor verification.
    pub corridor: Option<Corridor>,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SceneError {
    #[error("invalid scene spec: {0}")]
    InvalidSpec(&'static str),
    #[error("no free corridor across the scene after {attempts} jittered placements")]
    NoCorridor { attempts: u32 },
}

/// Obstacle placements are re-jittered at most this many times while
/// hunting for a corridor-satisfying layout.
const MAX_PLACEMENT_ATTEMPTS: u32 = 32;
/// Uniform jitter half-range in meters applied per retry.
const JITTER_RANGE: f64 = 1.5;

/// Rasterizes the scene to an occupancy octree. Deterministic for a
/// fixed spec, including the seed that drives placement jitter.
pub fn generate_scene(spec: &SceneSpec) -> Result<OccupancyOctree, SceneError> {
    validate(spec)?;
    let lattice = Lattice::of(spec);

    let mut ground_voxels = HashSet::new();
    rasterize_ground(&spec.ground, &lattice, &mut ground_voxels);

    for attempt in 0..MAX_PLACEMENT_ATTEMPTS {
        let obstacles = placed_obstacles(spec, attempt);
        let mut voxels = ground_voxels.clone();
        for obstacle in &obstacles {
            rasterize_obstacle(obstacle, &lattice, &mut voxels);
        }
        let corridor_ok = match &spec.corridor {
            None => true,
            Some(c) => has_corridor(&voxels, &lattice, c),
        };
        if corridor_ok {
            return Ok(build_octree(voxels, spec.resolution, lattice.origin));
        }
    }
    Err(SceneError::NoCorridor {
        attempts: MAX_PLACEMENT_ATTEMPTS,
    })
}

fn validate(spec: &SceneSpec) -> Result<(), SceneError> {
    if !(spec.resolution > 0.0 && spec.resolution.is_finite()) {
        return Err(SceneError::InvalidSpec("resolution must be positive"));
    }
    if let Ground::HeightField {
        amplitude,
        wavelength,
    } = spec.ground
    {
        if amplitude < 0.0 || amplitude >= spec.extent.z_extent() {
            return Err(SceneError::InvalidSpec(
                "height field amplitude must fit inside the z extent",
            ));
        }
        if wavelength <= 0.0 {
            return Err(SceneError::InvalidSpec("wavelength must be positive"));
        }
    }
    for obstacle in &spec.obstacles {
        let ok = match obstacle {
            Obstacle::Box { extents, .. } => extents.iter().all(|&e| e > 0.0),
            Obstacle::Cylinder { radius, height, .. } => *radius > 0.0 && *height > 0.0,
        };
        if !ok {
            return Err(SceneError::InvalidSpec("obstacle dimensions must be positive"));
        }
    }
    if let Some(c) = &spec.corridor {
        if !(c.width > 0.0) || !(c.z_min < c.z_max) {
            return Err(SceneError::InvalidSpec("corridor band must be non-empty"));
        }
    }
    Ok(())
}

/// Voxel lattice derived from the extent: origin at the extent's min
/// corner, `dims` voxels per axis.
struct Lattice {
    origin: Vec3,
    resolution: f64,
    dims: [u32; 3],
}

impl Lattice {
    fn of(spec: &SceneSpec) -> Self {
        let b = &spec.extent;
        let res = spec.resolution;
        let count = |extent: f64| ((extent / res).ceil() as u32).max(1);
        Lattice {
            origin: Vec3::new(b.min_x, b.min_y, b.min_z),
            resolution: res,
            dims: [
                count(b.x_extent()),
                count(b.y_extent()),
                count(b.z_extent()),
            ],
        }
    }

    fn cell_center_xy(&self, i: u32, j: u32) -> (f64, f64) {
        (
            self.origin.x + (i as f64 + 0.5) * self.resolution,
            self.origin.y + (j as f64 + 0.5) * self.resolution,
        )
    }
}

fn rasterize_ground(ground: &Ground, lattice: &Lattice, voxels: &mut HashSet<[u32; 3]>) {
    for i in 0..lattice.dims[0] {
        for j in 0..lattice.dims[1] {
            let (x, y) = lattice.cell_center_xy(i, j);
            let h = ground.height(x, y);
            // Solid fill from the floor up to the surface layer, so the
            // terrain has no hollow cliff faces.
            let surface = ((h / lattice.resolution).floor() as i64)
                .clamp(0, lattice.dims[2] as i64 - 1) as u32;
            for k in 0..=surface {
                voxels.insert([i, j, k]);
            }
        }
    }
}

fn placed_obstacles(spec: &SceneSpec, attempt: u32) -> Vec<Obstacle> {
    if attempt == 0 {
        return spec.obstacles.clone();
    }
    let mut rng = rng_from_seed(derive_seed(spec.seed, "scene-jitter", &[attempt as u64]));
    spec.obstacles
        .iter()
        .map(|obstacle| {
            let dx = rng.gen_range(-JITTER_RANGE..=JITTER_RANGE);
            let dy = rng.gen_range(-JITTER_RANGE..=JITTER_RANGE);
            let shift = Vec3::new(dx, dy, 0.0);
            match *obstacle {
                Obstacle::Box { center, extents } => Obstacle::Box {
                    center: center + shift,
                    extents,
                },
                Obstacle::Cylinder {
                    center,
                    radius,
                    height,
                } => Obstacle::Cylinder {
                    center: center + shift,
                    radius,
                    height,
                },
            }
        })
        .collect()
}

fn rasterize_obstacle(obstacle: &Obstacle, lattice: &Lattice, voxels: &mut HashSet<[u32; 3]>) {
    let (lo, hi) = match *obstacle {
        Obstacle::Box { center, extents } => (center - extents / 2.0, center + extents / 2.0),
        Obstacle::Cylinder {
            center,
            radius,
            height,
        } => (
            center - Vec3::new(radius, radius, height / 2.0),
            center + Vec3::new(radius, radius, height / 2.0),
        ),
    };
    let res = lattice.resolution;
    let range = |axis: usize| -> std::ops::RangeInclusive<i64> {
        let a = ((lo[axis] - lattice.origin[axis]) / res).floor() as i64 - 1;
        let b = ((hi[axis] - lattice.origin[axis]) / res).floor() as i64 + 1;
        a.max(0)..=b.min(lattice.dims[axis] as i64 - 1)
    };

    for i in range(0) {
        for j in range(1) {
            for k in range(2) {
                let cell_lo = lattice.origin + Vec3::new(i as f64, j as f64, k as f64) * res;
                let cell_hi = cell_lo + Vec3::repeat(res);
                let overlaps = match *obstacle {
                    Obstacle::Box { .. } => (0..3).all(|a| lo[a] < cell_hi[a] && hi[a] > cell_lo[a]),
                    Obstacle::Cylinder {
                        center,
                        radius,
                        height,
                    } => {
                        let z_ok = center.z - height / 2.0 < cell_hi.z
                            && center.z + height / 2.0 > cell_lo.z;
                        // Distance from the circle center to the cell's
                        // xy rectangle.
                        let dx = (cell_lo.x - center.x).max(center.x - cell_hi.x).max(0.0);
                        let dy = (cell_lo.y - center.y).max(center.y - cell_hi.y).max(0.0);
                        z_ok && dx.hypot(dy) < radius
                    }
                };
                if overlaps {
                    voxels.insert([i as u32, j as u32, k as u32]);
                }
            }
        }
    }
}

/// Coarse certificate that the scene is traversable: project occupied
/// voxels inside the corridor's height band onto a half-width grid,
/// dilate one cell for body clearance, and flood-fill from the low-x
/// edge to the high-x edge (4-connected).
fn has_corridor(voxels: &HashSet<[u32; 3]>, lattice: &Lattice, corridor: &Corridor) -> bool {
    let cell = corridor.width / 2.0;
    let res = lattice.resolution;
    let world_x = lattice.dims[0] as f64 * res;
    let world_y = lattice.dims[1] as f64 * res;
    let gx = ((world_x / cell).ceil() as usize).max(1);
    let gy = ((world_y / cell).ceil() as usize).max(1);

    let mut blocked = vec![false; gx * gy];
    for &[i, j, k] in voxels {
        let z_lo = lattice.origin.z + k as f64 * res;
        if !(z_lo < corridor.z_max && z_lo + res > corridor.z_min) {
            continue;
        }
        // Cells overlapped by this voxel's xy footprint.
        let cx_lo = ((i as f64 * res) / cell).floor() as usize;
        let cx_hi = (((i + 1) as f64 * res) / cell).ceil() as usize;
        let cy_lo = ((j as f64 * res) / cell).floor() as usize;
        let cy_hi = (((j + 1) as f64 * res) / cell).ceil() as usize;
        for cx in cx_lo..cx_hi.min(gx) {
            for cy in cy_lo..cy_hi.min(gy) {
                blocked[cy * gx + cx] = true;
            }
        }
    }

    // One-cell dilation approximates half-body clearance around walls.
    let mut dilated = blocked.clone();
    for cy in 0..gy {
        for cx in 0..gx {
            if blocked[cy * gx + cx] {
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        let (nx, ny) = (cx as i64 + dx, cy as i64 + dy);
                        if nx >= 0 && ny >= 0 && (nx as usize) < gx && (ny as usize) < gy {
                            dilated[ny as usize * gx + nx as usize] = true;
                        }
                    }
                }
            }
        }
    }

    let mut seen = vec![false; gx * gy];
    let mut queue = VecDeque::new();
    for cy in 0..gy {
        if !dilated[cy * gx] {
            seen[cy * gx] = true;
            queue.push_back((0usize, cy));
        }
    }
    while let Some((cx, cy)) = queue.pop_front() {
        if cx == gx - 1 {
            return true;
        }
        let neighbors = [
            (cx.wrapping_sub(1), cy),
            (cx + 1, cy),
            (cx, cy.wrapping_sub(1)),
            (cx, cy + 1),
        ];
        for (nx, ny) in neighbors {
            if nx < gx && ny < gy && !dilated[ny * gx + nx] && !seen[ny * gx + nx] {
                seen[ny * gx + nx] = true;
                queue.push_back((nx, ny));
            }
        }
    }
    false
}
