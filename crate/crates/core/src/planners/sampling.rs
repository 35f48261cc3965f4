//! Informed sampling: uniform positional draws from the prolate
//! hyperspheroid whose foci are the start and goal and whose transverse
//! diameter is the best cost found so far. Any path shorter than that
//! cost stays inside the spheroid, so sampling it cannot discard the
//! optimum.

use super::PlanError;
use crate::geom::{Quat, Vec3};
use crate::rng::ChaCha8Rng;
use crate::statespace::{uniform_quat, Pose3, SpaceKind, State, StateSpace};
use rand::Rng;

/// Bounds rejection gives up after this many draws and falls back to a
/// point on the start–goal segment, which is always in bounds and
/// always inside the spheroid.
const MAX_BOUNDS_REJECTIONS: usize = 1000;

/// Draws a state whose position lies in the prolate hyperspheroid of
/// transverse diameter `c_best` (infinite means plain uniform
/// sampling); yaw or orientation is uniform.
pub fn informed_sample(
    start: &State,
    goal: &State,
    c_best: f64,
    space: &StateSpace,
    rng: &mut ChaCha8Rng,
) -> Result<State, PlanError> {
    if c_best.is_infinite() {
        return Ok(space.sample_uniform(rng));
    }
    let f0 = start.position();
    let f1 = goal.position();
    let c_min = (f1 - f0).norm();
    if c_best < c_min - 1e-9 {
        return Err(PlanError::CostBelowMinimum { c_best, c_min });
    }
    let c_best = c_best.max(c_min);
    let center = (f0 + f1) / 2.0;
    let a = c_best / 2.0;
    let b = (c_best * c_best - c_min * c_min).max(0.0).sqrt() / 2.0;
    let planar = space.kind() != SpaceKind::Se3;
    let bounds = *space.bounds();

    let mut position = None;
    for _ in 0..MAX_BOUNDS_REJECTIONS {
        let local = if planar {
            let (u, v) = unit_disk(rng);
            rotate_planar(f1 - f0, a * u, b * v)
        } else {
            let (u, v, w) = unit_ball(rng);
            rotate_spatial(f1 - f0, Vec3::new(a * u, b * v, b * w))
        };
        let p = center + local;
        if in_positional_bounds(&bounds, &p, planar) {
            position = Some(p);
            break;
        }
    }
    let position = position.unwrap_or_else(|| {
        let t: f64 = rng.gen();
        f0 + t * (f1 - f0)
    });

    Ok(if planar {
        let yaw = rng.gen_range(bounds.min_yaw..=bounds.max_yaw);
        State::planar(position.x, position.y, yaw)
    } else {
        State::Spatial(Pose3::new(position, uniform_quat(rng)))
    })
}

fn in_positional_bounds(b: &crate::statespace::Bounds, p: &Vec3, planar: bool) -> bool {
    (b.min_x..=b.max_x).contains(&p.x)
        && (b.min_y..=b.max_y).contains(&p.y)
        && (planar || (b.min_z..=b.max_z).contains(&p.z))
}

fn unit_disk(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let u = rng.gen_range(-1.0..=1.0);
        let v = rng.gen_range(-1.0..=1.0);
        if u * u + v * v <= 1.0 {
            return (u, v);
        }
    }
}

fn unit_ball(rng: &mut ChaCha8Rng) -> (f64, f64, f64) {
    loop {
        let u = rng.gen_range(-1.0..=1.0);
        let v = rng.gen_range(-1.0..=1.0);
        let w = rng.gen_range(-1.0..=1.0);
        if u * u + v * v + w * w <= 1.0 {
            return (u, v, w);
        }
    }
}

/// Rotates local ellipse coordinates (major axis x) into the world
/// frame whose major axis points along `dir`, in the xy plane.
fn rotate_planar(dir: Vec3, lx: f64, ly: f64) -> Vec3 {
    let norm = dir.xy().norm();
    let (c, s) = if norm < 1e-12 {
        (1.0, 0.0)
    } else {
        (dir.x / norm, dir.y / norm)
    };
    Vec3::new(c * lx - s * ly, s * lx + c * ly, 0.0)
}

/// Rotates local ellipsoid coordinates (major axis x) so x maps onto
/// `dir`.
fn rotate_spatial(dir: Vec3, local: Vec3) -> Vec3 {
    let norm = dir.norm();
    if norm < 1e-12 {
        return local;
    }
    let rotation = Quat::rotation_between(&Vec3::x(), &(dir / norm))
        .unwrap_or_else(|| Quat::from_axis_angle(&Vec3::z_axis(), std::f64::consts::PI));
    rotation * local
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use crate::statespace::Bounds;
    use std::f64::consts::PI;

    fn bounds() -> Bounds {
        Bounds::new(-100.0, 100.0, -50.0, 50.0, 0.0, 2.0, -PI, PI).unwrap()
    }

    #[test]
    fn infinite_cost_reduces_to_uniform_sampling() {
        for space in [
            StateSpace::se2(bounds()),
            StateSpace::se3(bounds()),
        ] {
            let start = space.sample_uniform(&mut rng_from_seed(1));
            let goal = space.sample_uniform(&mut rng_from_seed(2));
            let mut a = rng_from_seed(99);
            let mut b = rng_from_seed(99);
            for _ in 0..50 {
                let s = informed_sample(&start, &goal, f64::INFINITY, &space, &mut a).unwrap();
                assert_eq!(s, space.sample_uniform(&mut b));
            }
        }
    }

    #[test]
    fn samples_stay_inside_the_spheroid() {
        for space in [
            StateSpace::se2(bounds()),
            StateSpace::se3(bounds()),
            StateSpace::dubins(bounds(), 1.5).unwrap(),
        ] {
            let mut rng = rng_from_seed(0x1f0_0001);
            let start = space.sample_uniform(&mut rng);
            let goal = space.sample_uniform(&mut rng);
            let c_min = (goal.position() - start.position()).norm();
            let c_best = c_min * 1.25;
            for _ in 0..10_000 {
                let s = informed_sample(&start, &goal, c_best, &space, &mut rng).unwrap();
                let p = s.position();
                let sum = (p - start.position()).norm() + (goal.position() - p).norm();
                assert!(sum <= c_best + 1e-9, "{sum} > {c_best}");
                assert!(space.satisfies_bounds(&s));
            }
        }
    }

    #[test]
    fn degenerate_spheroid_collapses_to_the_segment() {
        let space = StateSpace::se2(bounds());
        let start = State::planar(-10.0, 5.0, 0.0);
        let goal = State::planar(30.0, -7.0, 1.0);
        let c_min = (goal.position() - start.position()).norm();
        let mut rng = rng_from_seed(0x1f0_0002);
        for _ in 0..200 {
            let s = informed_sample(&start, &goal, c_min, &space, &mut rng).unwrap();
            let p = s.position();
            let sum = (p - start.position()).norm() + (goal.position() - p).norm();
            assert!((sum - c_min).abs() <= 1e-9);
        }
    }

    #[test]
    fn cost_below_minimum_is_rejected() {
        let space = StateSpace::se2(bounds());
        let start = State::planar(0.0, 0.0, 0.0);
        let goal = State::planar(10.0, 0.0, 0.0);
        let mut rng = rng_from_seed(3);
        let err = informed_sample(&start, &goal, 5.0, &space, &mut rng).unwrap_err();
        assert!(matches!(err, PlanError::CostBelowMinimum { .. }));
    }
}
