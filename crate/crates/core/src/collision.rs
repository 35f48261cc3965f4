//! Boolean validity of states and motions: the robot's body box against
//! the occupancy map. These checks sit in every planner's inner loop.

use crate::geom::{Obb, Vec3};
use crate::statespace::{State, StateSpace};
use crate::worldmap::OccupancyOctree;

/// Planar robots are modeled as gliding on a fixed plane: the body box
/// is centered this far above the map origin's z. With the default
/// half-meter-tall body the box spans z in [0.45, 0.95], clearing one
/// ground voxel layer of moderate terrain while still colliding with
/// taller rises and obstacles.
pub const PLANAR_BODY_CENTER_Z: f64 = 0.7;

/// Axis-aligned body box dimensions (full side lengths, meters). The
/// box is re-oriented by each state's rotation during checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobotBody {
    extents: Vec3,
}

impl RobotBody {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        assert!(
            x > 0.0 && y > 0.0 && z > 0.0,
            "body extents must be positive"
        );
        RobotBody {
            extents: Vec3::new(x, y, z),
        }
    }

    pub fn extents(&self) -> Vec3 {
        self.extents
    }

    pub fn half_extents(&self) -> Vec3 {
        self.extents / 2.0
    }

    /// The body box posed at a state: yaw-rotated on the fixed plane for
    /// planar states, fully rotated by the quaternion for spatial ones.
    pub fn at_state(&self, s: &State) -> Obb {
        match s {
            State::Planar(p) => Obb::yawed(
                Vec3::new(p.x, p.y, PLANAR_BODY_CENTER_Z),
                self.half_extents(),
                p.yaw,
            ),
            State::Spatial(p) => Obb::new(p.position, self.half_extents(), p.orientation),
        }
    }
}

impl Default for RobotBody {
    fn default() -> Self {
        RobotBody::new(1.5, 1.5, 0.5)
    }
}

/// Validation step that bounds undetected penetration by half a voxel.
pub fn default_validation_step(map_resolution: f64) -> f64 {
    (map_resolution / 2.0).min(0.1)
}

/// True iff the state is inside bounds and its body box overlaps no
/// occupied voxel. A state of the wrong kind for the space is invalid
/// rather than an error.
pub fn is_state_valid(s: &State, body: &RobotBody, map: &OccupancyOctree, space: &StateSpace) -> bool {
    space.satisfies_bounds(s) && !map.intersects_box(&body.at_state(s))
}

/// True iff every one of `ceil(distance/step) + 1` evenly spaced states
/// along the motion from `a` to `b` is valid. For car-like spaces the
/// states follow the optimal curve, not the chord.
pub fn is_motion_valid(
    a: &State,
    b: &State,
    body: &RobotBody,
    map: &OccupancyOctree,
    space: &StateSpace,
    step: f64,
) -> bool {
    assert!(step > 0.0, "validation step must be positive");
    let Ok(motion) = space.motion(a, b) else {
        return false;
    };
    let count = (motion.length() / step).ceil() as usize + 1;
    let checked_at = |i: usize| {
        let t = if count < 2 {
            0.0
        } else {
            i as f64 / (count - 1) as f64
        };
        is_state_valid(&motion.state_at(t), body, map, space)
    };
    // Endpoints first: they reject most bad motions cheaply.
    if !checked_at(0) || !checked_at(count - 1) {
        return false;
    }
    (1..count.saturating_sub(1)).all(checked_at)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statespace::{Bounds, StateSpace};
    use crate::worldmap::build_octree;
    use std::f64::consts::PI;

    fn bounds() -> Bounds {
        Bounds::new(-10.0, 10.0, -10.0, 10.0, 0.0, 2.0, -PI, PI).unwrap()
    }

    #[test]
    fn empty_map_accepts_in_bounds_states_only() {
        let map = build_octree([], 0.2, Vec3::zeros());
        let space = StateSpace::se2(bounds());
        let body = RobotBody::default();
        assert!(is_state_valid(&State::planar(0.0, 0.0, 0.0), &body, &map, &space));
        assert!(!is_state_valid(&State::planar(11.0, 0.0, 0.0), &body, &map, &space));
    }

    #[test]
    fn wrong_state_kind_is_invalid_not_a_panic() {
        let map = build_octree([], 0.2, Vec3::zeros());
        let space = StateSpace::se2(bounds());
        let body = RobotBody::default();
        let spatial = State::spatial(crate::statespace::Pose3::upright(0.0, 0.0, 1.0));
        assert!(!is_state_valid(&spatial, &body, &map, &space));
        assert!(!is_motion_valid(
            &spatial,
            &spatial,
            &body,
            &map,
            &space,
            0.1
        ));
    }

    #[test]
    fn zero_length_motion_checks_the_single_state() {
        let map = build_octree([], 0.2, Vec3::zeros());
        let space = StateSpace::se2(bounds());
        let body = RobotBody::default();
        let s = State::planar(1.0, 1.0, 0.5);
        assert!(is_motion_valid(&s, &s, &body, &map, &space, 0.1));
    }

    #[test]
    fn default_step_is_half_voxel_capped() {
        assert_eq!(default_validation_step(0.2), 0.1);
        assert_eq!(default_validation_step(0.1), 0.05);
        assert_eq!(default_validation_step(1.0), 0.1);
    }
}
