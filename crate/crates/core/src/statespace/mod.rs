//! State spaces for planar and spatial rigid bodies.
//!
//! Four spaces share one interface: holonomic SE(2) and SE(3), plus the
//! curvature-bounded Dubins (forward only) and Reeds-Shepp (forward and
//! reverse) cars. Distances are weighted metrics for SE(2)/SE(3) and
//! shortest-curve lengths for the two car spaces; the Dubins length is
//! asymmetric in general.

mod curve;
mod dubins;
mod reeds_shepp;

pub use curve::{CurveSegment, CurveWord, Direction, TurnKind};
pub use dubins::dubins_path;
pub use reeds_shepp::reeds_shepp_path;

use crate::geom::{Quat, Vec3};
use rand::Rng;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

/// Wraps an angle into (-pi, pi].
pub fn normalize_angle(angle: f64) -> f64 {
    let r = angle % TAU;
    if r <= -PI {
        r + TAU
    } else if r > PI {
        r - TAU
    } else {
        r
    }
}

/// A planar pose. `yaw` is kept normalized to (-pi, pi].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose2 {
    pub x: f64,
    pub y: f64,
    pub yaw: f64,
}

impl Pose2 {
    pub fn new(x: f64, y: f64, yaw: f64) -> Self {
        Pose2 {
            x,
            y,
            yaw: normalize_angle(yaw),
        }
    }
}

/// A spatial pose with a unit-quaternion orientation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose3 {
    pub position: Vec3,
    pub orientation: Quat,
}

impl Pose3 {
    pub fn new(position: Vec3, orientation: Quat) -> Self {
        Pose3 {
            position,
            orientation,
        }
    }

    /// A pose at `(x, y, z)` with identity orientation.
    pub fn upright(x: f64, y: f64, z: f64) -> Self {
        Pose3 {
            position: Vec3::new(x, y, z),
            orientation: Quat::identity(),
        }
    }
}

/// A state in one of the supported spaces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum State {
    Planar(Pose2),
    Spatial(Pose3),
}

impl State {
    pub fn planar(x: f64, y: f64, yaw: f64) -> Self {
        State::Planar(Pose2::new(x, y, yaw))
    }

    pub fn spatial(pose: Pose3) -> Self {
        State::Spatial(pose)
    }

    pub fn as_planar(&self) -> Option<Pose2> {
        match self {
            State::Planar(p) => Some(*p),
            State::Spatial(_) => None,
        }
    }

    pub fn as_spatial(&self) -> Option<Pose3> {
        match self {
            State::Spatial(p) => Some(*p),
            State::Planar(_) => None,
        }
    }

    /// World-frame position; planar states project onto z = 0.
    pub fn position(&self) -> Vec3 {
        match self {
            State::Planar(p) => Vec3::new(p.x, p.y, 0.0),
            State::Spatial(p) => p.position,
        }
    }
}

/// Which state space a [`StateSpace`] models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    Se2,
    Se3,
    Dubins,
    ReedsShepp,
}

impl SpaceKind {
    /// True for the three planar spaces.
    pub fn is_planar(self) -> bool {
        !matches!(self, SpaceKind::Se3)
    }
}

/// Axis-aligned sampling bounds. Yaw bounds must lie within [-pi, pi];
/// every other axis only needs min <= max, so degenerate (point) ranges
/// are allowed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    pub min_x: f64,
    pub max_x: f64,
    pub min_y: f64,
    pub max_y: f64,
    pub min_z: f64,
    pub max_z: f64,
    pub min_yaw: f64,
    pub max_yaw: f64,
}

impl Bounds {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        min_x: f64,
        max_x: f64,
        min_y: f64,
        max_y: f64,
        min_z: f64,
        max_z: f64,
        min_yaw: f64,
        max_yaw: f64,
    ) -> Result<Self, SpaceError> {
        for (axis, min, max) in [
            ("x", min_x, max_x),
            ("y", min_y, max_y),
            ("z", min_z, max_z),
            ("yaw", min_yaw, max_yaw),
        ] {
            if !(min <= max) {
                return Err(SpaceError::InvalidBounds { axis, min, max });
            }
        }
        // Pose yaw is normalized to (-pi, pi]; bounds outside that circle
        // could never be satisfied consistently.
        if min_yaw < -PI - 1e-9 || max_yaw > PI + 1e-9 {
            return Err(SpaceError::YawBoundsOutsideCircle {
                min: min_yaw,
                max: max_yaw,
            });
        }
        Ok(Bounds {
            min_x,
            max_x,
            min_y,
            max_y,
            min_z,
            max_z,
            min_yaw,
            max_yaw,
        })
    }

    pub fn x_extent(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn y_extent(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn z_extent(&self) -> f64 {
        self.max_z - self.min_z
    }

    pub fn yaw_extent(&self) -> f64 {
        self.max_yaw - self.min_yaw
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SpaceError {
    #[error("state kind does not match the {space:?} space")]
    StateKindMismatch { space: SpaceKind },
    #[error("interpolation fraction {0} is outside [0, 1]")]
    FractionOutOfRange(f64),
    #[error("invalid bounds on {axis}: min {min} is greater than max {max}")]
    InvalidBounds {
        axis: &'static str,
        min: f64,
        max: f64,
    },
    #[error("yaw bounds [{min}, {max}] must lie within [-pi, pi]")]
    YawBoundsOutsideCircle { min: f64, max: f64 },
    #[error("turning radius must be positive, got {0}")]
    InvalidTurningRadius(f64),
}

/// One of the four supported state spaces, with its sampling bounds and
/// metric parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateSpace {
    kind: SpaceKind,
    bounds: Bounds,
    /// Minimum turning radius; meaningful only for Dubins and Reeds-Shepp.
    turning_radius: f64,
    /// Weight of the angular term in the SE(2)/SE(3) metrics.
    yaw_weight: f64,
}

impl StateSpace {
    pub fn se2(bounds: Bounds) -> Self {
        StateSpace {
            kind: SpaceKind::Se2,
            bounds,
            turning_radius: 0.0,
            yaw_weight: 1.0,
        }
    }

    pub fn se3(bounds: Bounds) -> Self {
        StateSpace {
            kind: SpaceKind::Se3,
            bounds,
            turning_radius: 0.0,
            yaw_weight: 1.0,
        }
    }

    pub fn dubins(bounds: Bounds, turning_radius: f64) -> Result<Self, SpaceError> {
        if turning_radius <= 0.0 {
            return Err(SpaceError::InvalidTurningRadius(turning_radius));
        }
        Ok(StateSpace {
            kind: SpaceKind::Dubins,
            bounds,
            turning_radius,
            yaw_weight: 1.0,
        })
    }

    pub fn reeds_shepp(bounds: Bounds, turning_radius: f64) -> Result<Self, SpaceError> {
        if turning_radius <= 0.0 {
            return Err(SpaceError::InvalidTurningRadius(turning_radius));
        }
        Ok(StateSpace {
            kind: SpaceKind::ReedsShepp,
            bounds,
            turning_radius,
            yaw_weight: 1.0,
        })
    }

    pub fn with_yaw_weight(mut self, yaw_weight: f64) -> Self {
        self.yaw_weight = yaw_weight;
        self
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    /// Minimum turning radius for the car spaces, `None` otherwise.
    pub fn turning_radius(&self) -> Option<f64> {
        match self.kind {
            SpaceKind::Dubins | SpaceKind::ReedsShepp => Some(self.turning_radius),
            _ => None,
        }
    }

    /// Degrees of freedom: 3 for the planar spaces, 6 for SE(3).
    pub fn dimension(&self) -> usize {
        match self.kind {
            SpaceKind::Se3 => 6,
            _ => 3,
        }
    }

    /// Lebesgue measure of the sampling domain, used to size rewiring
    /// neighborhoods. The SE(3) orientation factor is the volume of SO(3),
    /// pi^2, under the uniform (Haar) distribution.
    pub fn measure(&self) -> f64 {
        let b = &self.bounds;
        match self.kind {
            SpaceKind::Se3 => b.x_extent() * b.y_extent() * b.z_extent() * PI * PI,
            _ => b.x_extent() * b.y_extent() * b.yaw_extent(),
        }
    }

    /// Draws a state uniformly from the bounded domain; SE(3) orientations
    /// are uniform over the whole rotation group.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> State {
        let b = &self.bounds;
        let x = rng.gen_range(b.min_x..=b.max_x);
        let y = rng.gen_range(b.min_y..=b.max_y);
        match self.kind {
            SpaceKind::Se3 => {
                let z = rng.gen_range(b.min_z..=b.max_z);
                State::Spatial(Pose3::new(Vec3::new(x, y, z), uniform_quat(rng)))
            }
            _ => {
                let yaw = rng.gen_range(b.min_yaw..=b.max_yaw);
                State::Planar(Pose2::new(x, y, yaw))
            }
        }
    }

    /// Distance from `a` to `b`: a weighted position/angle sum for SE(2)
    /// and SE(3), the optimal curve length for Dubins and Reeds-Shepp.
    pub fn distance(&self, a: &State, b: &State) -> Result<f64, SpaceError> {
        self.check_state(a)?;
        self.check_state(b)?;
        Ok(self.metric(a, b))
    }

    /// Infallible distance for callers that construct both states from this
    /// space and can therefore guarantee the kinds line up.
    pub(crate) fn metric(&self, a: &State, b: &State) -> f64 {
        match (self.kind, a, b) {
            (SpaceKind::Se2, State::Planar(a), State::Planar(b)) => {
                (b.x - a.x).hypot(b.y - a.y)
                    + self.yaw_weight * normalize_angle(b.yaw - a.yaw).abs()
            }
            (SpaceKind::Se3, State::Spatial(a), State::Spatial(b)) => {
                (b.position - a.position).norm()
                    + self.yaw_weight * a.orientation.angle_to(&b.orientation)
            }
            (SpaceKind::Dubins, State::Planar(a), State::Planar(b)) => {
                dubins_path(*a, *b, self.turning_radius).total_length
            }
            (SpaceKind::ReedsShepp, State::Planar(a), State::Planar(b)) => {
                reeds_shepp_path(*a, *b, self.turning_radius).total_length
            }
            _ => unreachable!("state kinds checked against the space"),
        }
    }

    /// State a fraction `t` of the way from `a` to `b`: along the straight
    /// blend for SE(2)/SE(3) and along the optimal curve (by arclength) for
    /// Dubins and Reeds-Shepp.
    pub fn interpolate(&self, a: &State, b: &State, t: f64) -> Result<State, SpaceError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(SpaceError::FractionOutOfRange(t));
        }
        self.check_state(a)?;
        self.check_state(b)?;
        Ok(self.blend(a, b, t))
    }

    fn blend(&self, a: &State, b: &State, t: f64) -> State {
        match (self.kind, a, b) {
            (SpaceKind::Se2, State::Planar(a), State::Planar(b)) => State::Planar(Pose2::new(
                a.x + t * (b.x - a.x),
                a.y + t * (b.y - a.y),
                a.yaw + t * normalize_angle(b.yaw - a.yaw),
            )),
            (SpaceKind::Se3, State::Spatial(a), State::Spatial(b)) => {
                State::Spatial(Pose3::new(
                    a.position + t * (b.position - a.position),
                    slerp_shortest(&a.orientation, &b.orientation, t),
                ))
            }
            (SpaceKind::Dubins, State::Planar(a), State::Planar(b)) => {
                let word = dubins_path(*a, *b, self.turning_radius);
                State::Planar(word.pose_at(*a, t * word.total_length))
            }
            (SpaceKind::ReedsShepp, State::Planar(a), State::Planar(b)) => {
                let word = reeds_shepp_path(*a, *b, self.turning_radius);
                State::Planar(word.pose_at(*a, t * word.total_length))
            }
            _ => unreachable!("state kinds checked against the space"),
        }
    }

    /// True when every coordinate of `s` lies inside the closed bounds.
    /// SE(3) orientations are always in-bounds; a state of the wrong kind
    /// is simply out of bounds, never an error.
    pub fn satisfies_bounds(&self, s: &State) -> bool {
        let b = &self.bounds;
        match (self.kind, s) {
            (SpaceKind::Se3, State::Spatial(p)) => {
                (b.min_x..=b.max_x).contains(&p.position.x)
                    && (b.min_y..=b.max_y).contains(&p.position.y)
                    && (b.min_z..=b.max_z).contains(&p.position.z)
            }
            (SpaceKind::Se3, State::Planar(_)) => false,
            (_, State::Planar(p)) => {
                (b.min_x..=b.max_x).contains(&p.x)
                    && (b.min_y..=b.max_y).contains(&p.y)
                    && (b.min_yaw..=b.max_yaw).contains(&p.yaw)
            }
            (_, State::Spatial(_)) => false,
        }
    }

    /// Realizes the motion from `a` to `b` so it can be swept or resampled
    /// without re-solving the underlying curve at every query.
    pub fn motion(&self, a: &State, b: &State) -> Result<Motion<'_>, SpaceError> {
        self.check_state(a)?;
        self.check_state(b)?;
        let (word, length) = match (self.kind, a, b) {
            (SpaceKind::Dubins, State::Planar(pa), State::Planar(pb)) => {
                let word = dubins_path(*pa, *pb, self.turning_radius);
                let length = word.total_length;
                (Some(word), length)
            }
            (SpaceKind::ReedsShepp, State::Planar(pa), State::Planar(pb)) => {
                let word = reeds_shepp_path(*pa, *pb, self.turning_radius);
                let length = word.total_length;
                (Some(word), length)
            }
            _ => (None, self.metric(a, b)),
        };
        Ok(Motion {
            space: self,
            start: *a,
            end: *b,
            word,
            length,
        })
    }

    fn check_state(&self, s: &State) -> Result<(), SpaceError> {
        let ok = match self.kind {
            SpaceKind::Se3 => matches!(s, State::Spatial(_)),
            _ => matches!(s, State::Planar(_)),
        };
        if ok {
            Ok(())
        } else {
            Err(SpaceError::StateKindMismatch { space: self.kind })
        }
    }
}

/// A realized motion between two states of one space. For the car spaces
/// the optimal curve word is solved once at construction.
#[derive(Clone, Debug)]
pub struct Motion<'a> {
    space: &'a StateSpace,
    start: State,
    end: State,
    word: Option<CurveWord>,
    length: f64,
}

impl Motion<'_> {
    /// Metric length of the motion (curve length for car spaces).
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn start(&self) -> &State {
        &self.start
    }

    pub fn end(&self) -> &State {
        &self.end
    }

    /// State a fraction `t in [0, 1]` along the motion, measured by
    /// arclength for the car spaces.
    pub fn state_at(&self, t: f64) -> State {
        let t = t.clamp(0.0, 1.0);
        match (&self.word, &self.start) {
            (Some(word), State::Planar(start)) => {
                State::Planar(word.pose_at(*start, t * word.total_length))
            }
            _ => self.space.blend(&self.start, &self.end, t),
        }
    }
}

/// Uniform random rotation (Shoemake's subgroup algorithm).
pub(crate) fn uniform_quat<R: Rng + ?Sized>(rng: &mut R) -> Quat {
    let u1: f64 = rng.gen();
    let u2: f64 = rng.gen();
    let u3: f64 = rng.gen();
    let a = (1.0 - u1).sqrt();
    let b = u1.sqrt();
    let (s2, c2) = (TAU * u2).sin_cos();
    let (s3, c3) = (TAU * u3).sin_cos();
    Quat::new_normalize(nalgebra::Quaternion::new(b * c3, a * s2, a * c2, b * s3))
}

/// Shortest-arc spherical blend between two unit quaternions.
fn slerp_shortest(qa: &Quat, qb: &Quat, t: f64) -> Quat {
    let mut target = *qb;
    if qa.coords.dot(&target.coords) < 0.0 {
        target = Quat::new_unchecked(-target.into_inner());
    }
    qa.try_slerp(&target, t, 1e-12)
        .unwrap_or(if t < 0.5 { *qa } else { target })
}
