//! Evaluation metrics over returned paths: length, smoothness, and
//! independent re-derivation of the solution status.

use crate::planners::{Path, PlannerResult, Problem, SolutionStatus};
use crate::statespace::StateSpace;
use thiserror::Error;

/// One benchmark run, as written to the results table. `raw_length` and
/// `normalized_length` are present together or not at all; failures
/// carry neither.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub planner: String,
    pub problem_id: u32,
    pub repeat: u32,
    pub status: SolutionStatus,
    pub raw_length: Option<f64>,
    pub normalized_length: Option<f64>,
    pub smoothness: Option<f64>,
    pub wall_time: f64,
}

impl RunRecord {
    pub fn validate(&self) -> Result<(), MetricsError> {
        if self.raw_length.is_some() != self.normalized_length.is_some() {
            return Err(MetricsError::InconsistentRecord(
                "raw and normalized lengths must be present together",
            ));
        }
        if self.smoothness.is_some_and(|s| !(s >= 0.0)) {
            return Err(MetricsError::InconsistentRecord(
                "smoothness must be non-negative",
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("planner reported {reported:?} but the path re-derives to {derived:?}")]
    StatusMismatch {
        reported: SolutionStatus,
        derived: SolutionStatus,
    },
    #[error("inconsistent run record: {0}")]
    InconsistentRecord(&'static str),
}

/// Total metric length of the path: straight-segment sums for SE(2) and
/// SE(3), curve arclength for the car-like spaces.
pub fn path_length(path: &Path, space: &StateSpace) -> f64 {
    assert_eq!(
        path.kind(),
        space.kind(),
        "path kind must match the measuring space"
    );
    path.cost(space)
}

/// Sum of turning angles, in radians, between consecutive positional
/// segment directions. Zero-length segments are dropped first, so
/// duplicate states never contribute an undefined direction; a
/// perfectly straight path scores exactly 0.0.
pub fn path_smoothness(path: &Path) -> f64 {
    let mut directions = path
        .states()
        .windows(2)
        .map(|w| w[1].position() - w[0].position())
        .filter(|d| d.norm() >= 1e-12);
    let Some(mut previous) = directions.next() else {
        return 0.0;
    };
    let mut total = 0.0;
    for current in directions {
        let cross = previous.cross(&current).norm();
        let dot = previous.dot(&current);
        total += cross.atan2(dot);
        previous = current;
    }
    total
}

/// Re-derives the solution status from the path's terminal state and
/// the goal tolerance. Disagreement with the planner-reported status is
/// an integrity error, not a judgment call.
pub fn classify_status(
    result: &PlannerResult,
    problem: &Problem,
) -> Result<SolutionStatus, MetricsError> {
    let derived = match &result.path {
        None => SolutionStatus::Failure,
        Some(path) => {
            let gap = problem.space.metric(path.terminal(), &problem.goal);
            if gap <= problem.goal_tolerance {
                SolutionStatus::Exact
            } else {
                SolutionStatus::Approximate
            }
        }
    };
    if derived == result.status {
        Ok(derived)
    } else {
        Err(MetricsError::StatusMismatch {
            reported: result.status,
            derived,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statespace::{Bounds, SpaceKind, State};

    fn planar_path(points: &[(f64, f64)]) -> Path {
        Path::new(
            points
                .iter()
                .map(|&(x, y)| State::planar(x, y, 0.0))
                .collect(),
            SpaceKind::Se2,
        )
    }

    #[test]
    fn straight_segments_sum_like_a_ruler() {
        let bounds =
            Bounds::new(-10.0, 10.0, -10.0, 10.0, 0.0, 1.0, -1.0, 1.0).expect("valid bounds");
        let space = StateSpace::se2(bounds);
        let path = planar_path(&[(0.0, 0.0), (3.0, 4.0)]);
        assert_eq!(path_length(&path, &space), 5.0);
        let still = planar_path(&[(2.0, 2.0), (2.0, 2.0)]);
        assert_eq!(path_length(&still, &space), 0.0);
    }

    #[test]
    fn collinear_path_is_exactly_smooth() {
        let path = planar_path(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert_eq!(path_smoothness(&path), 0.0);
    }

    #[test]
    fn right_angles_count_half_pi_each() {
        let one = planar_path(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        assert!((path_smoothness(&one) - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        let two = planar_path(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        assert!((path_smoothness(&two) - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn duplicate_states_do_not_bend_the_path() {
        let path = planar_path(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert_eq!(path_smoothness(&path), 0.0);
    }

    #[test]
    fn record_invariants_are_enforced() {
        let mut record = RunRecord {
            planner: "RRT*".into(),
            problem_id: 3,
            repeat: 1,
            status: SolutionStatus::Exact,
            raw_length: Some(12.5),
            normalized_length: Some(1.08),
            smoothness: Some(0.4),
            wall_time: 1.0,
        };
        assert!(record.validate().is_ok());
        record.normalized_length = None;
        assert!(record.validate().is_err());
    }
}
