//! Words of constant-curvature segments, shared by the Dubins and
//! Reeds-Shepp shortest-path solvers.

use super::Pose2;

/// Steering of a single segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TurnKind {
    Left,
    Straight,
    Right,
}

/// Travel direction of a single segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Reverse,
}

/// One arc or straight piece of a curve word. `length` is always >= 0;
/// reverse travel is expressed through `direction`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveSegment {
    pub kind: TurnKind,
    pub direction: Direction,
    pub length: f64,
}

impl CurveSegment {
    /// Length with reverse travel counted negative.
    pub fn signed_length(&self) -> f64 {
        match self.direction {
            Direction::Forward => self.length,
            Direction::Reverse => -self.length,
        }
    }
}

/// A sequence of constant-curvature segments with a fixed turning radius.
///
/// Zero-length segments are kept so the word structure mirrors the family
/// that produced it (an `LSL` solution with empty arcs still has three
/// segments).
#[derive(Clone, Debug, PartialEq)]
pub struct CurveWord {
    pub segments: Vec<CurveSegment>,
    pub total_length: f64,
    pub turning_radius: f64,
}

impl CurveWord {
    /// Builds a word from `(kind, signed length)` pairs; negative lengths
    /// become reverse segments.
    pub fn from_signed(
        turning_radius: f64,
        parts: impl IntoIterator<Item = (TurnKind, f64)>,
    ) -> Self {
        let segments: Vec<CurveSegment> = parts
            .into_iter()
            .map(|(kind, signed)| CurveSegment {
                kind,
                direction: if signed < 0.0 {
                    Direction::Reverse
                } else {
                    Direction::Forward
                },
                length: signed.abs(),
            })
            .collect();
        let total_length = segments.iter().map(|s| s.length).sum();
        CurveWord {
            segments,
            total_length,
            turning_radius,
        }
    }

    /// The empty word: zero length, stays at the start pose.
    pub fn empty(turning_radius: f64) -> Self {
        CurveWord {
            segments: Vec::new(),
            total_length: 0.0,
            turning_radius,
        }
    }

    /// Pose after driving the first `arclength` meters of the word from
    /// `start`. The arclength is clamped to `[0, total_length]`.
    pub fn pose_at(&self, start: Pose2, arclength: f64) -> Pose2 {
        let mut pose = start;
        let mut remaining = arclength.clamp(0.0, self.total_length);
        for seg in &self.segments {
            if remaining <= 0.0 {
                break;
            }
            let step = remaining.min(seg.length);
            let signed = match seg.direction {
                Direction::Forward => step,
                Direction::Reverse => -step,
            };
            pose = advance(pose, seg.kind, self.turning_radius, signed);
            remaining -= step;
        }
        pose
    }

    /// Pose after driving the whole word from `start`.
    pub fn end_pose(&self, start: Pose2) -> Pose2 {
        self.segments.iter().fold(start, |pose, seg| {
            advance(pose, seg.kind, self.turning_radius, seg.signed_length())
        })
    }
}

/// Drives one segment of signed length `signed` meters (negative = reverse)
/// and returns the resulting pose. Exact for any signed length, including
/// zero.
pub(super) fn advance(pose: Pose2, kind: TurnKind, radius: f64, signed: f64) -> Pose2 {
    let Pose2 { x, y, yaw } = pose;
    match kind {
        TurnKind::Straight => Pose2::new(x + signed * yaw.cos(), y + signed * yaw.sin(), yaw),
        TurnKind::Left => {
            let turned = yaw + signed / radius;
            Pose2::new(
                x + radius * (turned.sin() - yaw.sin()),
                y - radius * (turned.cos() - yaw.cos()),
                turned,
            )
        }
        TurnKind::Right => {
            let turned = yaw - signed / radius;
            Pose2::new(
                x - radius * (turned.sin() - yaw.sin()),
                y + radius * (turned.cos() - yaw.cos()),
                turned,
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn straight_moves_along_heading() {
        let p = advance(Pose2::new(1.0, 2.0, FRAC_PI_2), TurnKind::Straight, 1.0, 3.0);
        assert_relative_eq!(p.x, 1.0, epsilon = 1e-12);
        assert_relative_eq!(p.y, 5.0, epsilon = 1e-12);
        assert_relative_eq!(p.yaw, FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn quarter_turns_land_on_circle() {
        // Left quarter turn of radius 2 from the origin ends at (2, 2).
        let p = advance(Pose2::new(0.0, 0.0, 0.0), TurnKind::Left, 2.0, PI);
        assert_relative_eq!(p.x, 2.0, epsilon = 1e-12);
        assert_relative_eq!(p.y, 2.0, epsilon = 1e-12);
        assert_relative_eq!(p.yaw, FRAC_PI_2, epsilon = 1e-12);

        let p = advance(Pose2::new(0.0, 0.0, 0.0), TurnKind::Right, 2.0, PI);
        assert_relative_eq!(p.x, 2.0, epsilon = 1e-12);
        assert_relative_eq!(p.y, -2.0, epsilon = 1e-12);
        assert_relative_eq!(p.yaw, -FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn reverse_arc_retraces_forward_arc() {
        let start = Pose2::new(0.3, -1.2, 0.7);
        let fwd = advance(start, TurnKind::Left, 1.5, 2.1);
        let back = advance(fwd, TurnKind::Left, 1.5, -2.1);
        assert_relative_eq!(back.x, start.x, epsilon = 1e-12);
        assert_relative_eq!(back.y, start.y, epsilon = 1e-12);
        assert_relative_eq!(back.yaw, start.yaw, epsilon = 1e-12);
    }

    #[test]
    fn pose_at_matches_segment_boundaries() {
        let word = CurveWord::from_signed(
            1.0,
            [
                (TurnKind::Left, FRAC_PI_2),
                (TurnKind::Straight, 2.0),
                (TurnKind::Right, -FRAC_PI_2),
            ],
        );
        assert_relative_eq!(word.total_length, FRAC_PI_2 + 2.0 + FRAC_PI_2);
        let start = Pose2::new(0.0, 0.0, 0.0);

        let after_arc = word.pose_at(start, FRAC_PI_2);
        assert_relative_eq!(after_arc.x, 1.0, epsilon = 1e-12);
        assert_relative_eq!(after_arc.y, 1.0, epsilon = 1e-12);

        let mid_straight = word.pose_at(start, FRAC_PI_2 + 1.0);
        assert_relative_eq!(mid_straight.x, 1.0, epsilon = 1e-12);
        assert_relative_eq!(mid_straight.y, 2.0, epsilon = 1e-12);

        let end = word.pose_at(start, word.total_length);
        let direct = word.end_pose(start);
        assert_relative_eq!(end.x, direct.x, epsilon = 1e-12);
        assert_relative_eq!(end.y, direct.y, epsilon = 1e-12);
        assert_relative_eq!(end.yaw, direct.yaw, epsilon = 1e-12);
    }

    #[test]
    fn from_signed_marks_reverse_segments() {
        let word = CurveWord::from_signed(1.0, [(TurnKind::Straight, -5.0)]);
        assert_eq!(word.segments.len(), 1);
        assert_eq!(word.segments[0].direction, Direction::Reverse);
        assert_relative_eq!(word.segments[0].length, 5.0);
        assert_relative_eq!(word.total_length, 5.0);
        assert_relative_eq!(word.segments[0].signed_length(), -5.0);
    }

    #[test]
    fn empty_word_stays_put() {
        let word = CurveWord::empty(1.5);
        let start = Pose2::new(4.0, 5.0, 1.0);
        assert_eq!(word.pose_at(start, 0.0), start);
        assert_relative_eq!(word.total_length, 0.0);
    }
}
