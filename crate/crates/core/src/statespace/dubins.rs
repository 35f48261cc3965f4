//! Shortest bounded-curvature paths for a forward-only car, via the
//! classic six-word family {LSL, RSR, LSR, RSL, RLR, LRL} in the
//! normalized (d, alpha, beta) frame.

use super::curve::{CurveWord, TurnKind};
use super::{normalize_angle, Pose2};
use std::f64::consts::TAU;

/// Wraps an angle into [0, 2*pi). Dubins arcs are forward-only, so arc
/// parameters live on this half-open interval.
fn mod2pi(angle: f64) -> f64 {
    angle.rem_euclid(TAU)
}

/// A first or last arc whose exact value is zero can come out of the
/// closed forms as a hair below 2*pi (a -1e-16 pushed around the circle
/// by `mod2pi`), inflating the word by a full turn exactly when the goal
/// sits on a family boundary - e.g. re-solving from a point on the
/// word's own straight segment. Snap those back to zero; the endpoint
/// moves by the same sub-nanometer amount the wrap was hiding.
const FULL_TURN_SNAP: f64 = 1e-9;

/// Squared straight lengths may land a rounding error below zero at
/// tangency; treat them as the boundary case instead of "no solution".
const NEGATIVE_SQ_TOL: f64 = 1e-12;

fn snap_full_turn(arc: f64) -> f64 {
    if arc > TAU - FULL_TURN_SNAP {
        0.0
    } else {
        arc
    }
}

type Params = [f64; 3];

/// Straight length from its squared form, rejecting genuine
/// infeasibility but forgiving tangency roundoff.
fn straight_len(p_sq: f64) -> Option<f64> {
    if p_sq < -NEGATIVE_SQ_TOL {
        return None;
    }
    Some(p_sq.max(0.0).sqrt())
}

/// Below this straight length the two turning circles coincide to
/// machine precision and the tangent heading is numerically undefined;
/// the word degenerates to a single fused arc.
const FUSED_ARC_TOL: f64 = 1e-12;

fn lsl(d: f64, alpha: f64, beta: f64) -> Option<Params> {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let p = straight_len(2.0 + d * d - 2.0 * (alpha - beta).cos() + 2.0 * d * (sa - sb))?;
    if p < FUSED_ARC_TOL {
        // Coincident left circles: one arc covers the whole turn.
        return Some([mod2pi(beta - alpha), p, 0.0]);
    }
    let heading = (cb - ca).atan2(d + sa - sb);
    Some([
        snap_full_turn(mod2pi(-alpha + heading)),
        p,
        snap_full_turn(mod2pi(beta - heading)),
    ])
}

fn rsr(d: f64, alpha: f64, beta: f64) -> Option<Params> {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let p = straight_len(2.0 + d * d - 2.0 * (alpha - beta).cos() + 2.0 * d * (sb - sa))?;
    if p < FUSED_ARC_TOL {
        return Some([mod2pi(alpha - beta), p, 0.0]);
    }
    let heading = (ca - cb).atan2(d - sa + sb);
    Some([
        snap_full_turn(mod2pi(alpha - heading)),
        p,
        snap_full_turn(mod2pi(heading - beta)),
    ])
}

fn lsr(d: f64, alpha: f64, beta: f64) -> Option<Params> {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let p = straight_len(-2.0 + d * d + 2.0 * (alpha - beta).cos() + 2.0 * d * (sa + sb))?;
    let heading = (-ca - cb).atan2(d + sa + sb) - (-2.0f64).atan2(p);
    Some([
        snap_full_turn(mod2pi(-alpha + heading)),
        p,
        snap_full_turn(mod2pi(heading - beta)),
    ])
}

fn rsl(d: f64, alpha: f64, beta: f64) -> Option<Params> {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let p = straight_len(-2.0 + d * d + 2.0 * (alpha - beta).cos() - 2.0 * d * (sa + sb))?;
    let heading = (ca + cb).atan2(d - sa - sb) - 2.0f64.atan2(p);
    Some([
        snap_full_turn(mod2pi(alpha - heading)),
        p,
        snap_full_turn(mod2pi(beta - heading)),
    ])
}

fn rlr(d: f64, alpha: f64, beta: f64) -> Option<Params> {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let mid = (6.0 - d * d + 2.0 * (alpha - beta).cos() + 2.0 * d * (sa - sb)) / 8.0;
    if mid.abs() > 1.0 {
        return None;
    }
    let p = mod2pi(TAU - mid.acos());
    let t = snap_full_turn(mod2pi(alpha - (ca - cb).atan2(d - sa + sb) + p / 2.0));
    Some([t, p, snap_full_turn(mod2pi(alpha - beta - t + p))])
}

fn lrl(d: f64, alpha: f64, beta: f64) -> Option<Params> {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let mid = (6.0 - d * d + 2.0 * (alpha - beta).cos() + 2.0 * d * (sb - sa)) / 8.0;
    if mid.abs() > 1.0 {
        return None;
    }
    let p = mod2pi(TAU - mid.acos());
    let t = snap_full_turn(mod2pi(-alpha + (cb - ca).atan2(d + sa - sb) + p / 2.0));
    Some([t, p, snap_full_turn(mod2pi(beta - alpha - t + p))])
}

const FAMILIES: [(
    fn(f64, f64, f64) -> Option<Params>,
    [TurnKind; 3],
); 6] = {
    use TurnKind::{Left as L, Right as R, Straight as S};
    [
        (lsl, [L, S, L]),
        (rsr, [R, S, R]),
        (lsr, [L, S, R]),
        (rsl, [R, S, L]),
        (rlr, [R, L, R]),
        (lrl, [L, R, L]),
    ]
};

/// Shortest forward-only path of curvature at most `1/radius` from `a`
/// to `b`. A solution exists for every pair of poses; ties between
/// families resolve to the first in {LSL, RSR, LSR, RSL, RLR, LRL}.
pub fn dubins_path(a: Pose2, b: Pose2, radius: f64) -> CurveWord {
    debug_assert!(radius > 0.0, "turning radius must be positive");
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let d = dx.hypot(dy) / radius;
    if d < 1e-12 && normalize_angle(b.yaw - a.yaw).abs() < 1e-12 {
        return CurveWord::empty(radius);
    }
    let heading = dy.atan2(dx);
    let alpha = mod2pi(a.yaw - heading);
    let beta = mod2pi(b.yaw - heading);

    let mut best: Option<(f64, Params, [TurnKind; 3])> = None;
    for (solve, kinds) in FAMILIES {
        if let Some(params) = solve(d, alpha, beta) {
            let length: f64 = params.iter().sum();
            if best.as_ref().is_none_or(|(len, _, _)| length < *len) {
                best = Some((length, params, kinds));
            }
        }
    }
    let (_, params, kinds) = best.expect("some Dubins family solves every pose pair");
    CurveWord::from_signed(radius, kinds.into_iter().zip(params.into_iter().map(|p| p * radius)))
}
