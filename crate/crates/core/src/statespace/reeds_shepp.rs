//! Shortest bounded-curvature paths for a car with a reverse gear.
//!
//! The canonical word families are solved in a unit-radius frame with the
//! start at the origin, then expanded through the three path symmetries
//! (timeflip, reflection, reversal) to cover the full published word set.
//! Every candidate is executed before it may win, so a branch outside its
//! validity region is rejected by the landing check instead of producing a
//! malformed word.

use super::curve::{advance, CurveWord, TurnKind};
use super::{normalize_angle, Pose2};
use std::f64::consts::{FRAC_PI_2, PI};

const MAX_SEGMENTS: usize = 5;
/// Landing tolerance in unit-radius coordinates. Valid closed-form branches
/// land within ~1e-12; invalid branches miss by O(1).
const LANDING_TOL: f64 = 1e-7;

/// A candidate word in unit-radius coordinates: signed segment parameters,
/// negative meaning reverse travel.
#[derive(Clone, Copy)]
struct Word {
    kinds: [TurnKind; MAX_SEGMENTS],
    params: [f64; MAX_SEGMENTS],
    len: usize,
}

impl Word {
    fn new(parts: &[(TurnKind, f64)]) -> Self {
        let mut kinds = [TurnKind::Straight; MAX_SEGMENTS];
        let mut params = [0.0; MAX_SEGMENTS];
        for (i, &(kind, param)) in parts.iter().enumerate() {
            kinds[i] = kind;
            params[i] = param;
        }
        Word {
            kinds,
            params,
            len: parts.len(),
        }
    }

    fn total(&self) -> f64 {
        self.params[..self.len].iter().map(|p| p.abs()).sum()
    }

    /// Drive every segment in reverse: same letters, negated parameters.
    fn timeflip(mut self) -> Self {
        for p in &mut self.params[..self.len] {
            *p = -*p;
        }
        self
    }

    /// Mirror across the x-axis: left and right turns swap.
    fn reflect(mut self) -> Self {
        for k in &mut self.kinds[..self.len] {
            *k = match *k {
                TurnKind::Left => TurnKind::Right,
                TurnKind::Right => TurnKind::Left,
                TurnKind::Straight => TurnKind::Straight,
            };
        }
        self
    }

    /// Traverse the word from the other end.
    fn reversed(mut self) -> Self {
        self.kinds[..self.len].reverse();
        self.params[..self.len].reverse();
        self
    }

    fn lands_on(&self, x: f64, y: f64, phi: f64) -> bool {
        let mut pose = Pose2::new(0.0, 0.0, 0.0);
        for i in 0..self.len {
            pose = advance(pose, self.kinds[i], 1.0, self.params[i]);
        }
        (pose.x - x).abs() <= LANDING_TOL
            && (pose.y - y).abs() <= LANDING_TOL
            && normalize_angle(pose.yaw - phi).abs() <= LANDING_TOL
    }
}

fn polar(x: f64, y: f64) -> (f64, f64) {
    (x.hypot(y), y.atan2(x))
}

/// Shared tail of the four-arc families.
fn tau_omega(u: f64, v: f64, xi: f64, eta: f64, phi: f64) -> (f64, f64) {
    let delta = normalize_angle(u - v);
    let a = u.sin() - delta.sin();
    let b = u.cos() - delta.cos() - 1.0;
    let t1 = (eta * a - xi * b).atan2(xi * a + eta * b);
    let t2 = 2.0 * (delta.cos() - v.cos() - u.cos()) + 3.0;
    let tau = if t2 < 0.0 {
        normalize_angle(t1 + PI)
    } else {
        normalize_angle(t1)
    };
    (tau, normalize_angle(tau - u + v - phi))
}

type Emit<'a> = &'a mut dyn FnMut(Word);

/// Turn, straight, turn on the same side: L S L.
fn csc_same(x: f64, y: f64, phi: f64, emit: Emit) {
    let (u, t) = polar(x - phi.sin(), y - 1.0 + phi.cos());
    let v = normalize_angle(phi - t);
    emit(Word::new(&[
        (TurnKind::Left, t),
        (TurnKind::Straight, u),
        (TurnKind::Left, v),
    ]));
}

/// Turn, straight, turn on opposite sides: L S R.
fn csc_opposite(x: f64, y: f64, phi: f64, emit: Emit) {
    let (r1, t1) = polar(x + phi.sin(), y - 1.0 - phi.cos());
    let sq = r1 * r1;
    if sq < 4.0 {
        return;
    }
    let u = (sq - 4.0).sqrt();
    let t = normalize_angle(t1 + 2.0f64.atan2(u));
    let v = normalize_angle(t - phi);
    emit(Word::new(&[
        (TurnKind::Left, t),
        (TurnKind::Straight, u),
        (TurnKind::Right, v),
    ]));
}

/// Three mutually tangent arcs: L R L with the middle arc in reverse.
fn ccc(x: f64, y: f64, phi: f64, emit: Emit) {
    let xi = x - phi.sin();
    let eta = y - 1.0 + phi.cos();
    let (r1, theta) = polar(xi, eta);
    if r1 > 4.0 {
        return;
    }
    let u = -2.0 * (0.25 * r1).asin();
    let t = normalize_angle(theta + 0.5 * u + PI);
    let v = normalize_angle(phi - t + u);
    emit(Word::new(&[
        (TurnKind::Left, t),
        (TurnKind::Right, u),
        (TurnKind::Left, v),
    ]));
}

/// Four arcs with equal-magnitude, opposite-sign middle arcs: L R L R.
fn cccc_opposite(x: f64, y: f64, phi: f64, emit: Emit) {
    let xi = x + phi.sin();
    let eta = y - 1.0 - phi.cos();
    let rho = 0.25 * (2.0 + (xi * xi + eta * eta).sqrt());
    if rho > 1.0 {
        return;
    }
    for u in [rho.acos(), -rho.acos()] {
        let (t, v) = tau_omega(u, -u, xi, eta, phi);
        emit(Word::new(&[
            (TurnKind::Left, t),
            (TurnKind::Right, u),
            (TurnKind::Left, -u),
            (TurnKind::Right, v),
        ]));
    }
}

/// Four arcs with equal middle arcs: L R L R.
fn cccc_same(x: f64, y: f64, phi: f64, emit: Emit) {
    let xi = x + phi.sin();
    let eta = y - 1.0 - phi.cos();
    let rho = (20.0 - xi * xi - eta * eta) / 16.0;
    if !(0.0..=1.0).contains(&rho) {
        return;
    }
    for u in [-rho.acos(), rho.acos()] {
        let (t, v) = tau_omega(u, u, xi, eta, phi);
        emit(Word::new(&[
            (TurnKind::Left, t),
            (TurnKind::Right, u),
            (TurnKind::Left, u),
            (TurnKind::Right, v),
        ]));
    }
}

/// Turn, reverse quarter arc, straight, turn: L R S L.
fn ccsc_same(x: f64, y: f64, phi: f64, emit: Emit) {
    let xi = x - phi.sin();
    let eta = y - 1.0 + phi.cos();
    let (rho, theta) = polar(xi, eta);
    if rho < 2.0 {
        return;
    }
    let r = (rho * rho - 4.0).sqrt();
    let u = 2.0 - r;
    let t = normalize_angle(theta + r.atan2(-2.0));
    let v = normalize_angle(phi - FRAC_PI_2 - t);
    emit(Word::new(&[
        (TurnKind::Left, t),
        (TurnKind::Right, -FRAC_PI_2),
        (TurnKind::Straight, u),
        (TurnKind::Left, v),
    ]));
}

/// Turn, reverse quarter arc, straight, turn: L R S R.
fn ccsc_opposite(x: f64, y: f64, phi: f64, emit: Emit) {
    let xi = x + phi.sin();
    let eta = y - 1.0 - phi.cos();
    let (rho, theta) = polar(-eta, xi);
    if rho < 2.0 {
        return;
    }
    let t = theta;
    let u = 2.0 - rho;
    let v = normalize_angle(t + FRAC_PI_2 - phi);
    emit(Word::new(&[
        (TurnKind::Left, t),
        (TurnKind::Right, -FRAC_PI_2),
        (TurnKind::Straight, u),
        (TurnKind::Right, v),
    ]));
}

/// Five segments with two reverse quarter arcs: L R S L R.
fn ccscc(x: f64, y: f64, phi: f64, emit: Emit) {
    let xi = x + phi.sin();
    let eta = y - 1.0 - phi.cos();
    let rho_sq = xi * xi + eta * eta;
    if rho_sq < 4.0 {
        return;
    }
    let u = 4.0 - (rho_sq - 4.0).sqrt();
    let t = normalize_angle(((4.0 - u) * xi - 2.0 * eta).atan2(-2.0 * xi + (u - 4.0) * eta));
    let v = normalize_angle(t - phi);
    emit(Word::new(&[
        (TurnKind::Left, t),
        (TurnKind::Right, -FRAC_PI_2),
        (TurnKind::Straight, u),
        (TurnKind::Left, -FRAC_PI_2),
        (TurnKind::Right, v),
    ]));
}

const BASES: [fn(f64, f64, f64, Emit); 8] = [
    csc_same,
    csc_opposite,
    ccc,
    cccc_opposite,
    cccc_same,
    ccsc_same,
    ccsc_opposite,
    ccscc,
];

/// Runs every base family through the eight symmetry variants.
fn expand(x: f64, y: f64, phi: f64, mut consider: impl FnMut(Word)) {
    let (sin_phi, cos_phi) = phi.sin_cos();
    // The reversal symmetry maps the goal to its image seen from the far
    // end of the path; the map is an involution.
    let xb = x * cos_phi + y * sin_phi;
    let yb = x * sin_phi - y * cos_phi;
    for base in BASES {
        for backwards in [false, true] {
            let (px, py) = if backwards { (xb, yb) } else { (x, y) };
            for timeflip in [false, true] {
                for reflect in [false, true] {
                    let (fx, fy, fphi) = match (timeflip, reflect) {
                        (false, false) => (px, py, phi),
                        (true, false) => (-px, py, -phi),
                        (false, true) => (px, -py, -phi),
                        (true, true) => (-px, -py, phi),
                    };
                    base(fx, fy, fphi, &mut |mut word: Word| {
                        if timeflip {
                            word = word.timeflip();
                        }
                        if reflect {
                            word = word.reflect();
                        }
                        if backwards {
                            word = word.reversed();
                        }
                        consider(word);
                    });
                }
            }
        }
    }
}

/// Shortest path of curvature at most `1/radius` from `a` to `b` for a car
/// that may drive in reverse. Never longer than [`dubins_path`] on the same
/// query, and symmetric in its endpoints.
///
/// [`dubins_path`]: super::dubins_path
pub fn reeds_shepp_path(a: Pose2, b: Pose2, radius: f64) -> CurveWord {
    debug_assert!(radius > 0.0, "turning radius must be positive");
    let dx = (b.x - a.x) / radius;
    let dy = (b.y - a.y) / radius;
    let (sin_a, cos_a) = a.yaw.sin_cos();
    let x = dx * cos_a + dy * sin_a;
    let y = -dx * sin_a + dy * cos_a;
    let phi = normalize_angle(b.yaw - a.yaw);
    if x.abs() < 1e-12 && y.abs() < 1e-12 && phi.abs() < 1e-12 {
        return CurveWord::empty(radius);
    }

    let mut best: Option<Word> = None;
    let mut best_len = f64::INFINITY;
    expand(x, y, phi, |word| {
        let len = word.total();
        // Strict improvement keeps the first of any tie, which makes the
        // choice deterministic across runs.
        if len + 1e-12 < best_len && word.lands_on(x, y, phi) {
            best_len = len;
            best = Some(word);
        }
    });

    match best {
        Some(word) => CurveWord::from_signed(
            radius,
            (0..word.len).map(|i| (word.kinds[i], word.params[i] * radius)),
        ),
        // Unreachable for well-formed inputs: the forward-only solution is
        // itself a valid word here, so degrade gracefully instead of
        // panicking deep inside a planner.
        None => super::dubins::dubins_path(a, b, radius),
    }
}
