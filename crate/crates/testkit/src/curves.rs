//! Discretized brute-force search for shortest bounded-curvature paths.
//!
//! The search enumerates candidate word shapes (turn/straight sequences
//! with at most three free parameters each), seeds every shape from a
//! coarse parameter grid, and polishes each seed with a damped Newton
//! iteration on the three endpoint equations. The minimum over all
//! converged, feasible candidates approximates the true optimum to well
//! below 1e-6, which makes the result usable as a reference value.
//!
//! Segment kinematics are implemented here via an explicit
//! rotation-about-the-turning-center construction, deliberately different
//! from the incremental form a solver would typically use.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Steering of one segment at unit turning radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Steer {
    Left,
    Straight,
    Right,
}

/// One slot of a word shape.
#[derive(Clone, Copy, Debug)]
enum Slot {
    /// Signed parameter chosen by the search; index into the free vector.
    Free(Steer, usize),
    /// Constant signed parameter (the quarter arcs of the five-segment
    /// families).
    Fixed(Steer, f64),
    /// Parameter tied to a free slot: `sign * free[index]`.
    Linked(Steer, usize, f64),
}

#[derive(Clone, Debug)]
struct Shape {
    slots: Vec<Slot>,
    /// Number of free parameters that are arcs (the rest are straights);
    /// arcs always come first in the free vector by construction.
    free_arcs: usize,
    free_total: usize,
}

/// Signed-arclength drive of one segment from `(x, y, heading)` at unit
/// radius, rotating the pose about the turning center.
fn drive(state: (f64, f64, f64), steer: Steer, s: f64) -> (f64, f64, f64) {
    let (x, y, th) = state;
    match steer {
        Steer::Straight => (x + s * th.cos(), y + s * th.sin(), th),
        Steer::Left => {
            let (cx, cy) = (x - th.sin(), y + th.cos());
            let (sa, ca) = s.sin_cos();
            let (dx, dy) = (x - cx, y - cy);
            (cx + dx * ca - dy * sa, cy + dx * sa + dy * ca, th + s)
        }
        Steer::Right => {
            let (cx, cy) = (x + th.sin(), y - th.cos());
            let (sa, ca) = (-s).sin_cos();
            let (dx, dy) = (x - cx, y - cy);
            (cx + dx * ca - dy * sa, cy + dx * sa + dy * ca, th - s)
        }
    }
}

/// Angle difference wrapped through the unit circle, immune to the wrap
/// conventions of whatever produced the inputs.
fn angle_diff(a: f64, b: f64) -> f64 {
    let d = a - b;
    d.sin().atan2(d.cos())
}

impl Shape {
    fn word(letters: &[Steer]) -> Self {
        // Arcs take the low free indices so the grid sweep can pick the
        // right parameter range per index.
        let arcs = letters.iter().filter(|&&s| s != Steer::Straight).count();
        let (mut next_arc, mut next_straight) = (0, arcs);
        let slots = letters
            .iter()
            .map(|&s| {
                let idx = if s == Steer::Straight {
                    let i = next_straight;
                    next_straight += 1;
                    i
                } else {
                    let i = next_arc;
                    next_arc += 1;
                    i
                };
                Slot::Free(s, idx)
            })
            .collect();
        Shape {
            slots,
            free_arcs: arcs,
            free_total: letters.len(),
        }
    }

    fn end(&self, free: &[f64; 3]) -> (f64, f64, f64) {
        let mut state = (0.0, 0.0, 0.0);
        for slot in &self.slots {
            let (steer, s) = match *slot {
                Slot::Free(steer, i) => (steer, free[i]),
                Slot::Fixed(steer, v) => (steer, v),
                Slot::Linked(steer, i, sign) => (steer, sign * free[i]),
            };
            state = drive(state, steer, s);
        }
        state
    }

    fn length(&self, free: &[f64; 3]) -> f64 {
        self.slots
            .iter()
            .map(|slot| match *slot {
                Slot::Free(_, i) => free[i].abs(),
                Slot::Fixed(_, v) => v.abs(),
                Slot::Linked(_, i, _) => free[i].abs(),
            })
            .sum()
    }
}

/// Brute-force reference for one car model.
pub struct CurveOracle {
    shapes: Vec<Shape>,
    /// Arcs may not run in reverse for a forward-only car.
    forward_only: bool,
}

impl CurveOracle {
    /// Forward-only car: the six three-segment words.
    pub fn dubins() -> Self {
        use Steer::{Left as L, Right as R, Straight as S};
        let shapes = [
            [L, S, L],
            [R, S, R],
            [L, S, R],
            [R, S, L],
            [R, L, R],
            [L, R, L],
        ]
        .iter()
        .map(|w| Shape::word(w))
        .collect();
        CurveOracle {
            shapes,
            forward_only: true,
        }
    }

    /// Car with a reverse gear: three-segment words plus the four- and
    /// five-segment families (equal-arc pairs and fixed quarter arcs).
    pub fn reeds_shepp() -> Self {
        use Steer::{Left as L, Right as R, Straight as S};
        let mut shapes: Vec<Shape> = [
            [L, S, L],
            [R, S, R],
            [L, S, R],
            [R, S, L],
            [R, L, R],
            [L, R, L],
        ]
        .iter()
        .map(|w| Shape::word(w))
        .collect();

        // Four arcs with tied middle magnitudes: C C(u) C(±u) C.
        for (a, b) in [(L, R), (R, L)] {
            for sign in [-1.0, 1.0] {
                shapes.push(Shape {
                    slots: vec![
                        Slot::Free(a, 0),
                        Slot::Free(b, 1),
                        Slot::Linked(a, 1, sign),
                        Slot::Free(b, 2),
                    ],
                    free_arcs: 3,
                    free_total: 3,
                });
            }
        }

        // Turn, quarter arc, straight, turn - in both segment orders, both
        // quarter-arc signs, and both mirror images. Free order: arcs
        // first, straight last.
        for q in [-FRAC_PI_2, FRAC_PI_2] {
            for (a, b) in [(L, R), (R, L)] {
                for last in [a, b] {
                    shapes.push(Shape {
                        slots: vec![
                            Slot::Free(a, 0),
                            Slot::Fixed(b, q),
                            Slot::Free(S, 2),
                            Slot::Free(last, 1),
                        ],
                        free_arcs: 2,
                        free_total: 3,
                    });
                    shapes.push(Shape {
                        slots: vec![
                            Slot::Free(last, 1),
                            Slot::Free(S, 2),
                            Slot::Fixed(b, q),
                            Slot::Free(a, 0),
                        ],
                        free_arcs: 2,
                        free_total: 3,
                    });
                }
            }
        }

        // Five segments with two fixed quarter arcs.
        for q in [-FRAC_PI_2, FRAC_PI_2] {
            for (a, b) in [(L, R), (R, L)] {
                shapes.push(Shape {
                    slots: vec![
                        Slot::Free(a, 0),
                        Slot::Fixed(b, q),
                        Slot::Free(S, 2),
                        Slot::Fixed(a, q),
                        Slot::Free(b, 1),
                    ],
                    free_arcs: 2,
                    free_total: 3,
                });
            }
        }

        CurveOracle {
            shapes,
            forward_only: false,
        }
    }

    /// Length of the shortest path found from `a` to `b` (poses given as
    /// `(x, y, yaw)`) at minimum turning radius `radius`, in meters.
    pub fn shortest(&self, a: (f64, f64, f64), b: (f64, f64, f64), radius: f64) -> f64 {
        // Goal in the start frame at unit radius.
        let dx = (b.0 - a.0) / radius;
        let dy = (b.1 - a.1) / radius;
        let (sin_a, cos_a) = a.2.sin_cos();
        let goal = (
            dx * cos_a + dy * sin_a,
            -dx * sin_a + dy * cos_a,
            angle_diff(b.2, a.2),
        );

        let reach = goal.0.hypot(goal.1) + 8.0;
        let mut best = f64::INFINITY;
        for shape in &self.shapes {
            self.sweep_shape(shape, goal, reach, &mut best);
        }
        best * radius
    }

    fn sweep_shape(&self, shape: &Shape, goal: (f64, f64, f64), reach: f64, best: &mut f64) {
        const ARC_STEPS: usize = 9;
        const STRAIGHT_STEPS: usize = 9;

        let arc_grid: Vec<f64> = if self.forward_only {
            (0..ARC_STEPS)
                .map(|i| TAU * (i as f64 + 0.5) / ARC_STEPS as f64)
                .collect()
        } else {
            (0..ARC_STEPS)
                .map(|i| -PI + TAU * (i as f64 + 0.5) / ARC_STEPS as f64)
                .collect()
        };
        let straight_grid: Vec<f64> = if self.forward_only {
            (0..STRAIGHT_STEPS)
                .map(|i| reach * (i as f64 + 0.5) / STRAIGHT_STEPS as f64)
                .collect()
        } else {
            (0..STRAIGHT_STEPS)
                .map(|i| -reach + 2.0 * reach * (i as f64 + 0.5) / STRAIGHT_STEPS as f64)
                .collect()
        };

        let grid_for = |i: usize| -> &[f64] {
            if i < shape.free_arcs {
                &arc_grid
            } else {
                &straight_grid
            }
        };

        // Up to three nested grids; unused dimensions get a single zero.
        let dims: Vec<&[f64]> = (0..3)
            .map(|i| {
                if i < shape.free_total {
                    grid_for(i)
                } else {
                    &[0.0][..]
                }
            })
            .collect();

        for &p0 in dims[0] {
            for &p1 in dims[1] {
                for &p2 in dims[2] {
                    if let Some(free) = self.refine(shape, goal, [p0, p1, p2]) {
                        let len = shape.length(&free);
                        if len < *best {
                            *best = len;
                        }
                    }
                }
            }
        }
    }

    /// Damped Newton on the endpoint equations. Returns canonicalized free
    /// parameters on convergence, `None` otherwise.
    fn refine(&self, shape: &Shape, goal: (f64, f64, f64), start: [f64; 3]) -> Option<[f64; 3]> {
        const TOL: f64 = 1e-11;
        const H: f64 = 1e-7;
        let residual = |p: &[f64; 3]| -> [f64; 3] {
            let end = shape.end(p);
            [
                end.0 - goal.0,
                end.1 - goal.1,
                angle_diff(end.2, goal.2),
            ]
        };

        let mut p = start;
        let mut converged = false;
        for _ in 0..30 {
            let r = residual(&p);
            let norm = r[0].abs().max(r[1].abs()).max(r[2].abs());
            if norm < TOL {
                converged = true;
                break;
            }
            // Forward-difference Jacobian over the active free parameters.
            let mut jac = [[0.0f64; 3]; 3];
            for j in 0..shape.free_total {
                let mut pj = p;
                pj[j] += H;
                let rj = residual(&pj);
                for i in 0..3 {
                    jac[i][j] = (rj[i] - r[i]) / H;
                }
            }
            for j in shape.free_total..3 {
                jac[j][j] = 1.0; // keep the system square; spare rows solve to zero
            }
            let delta = solve3(&jac, &[-r[0], -r[1], -r[2]])?;
            let scale = {
                let norm = (delta[0] * delta[0] + delta[1] * delta[1] + delta[2] * delta[2]).sqrt();
                if norm > 1.5 {
                    1.5 / norm
                } else {
                    1.0
                }
            };
            for i in 0..3 {
                p[i] += scale * delta[i];
            }
            if scale == 1.0 && delta.iter().all(|d| d.abs() < 1e-14) {
                break;
            }
        }
        if !converged {
            let r = residual(&p);
            if r[0].abs().max(r[1].abs()).max(r[2].abs()) >= TOL {
                return None;
            }
        }
        self.canonicalize(shape, p)
    }

    /// Wraps arc parameters onto their canonical interval (a 2*pi shift
    /// never moves the endpoint) and enforces feasibility for the
    /// forward-only car.
    fn canonicalize(&self, shape: &Shape, mut p: [f64; 3]) -> Option<[f64; 3]> {
        for i in 0..shape.free_total {
            let is_arc = i < shape.free_arcs;
            if is_arc {
                if self.forward_only {
                    let mut v = p[i].rem_euclid(TAU);
                    if v > TAU - 1e-9 {
                        v = 0.0;
                    }
                    p[i] = v;
                } else {
                    // Shift into [-pi, pi]; linked slots shift consistently
                    // only by even multiples, so wrap via the same rule the
                    // endpoint map is invariant under.
                    let mut v = p[i] % TAU;
                    if v > PI {
                        v -= TAU;
                    } else if v < -PI {
                        v += TAU;
                    }
                    p[i] = v;
                }
            } else if self.forward_only && p[i] < -1e-12 {
                return None;
            } else if self.forward_only {
                p[i] = p[i].max(0.0);
            }
        }
        Some(p)
    }
}

fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if det.abs() < 1e-14 {
        return None;
    }
    let inv = 1.0 / det;
    let dx = b[0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (b[1] * a[2][2] - a[1][2] * b[2])
        + a[0][2] * (b[1] * a[2][1] - a[1][1] * b[2]);
    let dy = a[0][0] * (b[1] * a[2][2] - a[1][2] * b[2])
        - b[0] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * b[2] - b[1] * a[2][0]);
    let dz = a[0][0] * (a[1][1] * b[2] - b[1] * a[2][1])
        - a[0][1] * (a[1][0] * b[2] - b[1] * a[2][0])
        + b[0] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    Some([dx * inv, dy * inv, dz * inv])
}

#[cfg(test)]
mod tests {
    use super::*;

    /// RK4 integration of the unicycle model, used purely to validate the
    /// closed-form `drive` above.
    fn drive_rk4(state: (f64, f64, f64), steer: Steer, s: f64) -> (f64, f64, f64) {
        let kappa = match steer {
            Steer::Left => 1.0,
            Steer::Straight => 0.0,
            Steer::Right => -1.0,
        };
        let dir = s.signum();
        let total = s.abs();
        let n = 2000;
        let h = total / n as f64;
        let f = |th: f64| (dir * th.cos(), dir * th.sin(), dir * kappa);
        let (mut x, mut y, mut th) = state;
        for _ in 0..n {
            let k1 = f(th);
            let k2 = f(th + 0.5 * h * k1.2);
            let k3 = f(th + 0.5 * h * k2.2);
            let k4 = f(th + h * k3.2);
            x += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            y += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
            th += h / 6.0 * (k1.2 + 2.0 * k2.2 + 2.0 * k3.2 + k4.2);
        }
        (x, y, th)
    }

    #[test]
    fn drive_matches_numerical_integration() {
        let cases = [
            ((0.0, 0.0, 0.0), Steer::Left, 1.3),
            ((1.0, -2.0, 0.7), Steer::Right, 2.9),
            ((0.5, 0.5, -1.2), Steer::Left, -1.8),
            ((-3.0, 1.0, 2.2), Steer::Right, -0.6),
            ((0.0, 0.0, 3.0), Steer::Straight, -4.0),
        ];
        for (start, steer, s) in cases {
            let exact = drive(start, steer, s);
            let numeric = drive_rk4(start, steer, s);
            assert!((exact.0 - numeric.0).abs() < 1e-9, "{exact:?} vs {numeric:?}");
            assert!((exact.1 - numeric.1).abs() < 1e-9);
            assert!(angle_diff(exact.2, numeric.2).abs() < 1e-9);
        }
    }

    #[test]
    fn dubins_oracle_reproduces_known_optima() {
        let oracle = CurveOracle::dubins();
        // Straight ahead.
        let len = oracle.shortest((0.0, 0.0, 0.0), (10.0, 0.0, 0.0), 1.5);
        assert!((len - 10.0).abs() < 1e-6, "straight: {len}");
        // Half circle onto the opposite heading.
        let len = oracle.shortest((0.0, 0.0, 0.0), (0.0, 3.0, PI), 1.5);
        assert!((len - 1.5 * PI).abs() < 1e-6, "half circle: {len}");
        // Turning around in place costs 7*pi/3 at unit radius.
        let len = oracle.shortest((0.0, 0.0, 0.0), (0.0, 0.0, PI), 1.0);
        assert!((len - 7.0 * PI / 3.0).abs() < 1e-6, "reversal: {len}");
    }

    #[test]
    fn reeds_shepp_oracle_reproduces_known_optima() {
        let oracle = CurveOracle::reeds_shepp();
        let len = oracle.shortest((0.0, 0.0, 0.0), (-5.0, 0.0, 0.0), 1.5);
        assert!((len - 5.0).abs() < 1e-6, "straight reverse: {len}");
        let len = oracle.shortest((0.0, 0.0, 0.0), (10.0, 0.0, 0.0), 1.5);
        assert!((len - 10.0).abs() < 1e-6, "straight forward: {len}");
    }
}
