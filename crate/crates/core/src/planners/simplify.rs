//! Path post-processing: random shortcutting and arclength resampling.

use super::{Checker, Path, Problem};
use crate::rng::ChaCha8Rng;
use crate::statespace::{State, StateSpace};
use rand::Rng;

/// Where an arclength coordinate lands on a path: on a vertex, or at an
/// interpolated state strictly inside segment `seg`.
enum Anchor {
    Vertex(usize),
    Interior { seg: usize, state: State },
}

/// Snap window for treating an arclength draw as an existing vertex,
/// as a fraction of the containing segment.
const VERTEX_SNAP: f64 = 1e-9;

/// Minimum metric improvement a shortcut must deliver to be accepted;
/// guarantees the path never grows through float noise.
const MIN_GAIN: f64 = 1e-9;

fn cumulative_lengths(states: &[State], space: &StateSpace) -> Vec<f64> {
    let mut cums = Vec::with_capacity(states.len());
    let mut acc = 0.0;
    cums.push(0.0);
    for w in states.windows(2) {
        acc += space.metric(&w[0], &w[1]);
        cums.push(acc);
    }
    cums
}

/// Segment index and fractional position of arclength `s`.
fn locate(cums: &[f64], s: f64) -> (usize, f64) {
    let seg = match cums.partition_point(|&c| c <= s) {
        0 => 0,
        k => (k - 1).min(cums.len() - 2),
    };
    let len = cums[seg + 1] - cums[seg];
    let frac = if len > 0.0 {
        ((s - cums[seg]) / len).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (seg, frac)
}

fn anchor_at(states: &[State], cums: &[f64], s: f64, space: &StateSpace) -> Anchor {
    let (seg, frac) = locate(cums, s);
    if frac <= VERTEX_SNAP {
        Anchor::Vertex(seg)
    } else if frac >= 1.0 - VERTEX_SNAP {
        Anchor::Vertex(seg + 1)
    } else {
        let state = space
            .interpolate(&states[seg], &states[seg + 1], frac)
            .expect("path states always match their space");
        Anchor::Interior { seg, state }
    }
}

/// Randomized shortcutting: repeatedly picks two arclength positions on
/// the path and replaces the section between them with the direct
/// motion whenever that motion is collision-free and strictly shorter.
/// Endpoints are never touched and the result never exceeds the input
/// length.
pub fn shortcut_simplify(
    path: &Path,
    problem: &Problem,
    attempts: usize,
    rng: &mut ChaCha8Rng,
) -> Path {
    let mut ignored = 0;
    shortcut_simplify_counted(path, problem, attempts, rng, &mut ignored)
}

/// [`shortcut_simplify`] that also accumulates the motion-validity
/// queries it spent, so ensemble planners can report a faithful total.
pub(crate) fn shortcut_simplify_counted(
    path: &Path,
    problem: &Problem,
    attempts: usize,
    rng: &mut ChaCha8Rng,
    motion_checks: &mut u64,
) -> Path {
    assert_eq!(
        path.kind(),
        problem.space.kind(),
        "path kind must match the problem's space"
    );
    let space = &problem.space;
    let checker = Checker::new(problem);
    let mut states: Vec<State> = path.states().to_vec();

    for _ in 0..attempts {
        let cums = cumulative_lengths(&states, space);
        let total = *cums.last().expect("paths are never empty");
        if total < MIN_GAIN {
            break;
        }
        let mut u = rng.gen::<f64>() * total;
        let mut v = rng.gen::<f64>() * total;
        if u > v {
            std::mem::swap(&mut u, &mut v);
        }
        if v - u < MIN_GAIN {
            continue;
        }
        let a = anchor_at(&states, &cums, u, space);
        let b = anchor_at(&states, &cums, v, space);

        // The spliced path keeps `states[..pre_end]`, runs through
        // `middle`, and resumes at `states[suf_start + 1..]`.
        let pre_end = match a {
            Anchor::Vertex(k) => k,
            Anchor::Interior { seg, .. } => seg,
        };
        let suf_start = match b {
            Anchor::Vertex(k) => k,
            Anchor::Interior { seg, .. } => seg + 1,
        };
        if pre_end >= suf_start {
            // Both draws snapped to the same vertex.
            continue;
        }
        let mut middle = vec![states[pre_end]];
        if let Anchor::Interior { state, .. } = a {
            middle.push(state);
        }
        if let Anchor::Interior { state, .. } = b {
            middle.push(state);
        }
        middle.push(states[suf_start]);

        let old_span = cums[suf_start] - cums[pre_end];
        let new_span: f64 = middle.windows(2).map(|w| space.metric(&w[0], &w[1])).sum();
        if new_span >= old_span - MIN_GAIN {
            continue;
        }
        if !middle
            .windows(2)
            .all(|w| checker.motion_valid(&w[0], &w[1]))
        {
            continue;
        }

        let mut next = Vec::with_capacity(pre_end + middle.len() + states.len() - suf_start - 1);
        next.extend_from_slice(&states[..pre_end]);
        next.append(&mut middle);
        next.extend_from_slice(&states[suf_start + 1..]);
        states = next;
    }

    *motion_checks += checker.motion_checks();
    Path::new(states, path.kind())
}

/// Resamples `path` to exactly `count` states spaced evenly in
/// arclength. When `count` is at least the current vertex count the
/// original vertices are kept and each segment is subdivided, so the
/// geometry (and for straight-segment spaces, the length) is preserved;
/// with fewer states the path is re-traced uniformly and corners may be
/// cut. Endpoints are always kept exactly.
pub fn interpolate_path(path: &Path, count: usize, space: &StateSpace) -> Path {
    assert!(count >= 2, "an interpolated path needs at least two states");
    assert_eq!(
        path.kind(),
        space.kind(),
        "path kind must match the interpolating space"
    );
    let states = path.states();
    if count == 2 {
        return Path::new(vec![*path.first(), *path.terminal()], path.kind());
    }
    let cums = cumulative_lengths(states, space);
    let total = *cums.last().expect("paths are never empty");
    if total < 1e-12 {
        let mut out = vec![*path.first(); count];
        *out.last_mut().expect("count >= 2") = *path.terminal();
        return Path::new(out, path.kind());
    }

    if count >= states.len() {
        subdivide_segments(states, &cums, total, count, space, path.kind())
    } else {
        resample_uniform(states, &cums, total, count, space, path.kind())
    }
}

/// Distributes `count - vertices` new states over the segments by
/// largest remainder on segment length, then subdivides each segment
/// uniformly.
fn subdivide_segments(
    states: &[State],
    cums: &[f64],
    total: f64,
    count: usize,
    space: &StateSpace,
    kind: crate::statespace::SpaceKind,
) -> Path {
    let segments = states.len() - 1;
    let extra = count - states.len();
    let mut alloc = vec![0usize; segments];
    if extra > 0 {
        let mut assigned = 0;
        let mut remainders: Vec<(f64, usize)> = Vec::with_capacity(segments);
        for (i, w) in cums.windows(2).enumerate() {
            let quota = extra as f64 * (w[1] - w[0]) / total;
            let floor = quota.floor() as usize;
            alloc[i] = floor;
            assigned += floor;
            remainders.push((quota - floor as f64, i));
        }
        remainders.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        for &(_, i) in remainders.iter().take(extra - assigned) {
            alloc[i] += 1;
        }
    }

    let mut out = Vec::with_capacity(count);
    for (i, &inserted) in alloc.iter().enumerate() {
        out.push(states[i]);
        for j in 1..=inserted {
            let t = j as f64 / (inserted + 1) as f64;
            out.push(
                space
                    .interpolate(&states[i], &states[i + 1], t)
                    .expect("path states always match their space"),
            );
        }
    }
    out.push(*states.last().expect("paths are never empty"));
    debug_assert_eq!(out.len(), count);
    Path::new(out, kind)
}

/// Walks the path at `count` evenly spaced arclength targets. Original
/// interior vertices are dropped unless a target lands on them.
fn resample_uniform(
    states: &[State],
    cums: &[f64],
    total: f64,
    count: usize,
    space: &StateSpace,
    kind: crate::statespace::SpaceKind,
) -> Path {
    let mut out = Vec::with_capacity(count);
    out.push(states[0]);
    for k in 1..count - 1 {
        let target = total * k as f64 / (count - 1) as f64;
        let (seg, frac) = locate(cums, target);
        out.push(
            space
                .interpolate(&states[seg], &states[seg + 1], frac)
                .expect("path states always match their space"),
        );
    }
    out.push(*states.last().expect("paths are never empty"));
    Path::new(out, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collision::RobotBody;
    use crate::rng::rng_from_seed;
    use crate::statespace::Bounds;
    use crate::worldmap::build_octree;
    use crate::geom::Vec3;

    fn open_bounds() -> Bounds {
        Bounds::new(
            -20.0,
            20.0,
            -20.0,
            20.0,
            0.0,
            4.0,
            -std::f64::consts::PI,
            std::f64::consts::PI,
        )
        .expect("valid bounds")
    }

    fn empty_problem(space: StateSpace, start: State, goal: State) -> Problem {
        let map = build_octree(Vec::<[u32; 3]>::new(), 0.2, Vec3::new(-20.0, -20.0, 0.0));
        Problem::new(space, map, RobotBody::default(), start, goal).expect("valid endpoints")
    }

    #[test]
    fn straight_line_subdivides_into_even_gaps() {
        let space = StateSpace::se2(open_bounds());
        let path = Path::new(
            vec![State::planar(0.0, 0.0, 0.0), State::planar(10.0, 0.0, 0.0)],
            space.kind(),
        );
        let dense = interpolate_path(&path, 120, &space);
        assert_eq!(dense.states().len(), 120);
        let gap = 10.0 / 119.0;
        for w in dense.states().windows(2) {
            assert!((space.metric(&w[0], &w[1]) - gap).abs() < 1e-9);
        }
        assert_eq!(dense.first(), path.first());
        assert_eq!(dense.terminal(), path.terminal());
    }

    #[test]
    fn two_state_request_keeps_only_endpoints() {
        let space = StateSpace::se2(open_bounds());
        let path = Path::new(
            vec![
                State::planar(0.0, 0.0, 0.0),
                State::planar(3.0, 4.0, 1.0),
                State::planar(9.0, 2.0, 0.5),
            ],
            space.kind(),
        );
        let out = interpolate_path(&path, 2, &space);
        assert_eq!(out.states(), &[*path.first(), *path.terminal()]);
    }

    #[test]
    fn subdivision_preserves_polyline_length_and_corners() {
        let space = StateSpace::se2(open_bounds());
        let corner = State::planar(6.0, 0.0, 0.0);
        let path = Path::new(
            vec![
                State::planar(0.0, 0.0, 0.0),
                corner,
                State::planar(6.0, 5.0, 0.0),
            ],
            space.kind(),
        );
        let dense = interpolate_path(&path, 37, &space);
        assert_eq!(dense.states().len(), 37);
        assert!((dense.cost(&space) - path.cost(&space)).abs() < 1e-6);
        assert!(dense.states().contains(&corner));
    }

    #[test]
    fn shortcut_straightens_a_detour() {
        let space = StateSpace::se2(open_bounds());
        let start = State::planar(0.0, 0.0, 0.0);
        let goal = State::planar(10.0, 0.0, 0.0);
        let problem = empty_problem(space, start, goal);
        let detour = Path::new(
            vec![start, State::planar(5.0, 8.0, 0.0), goal],
            space.kind(),
        );
        let mut rng = rng_from_seed(7);
        let short = shortcut_simplify(&detour, &problem, 200, &mut rng);
        // In an empty map the detour collapses to nearly the segment.
        assert!(short.cost(&space) < detour.cost(&space));
        assert!(short.cost(&space) < 10.5);
        assert_eq!(short.first(), &start);
        assert_eq!(short.terminal(), &goal);
    }

    #[test]
    fn shortcut_never_lengthens_an_already_straight_path() {
        let space = StateSpace::se2(open_bounds());
        let start = State::planar(-9.0, 1.0, 0.2);
        let goal = State::planar(9.0, 1.5, -0.4);
        let problem = empty_problem(space, start, goal);
        let line = Path::new(vec![start, goal], space.kind());
        let before = line.cost(&space);
        let mut rng = rng_from_seed(11);
        let after = shortcut_simplify(&line, &problem, 300, &mut rng);
        assert!(after.cost(&space) <= before + 1e-9);
    }
}
