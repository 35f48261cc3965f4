//! Incremental kd-tree over positional coordinates.
//!
//! Planner metrics (curve lengths, weighted angles) are not positional
//! metrics, but every supported metric dominates the positional
//! Euclidean distance. That gives two usable query modes:
//!
//! * `within_positional(p, r)` returns a superset of any metric ball of
//!   radius `r`, which callers filter exactly;
//! * `k_nearest_positional` feeds an over-fetched candidate list that
//!   callers re-rank by the true metric (a documented approximation).
//!
//! Results are deterministic: ties break on the smaller id.

use crate::geom::Vec3;

const DIMS: usize = 3;

struct KdNode {
    point: [f64; 3],
    id: usize,
    left: Option<usize>,
    right: Option<usize>,
}

pub(crate) struct PositionIndex {
    nodes: Vec<KdNode>,
}

impl PositionIndex {
    pub fn new() -> Self {
        PositionIndex { nodes: Vec::new() }
    }

    pub fn insert(&mut self, id: usize, pos: Vec3) {
        let point = [pos.x, pos.y, pos.z];
        let new = self.nodes.len();
        self.nodes.push(KdNode {
            point,
            id,
            left: None,
            right: None,
        });
        if new == 0 {
            return;
        }
        let mut cur = 0;
        let mut axis = 0;
        loop {
            let side = if point[axis] < self.nodes[cur].point[axis] {
                &mut self.nodes[cur].left
            } else {
                &mut self.nodes[cur].right
            };
            match side {
                Some(next) => cur = *next,
                None => {
                    *side = Some(new);
                    return;
                }
            }
            axis = (axis + 1) % DIMS;
        }
    }

    /// Ids of all points within Euclidean distance `r` of `pos`
    /// (boundary inclusive), ascending by id.
    pub fn within_positional(&self, pos: Vec3, r: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if self.nodes.is_empty() {
            return out;
        }
        let q = [pos.x, pos.y, pos.z];
        let r_sq = r * r;
        let mut stack = vec![(0usize, 0usize)];
        while let Some((cur, axis)) = stack.pop() {
            let node = &self.nodes[cur];
            if dist_sq(&node.point, &q) <= r_sq {
                out.push(node.id);
            }
            let delta = q[axis] - node.point[axis];
            let next_axis = (axis + 1) % DIMS;
            let (near, far) = if delta < 0.0 {
                (node.left, node.right)
            } else {
                (node.right, node.left)
            };
            if let Some(n) = near {
                stack.push((n, next_axis));
            }
            if delta * delta <= r_sq {
                if let Some(f) = far {
                    stack.push((f, next_axis));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The `k` positionally nearest points as (distance², id), ascending
    /// by distance then id.
    pub fn k_nearest_positional(&self, pos: Vec3, k: usize) -> Vec<(f64, usize)> {
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
        if self.nodes.is_empty() || k == 0 {
            return best;
        }
        let q = [pos.x, pos.y, pos.z];
        self.knn_descend(0, 0, &q, k, &mut best);
        best
    }

    fn knn_descend(
        &self,
        cur: usize,
        axis: usize,
        q: &[f64; 3],
        k: usize,
        best: &mut Vec<(f64, usize)>,
    ) {
        let node = &self.nodes[cur];
        let d = dist_sq(&node.point, q);
        let entry = (d, node.id);
        let at = best.partition_point(|e| (e.0, e.1) < entry);
        best.insert(at, entry);
        best.truncate(k);

        let delta = q[axis] - node.point[axis];
        let next_axis = (axis + 1) % DIMS;
        let (near, far) = if delta < 0.0 {
            (node.left, node.right)
        } else {
            (node.right, node.left)
        };
        if let Some(n) = near {
            self.knn_descend(n, next_axis, q, k, best);
        }
        let worst = best.last().map(|e| e.0).unwrap_or(f64::INFINITY);
        if best.len() < k || delta * delta <= worst {
            if let Some(f) = far {
                self.knn_descend(f, next_axis, q, k, best);
            }
        }
    }
}

fn dist_sq(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..DIMS).map(|i| (a[i] - b[i]) * (a[i] - b[i])).sum()
}
