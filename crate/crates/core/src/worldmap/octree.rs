//! Sparse binary occupancy octree over a cubic power-of-two lattice.

use crate::geom::{Aabb, Obb, Vec3};
use std::collections::HashSet;

/// One octree node. Occupied leaves exist only at the unit-voxel level,
/// so a leaf cube in a query is always exactly `resolution` wide; free
/// leaves prune whole empty octants at any level.
#[derive(Clone, Debug, PartialEq)]
pub(super) enum Node {
    Free,
    Occupied,
    Internal(Box<[Node; 8]>),
}

impl Node {
    fn eight_free() -> Box<[Node; 8]> {
        Box::new([
            Node::Free,
            Node::Free,
            Node::Free,
            Node::Free,
            Node::Free,
            Node::Free,
            Node::Free,
            Node::Free,
        ])
    }
}

/// Immutable occupancy map. Voxel `(i, j, k)` covers the world cube
/// `origin + [i, i+1) x [j, j+1) x [k, k+1)` scaled by `resolution`.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupancyOctree {
    resolution: f64,
    origin: Vec3,
    depth: u8,
    root: Node,
    occupied_count: usize,
}

/// Builds an octree containing exactly the given occupied voxels.
/// Duplicate coordinates collapse; the tree's cubic extent is the
/// smallest power of two covering the largest index.
pub fn build_octree(
    voxels: impl IntoIterator<Item = [u32; 3]>,
    resolution: f64,
    origin: Vec3,
) -> OccupancyOctree {
    assert!(
        resolution > 0.0 && resolution.is_finite(),
        "voxel resolution must be positive"
    );
    let set: HashSet<[u32; 3]> = voxels.into_iter().collect();
    let max_index = set
        .iter()
        .flat_map(|v| v.iter().copied())
        .max()
        .unwrap_or(0);
    // Bit length of the largest index = levels needed for that side.
    let depth = (u32::BITS - max_index.leading_zeros()) as u8;

    let mut root = Node::Free;
    for &v in &set {
        insert(&mut root, depth, v);
    }
    OccupancyOctree {
        resolution,
        origin,
        depth,
        root,
        occupied_count: set.len(),
    }
}

fn insert(node: &mut Node, level: u8, v: [u32; 3]) {
    if level == 0 {
        *node = Node::Occupied;
        return;
    }
    if matches!(node, Node::Free) {
        *node = Node::Internal(Node::eight_free());
    }
    let Node::Internal(children) = node else {
        unreachable!("occupied leaves only exist at the unit-voxel level");
    };
    insert(&mut children[octant(v, level)], level - 1, v);
}

/// Child slot of `v` at `level`: one bit per axis from the coordinate's
/// binary expansion, x lowest.
fn octant(v: [u32; 3], level: u8) -> usize {
    let bit = |c: u32| ((c >> (level - 1)) & 1) as usize;
    bit(v[0]) | bit(v[1]) << 1 | bit(v[2]) << 2
}

impl OccupancyOctree {
    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn origin(&self) -> Vec3 {
        self.origin
    }

    /// Tree height; the cubic extent is `2^depth` voxels per axis.
    pub fn depth(&self) -> u8 {
        self.depth
    }

    /// Voxels per axis of the cubic extent.
    pub fn side(&self) -> u64 {
        1u64 << self.depth
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied_count
    }

    pub fn is_empty(&self) -> bool {
        self.occupied_count == 0
    }

    /// World-space box covering the whole lattice.
    pub fn world_aabb(&self) -> Aabb {
        let extent = self.side() as f64 * self.resolution;
        Aabb::new(self.origin, self.origin + Vec3::repeat(extent))
    }

    pub fn is_voxel_occupied(&self, v: [u32; 3]) -> bool {
        if v.iter().any(|&c| c as u64 >= self.side()) {
            return false;
        }
        let mut node = &self.root;
        let mut level = self.depth;
        loop {
            match node {
                Node::Free => return false,
                Node::Occupied => return true,
                Node::Internal(children) => {
                    node = &children[octant(v, level)];
                    level -= 1;
                }
            }
        }
    }

    /// Every occupied voxel coordinate, in no particular order.
    pub fn occupied_voxels(&self) -> Vec<[u32; 3]> {
        let mut out = Vec::with_capacity(self.occupied_count);
        collect(&self.root, self.depth, [0, 0, 0], &mut out);
        out
    }

    /// True iff the oriented box overlaps any occupied voxel cube.
    /// Subtrees are pruned by the box's axis-aligned bound; occupied
    /// leaves get the exact separating-axis test.
    pub fn intersects_box(&self, query: &Obb) -> bool {
        let fence = query.enclosing_aabb();
        self.hit(&self.root, self.depth, [0, 0, 0], query, &fence)
    }

    fn hit(&self, node: &Node, level: u8, base: [u32; 3], query: &Obb, fence: &Aabb) -> bool {
        match node {
            Node::Free => false,
            Node::Occupied => query.overlaps_aabb(&self.cell_aabb(level, base)),
            Node::Internal(children) => {
                if self.cell_aabb(level, base).disjoint(fence) {
                    return false;
                }
                children.iter().enumerate().any(|(oct, child)| {
                    let half = 1u32 << (level - 1);
                    let child_base = [
                        base[0] + ((oct & 1) as u32) * half,
                        base[1] + (((oct >> 1) & 1) as u32) * half,
                        base[2] + (((oct >> 2) & 1) as u32) * half,
                    ];
                    self.hit(child, level - 1, child_base, query, fence)
                })
            }
        }
    }

    fn cell_aabb(&self, level: u8, base: [u32; 3]) -> Aabb {
        let size = (1u64 << level) as f64 * self.resolution;
        let min = self.origin
            + Vec3::new(
                base[0] as f64 * self.resolution,
                base[1] as f64 * self.resolution,
                base[2] as f64 * self.resolution,
            );
        Aabb::new(min, min + Vec3::repeat(size))
    }

    pub(super) fn root(&self) -> &Node {
        &self.root
    }

    /// Used by the map loader, which reconstructs the tree directly.
    pub(super) fn from_parts(
        resolution: f64,
        origin: Vec3,
        depth: u8,
        root: Node,
        occupied_count: usize,
    ) -> Self {
        OccupancyOctree {
            resolution,
            origin,
            depth,
            root,
            occupied_count,
        }
    }
}

/// True iff any occupied leaf cube intersects the oriented box.
pub fn query_overlapping_voxels(map: &OccupancyOctree, query: &Obb) -> bool {
    map.intersects_box(query)
}

fn collect(node: &Node, level: u8, base: [u32; 3], out: &mut Vec<[u32; 3]>) {
    match node {
        Node::Free => {}
        Node::Occupied => out.push(base),
        Node::Internal(children) => {
            let half = 1u32 << (level - 1);
            for (oct, child) in children.iter().enumerate() {
                let child_base = [
                    base[0] + ((oct & 1) as u32) * half,
                    base[1] + (((oct >> 1) & 1) as u32) * half,
                    base[2] + (((oct >> 2) & 1) as u32) * half,
                ];
                collect(child, level - 1, child_base, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Quat;

    #[test]
    fn empty_octree_has_nothing() {
        let map = build_octree([], 0.2, Vec3::zeros());
        assert_eq!(map.occupied_count(), 0);
        assert_eq!(map.depth(), 0);
        assert!(!map.is_voxel_occupied([0, 0, 0]));
        let probe = Obb::new(Vec3::zeros(), Vec3::repeat(100.0), Quat::identity());
        assert!(!map.intersects_box(&probe));
    }

    #[test]
    fn single_voxel_covers_its_cube() {
        let map = build_octree([[0, 0, 0]], 0.2, Vec3::zeros());
        assert_eq!(map.occupied_count(), 1);
        assert!(map.is_voxel_occupied([0, 0, 0]));
        assert!(!map.is_voxel_occupied([1, 0, 0]));

        let inside = Obb::new(Vec3::repeat(0.1), Vec3::repeat(0.01), Quat::identity());
        assert!(map.intersects_box(&inside));
        let outside = Obb::new(Vec3::repeat(0.5), Vec3::repeat(0.01), Quat::identity());
        assert!(!map.intersects_box(&outside));
    }

    #[test]
    fn duplicates_collapse() {
        let map = build_octree([[3, 1, 2], [3, 1, 2], [3, 1, 2]], 0.5, Vec3::zeros());
        assert_eq!(map.occupied_count(), 1);
        assert_eq!(map.depth(), 2);
        assert_eq!(map.occupied_voxels(), vec![[3, 1, 2]]);
    }

    #[test]
    fn octant_bits_follow_coordinate_bits() {
        // Voxel (5, 2, 1) with depth 3: top level splits on bit 2.
        assert_eq!(octant([5, 2, 1], 3), 0b001);
        assert_eq!(octant([5, 2, 1], 2), 0b010);
        assert_eq!(octant([5, 2, 1], 1), 0b101);
    }

    #[test]
    fn out_of_extent_probes_are_free() {
        let map = build_octree([[1, 1, 1]], 0.2, Vec3::zeros());
        assert_eq!(map.side(), 2);
        assert!(!map.is_voxel_occupied([2, 0, 0]));
        assert!(!map.is_voxel_occupied([u32::MAX, 0, 0]));
    }
}
