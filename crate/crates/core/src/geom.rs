//! Shared geometric primitives: axis-aligned and oriented boxes plus the
//! separating-axis overlap test used by the collision pipeline.

use nalgebra::{Matrix3, UnitQuaternion, Vector3};

pub type Vec3 = Vector3<f64>;
pub type Quat = UnitQuaternion<f64>;

/// Axis-aligned box given by its two extreme corners. `min <= max` on every axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn new(min: Vec3, max: Vec3) -> Self {
        debug_assert!(min.x <= max.x && min.y <= max.y && min.z <= max.z);
        Self { min, max }
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }

    pub fn half_extents(&self) -> Vec3 {
        (self.max - self.min) * 0.5
    }

    /// Strict separation test: boxes that merely touch are *not* disjoint.
    /// Touching contacts count as overlap throughout the collision pipeline,
    /// so pruning must never discard a touching subtree.
    pub fn disjoint(&self, other: &Aabb) -> bool {
        self.min.x > other.max.x
            || self.min.y > other.max.y
            || self.min.z > other.max.z
            || other.min.x > self.max.x
            || other.min.y > self.max.y
            || other.min.z > self.max.z
    }

    pub fn contains_point(&self, p: &Vec3) -> bool {
        p.x >= self.min.x
            && p.x <= self.max.x
            && p.y >= self.min.y
            && p.y <= self.max.y
            && p.z >= self.min.z
            && p.z <= self.max.z
    }
}

/// Oriented box: center, half extents along its local axes, and a rotation
/// taking local axes to world axes.
#[derive(Clone, Copy, Debug)]
pub struct Obb {
    pub center: Vec3,
    pub half_extents: Vec3,
    pub rotation: Quat,
}

impl Obb {
    pub fn new(center: Vec3, half_extents: Vec3, rotation: Quat) -> Self {
        Self { center, half_extents, rotation }
    }

    /// Yaw-only box used for planar states.
    pub fn yawed(center: Vec3, half_extents: Vec3, yaw: f64) -> Self {
        Self::new(center, half_extents, Quat::from_axis_angle(&Vector3::z_axis(), yaw))
    }

    /// World-aligned enclosing box: center ± |R| · h, padded by a hair so
    /// it stays conservative against rounding in other corner computations.
    /// Callers use it to prune, never to decide, so the padding only costs
    /// the odd extra exact test.
    pub fn enclosing_aabb(&self) -> Aabb {
        let r = self.rotation.to_rotation_matrix();
        let m: &Matrix3<f64> = r.matrix();
        let h = self.half_extents;
        let reach = Vec3::new(
            m.m11.abs() * h.x + m.m12.abs() * h.y + m.m13.abs() * h.z + 1e-9,
            m.m21.abs() * h.x + m.m22.abs() * h.y + m.m23.abs() * h.z + 1e-9,
            m.m31.abs() * h.x + m.m32.abs() * h.y + m.m33.abs() * h.z + 1e-9,
        );
        Aabb::new(self.center - reach, self.center + reach)
    }

    /// Separating-axis test against an axis-aligned box. Touching counts as
    /// overlap: separation requires a strictly positive gap on some axis.
    ///
    /// The fifteen candidate axes are the three world axes, the three box
    /// axes, and their nine cross products. Near-parallel axis pairs yield a
    /// degenerate cross product which is skipped; when an edge pair is
    /// parallel the face normals already decide the query.
    pub fn overlaps_aabb(&self, aabb: &Aabb) -> bool {
        let rot = self.rotation.to_rotation_matrix();
        let m = rot.matrix();
        let b_axes = [
            Vec3::new(m.m11, m.m21, m.m31),
            Vec3::new(m.m12, m.m22, m.m32),
            Vec3::new(m.m13, m.m23, m.m33),
        ];
        let a_half = aabb.half_extents();
        let b_half = self.half_extents;
        let t = self.center - aabb.center();

        let separated_on = |axis: &Vec3| -> bool {
            let len2 = axis.norm_squared();
            if len2 < 1e-12 {
                return false;
            }
            let ra = a_half.x * axis.x.abs() + a_half.y * axis.y.abs() + a_half.z * axis.z.abs();
            let rb = b_half.x * b_axes[0].dot(axis).abs()
                + b_half.y * b_axes[1].dot(axis).abs()
                + b_half.z * b_axes[2].dot(axis).abs();
            t.dot(axis).abs() > ra + rb
        };

        for axis in [Vec3::x(), Vec3::y(), Vec3::z()] {
            if separated_on(&axis) {
                return false;
            }
        }
        for axis in &b_axes {
            if separated_on(axis) {
                return false;
            }
        }
        for a in [Vec3::x(), Vec3::y(), Vec3::z()] {
            for b in &b_axes {
                if separated_on(&a.cross(b)) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aabb_disjoint_is_strict() {
        let a = Aabb::new(Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 1.0, 1.0));
        let touching = Aabb::new(Vec3::new(1.0, 0.0, 0.0), Vec3::new(2.0, 1.0, 1.0));
        let apart = Aabb::new(Vec3::new(1.001, 0.0, 0.0), Vec3::new(2.0, 1.0, 1.0));
        assert!(!a.disjoint(&touching));
        assert!(a.disjoint(&apart));
    }

    #[test]
    fn axis_aligned_obb_behaves_like_aabb() {
        let obb = Obb::yawed(Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 1.0, 1.0), 0.0);
        let hit = Aabb::new(Vec3::new(0.5, 0.5, 0.5), Vec3::new(2.0, 2.0, 2.0));
        let miss = Aabb::new(Vec3::new(1.5, 1.5, 1.5), Vec3::new(2.0, 2.0, 2.0));
        assert!(obb.overlaps_aabb(&hit));
        assert!(!obb.overlaps_aabb(&miss));
    }

    #[test]
    fn rotated_obb_corner_cases() {
        // A unit cube rotated 45° about z reaches sqrt(2) along x/y.
        let obb = Obb::yawed(Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 1.0, 1.0), std::f64::consts::FRAC_PI_4);
        let reach = 2.0_f64.sqrt();
        let just_inside = Aabb::new(Vec3::new(reach - 0.01, -0.1, -0.1), Vec3::new(3.0, 0.1, 0.1));
        let just_outside = Aabb::new(Vec3::new(reach + 0.01, -0.1, -0.1), Vec3::new(3.0, 0.1, 0.1));
        assert!(obb.overlaps_aabb(&just_inside));
        assert!(!obb.overlaps_aabb(&just_outside));

        // Face-on the diagonal: a box sitting past the corner but off-axis misses.
        let off_corner = Aabb::new(Vec3::new(1.2, 1.2, -0.1), Vec3::new(2.0, 2.0, 0.1));
        assert!(!obb.overlaps_aabb(&off_corner));
    }

    #[test]
    fn enclosing_aabb_bounds_rotated_box() {
        let obb = Obb::yawed(Vec3::new(1.0, 2.0, 3.0), Vec3::new(2.0, 1.0, 0.5), 0.3);
        let aabb = obb.enclosing_aabb();
        // All eight corners must fall inside the enclosing box.
        for sx in [-1.0, 1.0] {
            for sy in [-1.0, 1.0] {
                for sz in [-1.0, 1.0] {
                    let local = Vec3::new(sx * 2.0, sy * 1.0, sz * 0.5);
                    let world = obb.center + obb.rotation * local;
                    assert!(aabb.contains_point(&world));
                }
            }
        }
    }
}
