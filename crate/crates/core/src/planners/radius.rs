//! Connection-radius and neighbor-count formulas shared by the
//! asymptotically optimal planners.

use crate::statespace::StateSpace;

/// Hard cap on the rewiring radius, meters. Keeps early-tree neighbor
/// sets local when `n` is small and the formula value is huge.
pub const ETA_CAP: f64 = 5.0;

/// Shrinking RRT*/FMT* connection radius: `min(gamma (ln n / n)^(1/d),
/// ETA_CAP)`.
pub fn rewiring_radius(n: usize, d: usize, gamma: f64) -> f64 {
    assert!(n >= 2, "radius is defined for trees of at least two nodes");
    assert!(d >= 1);
    let n = n as f64;
    (gamma * (n.ln() / n).powf(1.0 / d as f64)).min(ETA_CAP)
}

/// PRM* neighbor count `ceil(e (1 + 1/d) ln n)`.
pub fn prm_star_k(n: usize, d: usize) -> usize {
    assert!(n >= 2, "neighbor count is defined for graphs of at least two vertices");
    assert!(d >= 1);
    let scale = std::f64::consts::E * (1.0 + 1.0 / d as f64);
    (scale * (n as f64).ln()).ceil() as usize
}

/// Volume of the unit ball in `d` dimensions, by the two-step recurrence
/// `V_d = 2 pi / d * V_(d-2)` from `V_0 = 1`, `V_1 = 2`.
fn unit_ball_volume(d: usize) -> f64 {
    let mut v = if d % 2 == 0 { 1.0 } else { 2.0 };
    let mut k = d % 2;
    while k < d {
        k += 2;
        v *= std::f64::consts::TAU / k as f64;
    }
    v
}

/// Radius constant sized to the space: `2 (1 + 1/d)^(1/d)
/// (mu / zeta_d)^(1/d)` with `mu` the sampling-domain measure and
/// `zeta_d` the unit-ball volume. The free-space measure is
/// approximated by the whole bounded domain, which errs toward larger
/// (safer) radii.
pub fn default_gamma(space: &StateSpace) -> f64 {
    let d = space.dimension();
    let inv_d = 1.0 / d as f64;
    let mu = space.measure();
    2.0 * (1.0 + inv_d).powf(inv_d) * (mu / unit_ball_volume(d)).powf(inv_d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statespace::Bounds;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn radius_matches_hand_computed_value() {
        // (ln 10 / 10)^(1/2), evaluated independently to full precision.
        assert_relative_eq!(
            rewiring_radius(10, 2, 1.0),
            0.479852591218808,
            epsilon = 1e-12
        );
    }

    #[test]
    fn radius_shrinks_with_tree_size_and_respects_the_cap() {
        let mut prev = rewiring_radius(3, 3, 10.0);
        for n in 4..2000 {
            let r = rewiring_radius(n, 3, 10.0);
            assert!(r <= prev + 1e-15, "radius grew at n={n}");
            prev = r;
        }
        assert_eq!(rewiring_radius(10, 2, 1e9), ETA_CAP);
    }

    #[test]
    fn neighbor_count_matches_hand_computed_values() {
        assert_eq!(prm_star_k(100, 2), 19); // ceil(4.0774 * 4.6052)
        assert_eq!(prm_star_k(2, 3), 3); // ceil(3.6243 * 0.6931)
        let mut prev = prm_star_k(2, 3);
        for n in 3..5000 {
            let k = prm_star_k(n, 3);
            assert!(k >= prev);
            prev = k;
        }
    }

    #[test]
    fn unit_ball_volumes_match_closed_forms() {
        assert_relative_eq!(unit_ball_volume(1), 2.0);
        assert_relative_eq!(unit_ball_volume(2), PI);
        assert_relative_eq!(unit_ball_volume(3), 4.0 * PI / 3.0);
        assert_relative_eq!(unit_ball_volume(6), PI.powi(3) / 6.0);
    }

    #[test]
    fn gamma_reflects_domain_measure() {
        let small = Bounds::new(0.0, 1.0, 0.0, 1.0, 0.0, 1.0, -PI, PI).unwrap();
        let large = Bounds::new(0.0, 100.0, 0.0, 100.0, 0.0, 1.0, -PI, PI).unwrap();
        let g_small = default_gamma(&StateSpace::se2(small));
        let g_large = default_gamma(&StateSpace::se2(large));
        assert!(g_large > g_small);
        // d = 3: measure scales by 10^4, gamma by its cube root.
        assert_relative_eq!(g_large / g_small, 1e4f64.powf(1.0 / 3.0), epsilon = 1e-9);
    }
}
