//! Cross-checks of the closed-form car metrics against an independent
//! brute-force reference, plus large randomized property sweeps.

use rand::Rng;
use sbo_core::rng::rng_from_seed;
use sbo_core::statespace::{dubins_path, reeds_shepp_path, Pose2};
use sbo_testkit::curves::CurveOracle;

fn random_pose(rng: &mut impl Rng, span: f64) -> Pose2 {
    Pose2::new(
        rng.gen_range(-span..=span),
        rng.gen_range(-span..=span),
        rng.gen_range(-std::f64::consts::PI..=std::f64::consts::PI),
    )
}

/// Solver lengths agree with the independent discretized search.
#[test]
fn car_metrics_match_brute_force_reference() {
    let dubins_oracle = CurveOracle::dubins();
    let rs_oracle = CurveOracle::reeds_shepp();
    let mut rng = rng_from_seed(0x0c_0ffee);
    let radius = 1.5;

    for case in 0..100 {
        let a = random_pose(&mut rng, 8.0);
        let b = random_pose(&mut rng, 8.0);
        let at = (a.x, a.y, a.yaw);
        let bt = (b.x, b.y, b.yaw);

        let solver = dubins_path(a, b, radius).total_length;
        let reference = dubins_oracle.shortest(at, bt, radius);
        assert!(
            (solver - reference).abs() <= 1e-4,
            "dubins case {case}: solver {solver} vs reference {reference} for {a:?} -> {b:?}"
        );

        let solver = reeds_shepp_path(a, b, radius).total_length;
        let reference = rs_oracle.shortest(at, bt, radius);
        assert!(
            (solver - reference).abs() <= 1e-4,
            "reeds-shepp case {case}: solver {solver} vs reference {reference} for {a:?} -> {b:?}"
        );
    }
}

/// Ten thousand random pairs: both curve families respect the Euclidean
/// lower bound, reverse gear never hurts, and every word lands on its goal.
#[test]
fn car_metrics_bulk_properties() {
    let mut rng = rng_from_seed(0xcafe_f00d);
    let radius = 1.5;

    for _ in 0..10_000 {
        let a = random_pose(&mut rng, 20.0);
        let b = random_pose(&mut rng, 20.0);
        let euclid = (a.x - b.x).hypot(a.y - b.y);

        let dubins = dubins_path(a, b, radius);
        let rs = reeds_shepp_path(a, b, radius);

        assert!(dubins.total_length >= euclid - 1e-9);
        assert!(rs.total_length >= euclid - 1e-9);
        assert!(rs.total_length <= dubins.total_length + 1e-9);

        for (word, tol) in [(&dubins, 1e-9), (&rs, 1e-6)] {
            let end = word.end_pose(a);
            assert!(
                (end.x - b.x).hypot(end.y - b.y) < tol * radius.max(1.0)
                    && (end.yaw - b.yaw).sin().atan2((end.yaw - b.yaw).cos()).abs() < tol,
                "word does not land: {end:?} vs {b:?}"
            );
        }
    }
}
