//! Octree behavior checked against flat brute-force oracles, plus the
//! file-format and scene-generation contracts that matter end to end.

use rand::Rng;
use sbo_core::geom::{Aabb, Obb, Quat, Vec3};
use sbo_core::rng::rng_from_seed;
use sbo_core::statespace::Bounds;
use sbo_core::worldmap::{
    build_octree, generate_scene, load_map, query_overlapping_voxels, save_map, Corridor, Ground,
    Obstacle, SceneSpec,
};
use std::collections::HashSet;

#[test]
fn membership_matches_hash_set_oracle() {
    let mut rng = rng_from_seed(0xbeef_0001);
    let mut oracle = HashSet::new();
    for _ in 0..100_000 {
        oracle.insert([
            rng.gen_range(0u32..64),
            rng.gen_range(0u32..64),
            rng.gen_range(0u32..64),
        ]);
    }
    let map = build_octree(oracle.iter().copied(), 0.2, Vec3::zeros());
    assert_eq!(map.occupied_count(), oracle.len());

    for &v in &oracle {
        assert!(map.is_voxel_occupied(v));
    }
    for _ in 0..100_000 {
        let probe = [
            rng.gen_range(0u32..70),
            rng.gen_range(0u32..70),
            rng.gen_range(0u32..70),
        ];
        assert_eq!(map.is_voxel_occupied(probe), oracle.contains(&probe));
    }

    let mut from_tree = map.occupied_voxels();
    from_tree.sort_unstable();
    let mut from_set: Vec<_> = oracle.into_iter().collect();
    from_set.sort_unstable();
    assert_eq!(from_tree, from_set);
}

/// Octree traversal with pruning agrees with testing every occupied
/// voxel cube one by one, over random boxes at random orientations.
#[test]
fn box_queries_match_exhaustive_oracle() {
    let mut rng = rng_from_seed(0xbeef_0002);
    let res = 0.2;
    let voxels: Vec<[u32; 3]> = (0..300)
        .map(|_| {
            [
                rng.gen_range(0u32..16),
                rng.gen_range(0u32..16),
                rng.gen_range(0u32..16),
            ]
        })
        .collect();
    let map = build_octree(voxels.iter().copied(), res, Vec3::zeros());
    let cubes: Vec<Aabb> = map
        .occupied_voxels()
        .into_iter()
        .map(|[i, j, k]| {
            let min = Vec3::new(i as f64, j as f64, k as f64) * res;
            Aabb::new(min, min + Vec3::repeat(res))
        })
        .collect();

    for case in 0..1_000 {
        let center = Vec3::new(
            rng.gen_range(-0.5..3.7),
            rng.gen_range(-0.5..3.7),
            rng.gen_range(-0.5..3.7),
        );
        let half = Vec3::new(
            rng.gen_range(0.05..0.8),
            rng.gen_range(0.05..0.8),
            rng.gen_range(0.02..0.3),
        );
        let query = if case % 3 == 0 {
            // Pure yaw, including exact 45-degree grazing angles.
            Obb::yawed(center, half, rng.gen_range(0..8) as f64 * std::f64::consts::FRAC_PI_4)
        } else {
            let axis = Vec3::new(rng.gen(), rng.gen(), rng.gen());
            let angle = rng.gen_range(0.0..std::f64::consts::TAU);
            Obb::new(
                center,
                half,
                Quat::from_scaled_axis(axis.normalize() * angle),
            )
        };

        let expected = cubes.iter().any(|cube| query.overlaps_aabb(cube));
        assert_eq!(
            query_overlapping_voxels(&map, &query),
            expected,
            "case {case}: query {query:?}"
        );
    }
}

#[test]
fn dense_block_compresses_below_coordinate_listing() {
    let all: Vec<[u32; 3]> = (0..64u32)
        .flat_map(|i| (0..64u32).flat_map(move |j| (0..64u32).map(move |k| [i, j, k])))
        .collect();
    let map = build_octree(all.iter().copied(), 0.2, Vec3::zeros());
    let mut file = Vec::new();
    save_map(&map, &mut file).unwrap();
    let naive = 64 * 64 * 64 * 3 * std::mem::size_of::<u32>();
    assert!(
        file.len() < naive,
        "octree file {} bytes >= naive listing {} bytes",
        file.len(),
        naive
    );
}

fn bench_like_spec(seed: u64) -> SceneSpec {
    SceneSpec {
        ground: Ground::HeightField {
            amplitude: 0.5,
            wavelength: 20.0,
        },
        obstacles: vec![
            Obstacle::Box {
                center: Vec3::new(10.0, 6.0, 1.0),
                extents: Vec3::new(4.0, 5.0, 2.0),
            },
            Obstacle::Cylinder {
                center: Vec3::new(20.0, 12.0, 1.0),
                radius: 0.4,
                height: 2.0,
            },
            Obstacle::Box {
                center: Vec3::new(28.0, 4.0, 0.75),
                extents: Vec3::new(2.0, 2.0, 1.5),
            },
        ],
        extent: Bounds::new(0.0, 40.0, 0.0, 20.0, 0.0, 2.0, -std::f64::consts::PI, std::f64::consts::PI)
            .unwrap(),
        resolution: 0.2,
        seed,
        corridor: Some(Corridor {
            width: 1.5,
            z_min: 0.45,
            z_max: 0.95,
        }),
    }
}

#[test]
fn scene_generation_is_deterministic_to_the_byte() {
    let a = generate_scene(&bench_like_spec(42)).unwrap();
    let b = generate_scene(&bench_like_spec(42)).unwrap();
    let mut file_a = Vec::new();
    let mut file_b = Vec::new();
    save_map(&a, &mut file_a).unwrap();
    save_map(&b, &mut file_b).unwrap();
    assert_eq!(file_a, file_b);

    let reloaded = load_map(file_a.as_slice()).unwrap();
    assert_eq!(reloaded.occupied_count(), a.occupied_count());
    assert_eq!(reloaded.resolution(), a.resolution());
    assert_eq!(reloaded.origin(), a.origin());
}

/// The height field's crest must land in the predicted voxel layer:
/// amplitude 0.5 puts the surface maximum at z = 0.5, inside layer 2.
#[test]
fn height_field_extrema_land_in_the_right_layer()  {
    let mut spec = bench_like_spec(3);
    spec.obstacles.clear();
    spec.corridor = None;
    let map = generate_scene(&spec).unwrap();
    let max_layer = map
        .occupied_voxels()
        .into_iter()
        .map(|v| v[2])
        .max()
        .unwrap();
    assert_eq!(max_layer, 2);
}
