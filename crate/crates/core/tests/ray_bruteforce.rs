use helios_core::fixtures;
use helios_core::raycast::MIN_HIT_DISTANCE;
use helios_core::{classify_visibility, ray_hits, Scene, SurfaceKind, Vec3, Visibility};
use helios_oracles::rays::list_hits;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_unit(rng: &mut StdRng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

fn random_rays(n: usize, seed: u64, lo: Vec3, hi: Vec3) -> Vec<(Vec3, Vec3)> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let o = Vec3::new(rng.random_range(lo.x..hi.x), rng.random_range(lo.y..hi.y), rng.random_range(lo.z..hi.z));
            (o, random_unit(&mut rng))
        })
        .collect()
}

fn assert_same_hits(scene: &Scene, rays: &[(Vec3, Vec3)]) -> usize {
    let mut total = 0;
    for &(o, d) in rays {
        let ours = ray_hits(scene, o, d);
        let naive = list_hits(scene, o, d, MIN_HIT_DISTANCE);
        let mut a: Vec<_> = ours.iter().map(|h| (h.mesh, h.triangle)).collect();
        let mut b: Vec<_> = naive.iter().map(|h| (h.mesh, h.triangle)).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b, "ray {o:?} {d:?}");
        for (h, n) in ours.iter().zip(&naive) {
            assert!((h.distance - n.distance).abs() < 1e-9, "ray {o:?} {d:?}");
        }
        assert!(ours.windows(2).all(|w| w[0].distance <= w[1].distance));
        total += ours.len();
    }
    total
}

#[test]
fn thousand_rays_match_brute_force_in_windowed_room() {
    let room: Scene = fixtures::windowed_room();
    let rays = random_rays(1000, 11, Vec3::new(-2.0, -3.0, -1.0), Vec3::new(8.0, 10.0, 4.0));
    let hits = assert_same_hits(&room, &rays);
    assert!(hits > 400, "rays should often hit the room, got {hits}");
}

#[test]
fn thousand_rays_match_brute_force_in_pool_hall() {
    let hall: Scene = fixtures::pool_hall();
    let rays = random_rays(1000, 12, Vec3::new(1.0, 1.0, 0.5), Vec3::new(24.0, 39.0, 7.5));
    assert_same_hits(&hall, &rays);
}

#[test]
fn visibility_matches_opaque_hits_in_listing() {
    let room: Scene = fixtures::windowed_room();
    let rays = random_rays(1000, 13, Vec3::new(0.5, 0.5, 0.5), Vec3::new(5.5, 7.5, 2.5));
    for (o, d) in rays {
        let expected = if d.z < 0.0 {
            Visibility::BelowHorizon
        } else if list_hits(&room, o, d, MIN_HIT_DISTANCE).iter().any(|h| room.material_of(h.mesh).is_opaque()) {
            Visibility::Blocked
        } else {
            Visibility::Visible
        };
        assert_eq!(classify_visibility(&room, o, d), expected, "ray {o:?} {d:?}");
    }
}

#[test]
fn glass_pane_between_observer_and_sun_is_visible() {
    let room: Scene = fixtures::windowed_room();
    let observer = Vec3::new(3.0, 1.0, 1.2);
    let sun = (Vec3::new(0.0, -1.0, 0.4)).normalized().unwrap();
    let listing = list_hits(&room, observer, sun, MIN_HIT_DISTANCE);
    assert!(!listing.is_empty());
    assert!(listing.iter().all(|h| !room.material_of(h.mesh).is_opaque()));
    assert!(ray_hits(&room, observer, sun).iter().all(|h| h.kind == SurfaceKind::Glass));
    assert_eq!(classify_visibility(&room, observer, sun), Visibility::Visible);
}
