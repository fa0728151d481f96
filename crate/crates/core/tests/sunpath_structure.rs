use helios_core::fixtures::{self, san_francisco};
use helios_core::raycast::MIN_HIT_DISTANCE;
use helios_core::sunpath::Projection;
use helios_core::{build_diagram, DiagramOptions, Rgb8, Scene, Site, SunPathDiagram, Vec3, Visibility};
use helios_oracles::noaa::angle_diff;
use helios_oracles::rays::list_hits;

fn open_field(site: Site) -> Scene {
    Scene::unobstructed(site).unwrap()
}

fn diagram(scene: &Scene, observer: Vec3, strict: bool) -> SunPathDiagram {
    build_diagram(scene, observer, 10.0, &DiagramOptions { strict, ..DiagramOptions::default() }).unwrap()
}

#[test]
fn arc_counts_follow_the_day_list() {
    let scene = open_field(san_francisco());
    assert_eq!(diagram(&scene, Vec3::zero(), false).arcs.len(), 12);
    let strict = diagram(&scene, Vec3::zero(), true);
    assert_eq!(strict.arcs.len(), 11);
    assert!(strict.arcs.iter().all(|a| a.month != 4));
}

#[test]
fn arcs_run_horizon_to_horizon_on_the_sphere() {
    for site in [san_francisco(), Site::new(-33.9, 18.4, 2.0), Site::new(51.5, -0.1, 0.0), Site::new(1.3, 103.8, 8.0)] {
        let observer = Vec3::new(1.0, -2.0, 0.8);
        let d = diagram(&open_field(site), observer, false);
        for arc in &d.arcs {
            let first = arc.samples.first().unwrap();
            let last = arc.samples.last().unwrap();
            assert!(first.altitude_deg.abs() <= 0.5 && last.altitude_deg.abs() <= 0.5, "{arc:?}");
            let times: Vec<f64> = arc
                .samples
                .iter()
                .map(|s| s.date.and_hms_opt(0, 0, 0).unwrap().and_utc().timestamp() as f64 / 3600.0 + s.hours)
                .collect();
            assert!(times.windows(2).all(|w| w[0] < w[1]));
            let expected = (arc.daylight_minutes / 10.0).floor() + 1.0;
            assert!((arc.samples.len() as f64 - expected).abs() <= 1.0, "{} vs {expected}", arc.samples.len());
            assert!(angle_diff(first.azimuth_deg + last.azimuth_deg, 360.0) <= 1.0);
        }
        for s in d.samples() {
            assert!(((s.point - observer).norm() - 10.0).abs() <= 1e-6 * 10.0);
        }
    }
}

#[test]
fn analemmas_hold_one_sample_per_day_for_each_lit_hour() {
    let d = diagram(&open_field(san_francisco()), Vec3::zero(), false);
    assert!(!d.analemmas.is_empty());
    for a in &d.analemmas {
        assert_eq!(a.samples.len(), 12);
        assert!(a.samples.iter().any(|s| s.altitude_deg > 0.0));
        assert!(a.samples.iter().all(|s| (s.hours - a.hour as f64).abs() < 1e-12));
    }
    let hours: Vec<u32> = d.analemmas.iter().map(|a| a.hour).collect();
    assert!(hours.contains(&12) && !hours.contains(&0) && !hours.contains(&23));
}

#[test]
fn season_colors_are_exact_and_hemisphere_aware() {
    let arc = |d: &SunPathDiagram, m| d.arcs.iter().find(|a| a.month == m).unwrap().color;
    let north = diagram(&open_field(san_francisco()), Vec3::zero(), false);
    assert_eq!(arc(&north, 12), Rgb8::new(0, 0, 255));
    assert_eq!(arc(&north, 6), Rgb8::new(255, 165, 0));
    let south = diagram(&open_field(Site::new(-33.9, 18.4, 2.0)), Vec3::zero(), false);
    assert_eq!(arc(&south, 6), Rgb8::new(0, 0, 255));
    assert_eq!(arc(&south, 12), Rgb8::new(255, 165, 0));
    let march = arc(&north, 3);
    assert!(march != Rgb8::BLUE && march != Rgb8::ORANGE);
}

#[test]
fn open_field_sees_every_lit_sample_and_december_peaks_lower() {
    let d = diagram(&open_field(san_francisco()), Vec3::zero(), false);
    for s in d.samples() {
        let expected = if s.sun_direction.z < 0.0 { Visibility::BelowHorizon } else { Visibility::Visible };
        assert_eq!(s.visibility, expected);
    }
    let peak = |m| {
        d.arcs.iter().find(|a| a.month == m).unwrap().samples.iter().map(|s| s.altitude_deg).fold(f64::MIN, f64::max)
    };
    assert!(peak(12) < peak(6));
}

#[test]
fn closed_box_blocks_every_lit_sample() {
    let b: Scene = fixtures::sealed_box(Vec3::new(-1.0, -1.0, 0.0), Vec3::new(1.0, 1.0, 2.0));
    let d = diagram(&b, Vec3::new(0.0, 0.0, 1.0), false);
    assert!(d.samples().all(|s| s.visibility != Visibility::Visible));
    assert!(d.samples().any(|s| s.visibility == Visibility::Blocked));
}

#[test]
fn south_window_mask_matches_brute_force() {
    let room: Scene = fixtures::windowed_room();
    let observer = Vec3::new(3.0, 1.5, 0.8);
    let d = diagram(&room, observer, false);
    for s in d.samples() {
        let expected = if s.sun_direction.z < 0.0 {
            Visibility::BelowHorizon
        } else if list_hits(&room, observer, s.sun_direction, MIN_HIT_DISTANCE)
            .iter()
            .any(|h| room.material_of(h.mesh).is_opaque())
        {
            Visibility::Blocked
        } else {
            Visibility::Visible
        };
        assert_eq!(s.visibility, expected, "{} {}", s.date, s.hours);
    }
    let noon = |m: u32| {
        d.analemmas
            .iter()
            .find(|a| a.hour == 12)
            .unwrap()
            .samples
            .iter()
            .find(|s| chrono::Datelike::month(&s.date) == m)
            .unwrap()
            .visibility
    };
    assert_eq!(noon(12), Visibility::Visible);
    assert_eq!(noon(6), Visibility::Blocked);
}

#[test]
fn translating_scene_and_observer_shifts_points_only() {
    let room: Scene = fixtures::windowed_room();
    let observer = Vec3::new(3.0, 1.5, 1.2);
    let shift = Vec3::new(125.0, -40.0, 3.5);
    let a = diagram(&room, observer, false);
    let b = diagram(&room.translated(shift), observer + shift, false);
    for (x, y) in a.samples().zip(b.samples()) {
        assert_eq!(x.visibility, y.visibility);
        assert!(((x.point + shift) - y.point).norm() < 1e-9);
    }
}

#[test]
fn projections_put_zenith_at_centre_and_horizon_on_rim() {
    for p in [Projection::Equidistant, Projection::Stereographic] {
        assert!(p.radius(90.0).abs() < 1e-12);
        assert!((p.radius(0.0) - 1.0).abs() < 1e-12);
        let (x, y) = p.project(0.0, 0.0);
        assert!(x.abs() < 1e-12 && (y + 1.0).abs() < 1e-12, "north is up");
    }
}
