use std::fs;
use std::path::PathBuf;

use helios_core::fixtures::{self, san_francisco};
use helios_core::{CivilInstant, Scene, SkyModel};
use helios_radiance::{build_octree, emit_radiance_files, Installation, RadianceFiles};

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn noon() -> CivilInstant {
    CivilInstant::new(2026, 6, 21, 12, 0).unwrap()
}

fn fixture_files() -> (RadianceFiles, String) {
    let room: Scene = fixtures::windowed_room();
    let clear = emit_radiance_files(&room, &SkyModel::clear(san_francisco(), noon())).unwrap();
    let overcast = emit_radiance_files(&room, &SkyModel::overcast(san_francisco(), noon())).unwrap();
    assert_eq!(clear.materials, overcast.materials);
    assert_eq!(clear.geometry, overcast.geometry);
    (clear, overcast.sky)
}

/// Compares against the checked-in file, or rewrites it when `HELIOS_BLESS` is set.
fn check(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if std::env::var_os("HELIOS_BLESS").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{name} differs from golden file");
}

#[test]
fn fixture_room_matches_golden_files() {
    let (clear, overcast_sky) = fixture_files();
    check("materials.rad", &clear.materials);
    check("geometry.rad", &clear.geometry);
    check("sky_clear.rad", &clear.sky);
    check("sky_overcast.rad", &overcast_sky);
}

#[test]
fn emission_is_stable_across_runs_and_round_trips() {
    let (a, _) = fixture_files();
    let (b, _) = fixture_files();
    assert_eq!(a, b);
    let room: Scene = fixtures::windowed_room();
    let reloaded = Scene::from_json_str(&room.to_json_string()).unwrap();
    let c = emit_radiance_files(&reloaded, &SkyModel::clear(san_francisco(), noon())).unwrap();
    assert_eq!(a, c);
}

#[test]
fn golden_files_compile_with_oconv() {
    let Ok(install) = Installation::discover(None) else {
        eprintln!("skipping: Radiance not installed");
        return;
    };
    for sky in ["sky_clear.rad", "sky_overcast.rad"] {
        let dir = tempfile::tempdir().unwrap();
        let read = |n: &str| fs::read_to_string(golden_dir().join(n)).unwrap();
        let files = RadianceFiles { materials: read("materials.rad"), geometry: read("geometry.rad"), sky: read(sky) }
            .write_to(dir.path())
            .unwrap();
        let oct = build_octree(&install, &files, dir.path()).unwrap();
        assert!(fs::metadata(oct).unwrap().len() > 0);
    }
}
