use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use helios_core::fixtures::windowed_room;
use helios_core::{ColoredResult, Scene};

fn helios(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_helios")).args(args).env("RUST_LOG", "warn").output().expect("run helios")
}

fn ok(args: &[&str]) -> String {
    let out = helios(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write_scene(dir: &Path) -> String {
    let path = dir.join("room.json");
    windowed_room::<f64>().save(&path).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn sun_prints_the_five_quantities() {
    let text =
        ok(&["sun", "--lat", "37.77", "--lon", "-122.42", "--tz", "-8", "--date", "2026-06-21", "--time", "12:00"]);
    for key in ["altitude", "azimuth", "zenith", "declination", "eq. of time"] {
        assert!(text.contains(key), "{text}");
    }
    let json: serde_json::Value = serde_json::from_str(&ok(&[
        "sun",
        "--lat",
        "37.77",
        "--lon",
        "-122.42",
        "--tz",
        "-8",
        "--date",
        "2026-06-21",
        "--time",
        "12:00",
        "--json",
    ]))
    .unwrap();
    let alt = json["altitude_deg"].as_f64().unwrap();
    assert!((alt - 75.0).abs() < 1.5, "{alt}");
}

#[test]
fn bad_inputs_exit_non_zero() {
    let out = helios(&["sun", "--lat", "37", "--lon", "0", "--tz", "0", "--date", "2026-13-01", "--time", "12:00"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("month"));
    let out = helios(&["grid", "--center", "0,0", "--size", "4x4", "--spacing", "0"]);
    assert!(!out.status.success());
}

#[test]
fn grid_lines_match_the_sensor_format() {
    let text = ok(&["grid", "--center", "0,0", "--height", "0.8", "--size", "4x4", "--spacing", "1,1"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 25);
    assert_eq!(lines[0], "-2 -2 0.8 0 0 1");
    assert_eq!(lines[24], "2 2 0.8 0 0 1");
    let fine = ok(&["grid", "--center", "12.5,20", "--height", "0.8", "--size", "25x40", "--spacing", "0.6"]);
    assert_eq!(fine.lines().count(), 2814);
}

#[test]
fn import_validates_and_canonicalises() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(dir.path());
    let out = dir.path().join("copy.json");
    let text = ok(&["import", &scene, "--out", out.to_str().unwrap()]);
    assert!(text.contains("triangles"), "{text}");
    let a: Scene = helios_core::load_scene(&scene).unwrap();
    let b: Scene = helios_core::load_scene(&out).unwrap();
    assert_eq!(a, b);

    fs::write(dir.path().join("bad.json"), "{\"schema_version\": 1}").unwrap();
    let bad = helios(&["import", dir.path().join("bad.json").to_str().unwrap()]);
    assert!(!bad.status.success());
}

#[test]
fn sunpath_json_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(dir.path());
    let json: serde_json::Value =
        serde_json::from_str(&ok(&["sunpath", "--scene", &scene, "--observer", "3,2.5,0.8", "--radius", "20"]))
            .unwrap();
    assert_eq!(json["arcs"].as_array().unwrap().len(), 12);
    let svg_path = dir.path().join("d.svg");
    ok(&[
        "sunpath",
        "--scene",
        &scene,
        "--observer",
        "3,2.5,0.8",
        "--radius",
        "20",
        "--svg",
        "stereographic",
        "--out",
        svg_path.to_str().unwrap(),
    ]);
    assert!(fs::read_to_string(&svg_path).unwrap().starts_with("<svg"));
}

#[test]
fn simulate_then_heatmap() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(dir.path());
    let result_path = dir.path().join("df.json");
    ok(&[
        "simulate",
        "--scene",
        &scene,
        "--metric",
        "df",
        "--backend",
        "oracle",
        "--center",
        "3,2.5",
        "--size",
        "4x4",
        "--spacing",
        "1",
        "--out",
        result_path.to_str().unwrap(),
    ]);
    let result: ColoredResult<f64> = serde_json::from_str(&fs::read_to_string(&result_path).unwrap()).unwrap();
    assert_eq!(result.values.len(), 25);
    assert_eq!((result.spec.min, result.spec.max), (0.0, 10.0));
    assert!(result.values.iter().all(|v| (0.0..=100.0).contains(v)));

    let png_path = dir.path().join("df.png");
    ok(&[
        "heatmap",
        result_path.to_str().unwrap(),
        "--min",
        "2",
        "--max",
        "4",
        "--block",
        "3",
        "--out",
        png_path.to_str().unwrap(),
    ]);
    let decoder = png::Decoder::new(fs::File::open(&png_path).unwrap());
    let mut reader = decoder.read_info().unwrap();
    let mut buf = vec![0; reader.output_buffer_size()];
    let info = reader.next_frame(&mut buf).unwrap();
    assert_eq!((info.width, info.height), (15, 15));
    // Bottom-left block is the first sensor (smallest x and y).
    let spec = helios_core::HeatmapSpec::new(2.0, 4.0).unwrap();
    let c = spec.color(result.values[0]);
    let o = (14 * 15) * 3;
    assert_eq!(&buf[o..o + 3], &[c.r, c.g, c.b]);

    let night = helios(&[
        "simulate",
        "--scene",
        &scene,
        "--metric",
        "illuminance",
        "--center",
        "3,2.5",
        "--size",
        "4x4",
        "--spacing",
        "1",
        "--date",
        "2026-06-21",
        "--time",
        "01:00",
    ]);
    assert!(!night.status.success());
    assert!(String::from_utf8_lossy(&night.stderr).contains("above the horizon"));
}
