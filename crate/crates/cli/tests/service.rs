use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use helios_cli::run::RadianceConfig;
use helios_cli::{router, AppState};
use helios_core::fixtures::windowed_room;
use helios_core::Scene;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn app_with(scene: Option<Scene>) -> Router {
    router(Arc::new(AppState::with_scene(scene, RadianceConfig::default())))
}

fn app() -> Router {
    app_with(Some(windowed_room()))
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Vec<u8>) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(v) => req.header("content-type", "application/json").body(Body::from(v.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, bytes)
}

async fn get(app: &Router, uri: &str) -> (StatusCode, Value) {
    let (s, b) = call(app, Method::GET, uri, None).await;
    (s, serde_json::from_slice(&b).unwrap_or(Value::Null))
}

async fn post(app: &Router, uri: &str, body: Value) -> (StatusCode, Value) {
    let (s, b) = call(app, Method::POST, uri, Some(body)).await;
    (s, serde_json::from_slice(&b).unwrap_or(Value::Null))
}

fn instant(v: &Value) -> (i64, i64, i64, i64) {
    let t = &v["instant"];
    (
        t["month"].as_i64().unwrap(),
        t["day"].as_i64().unwrap(),
        t["hour"].as_i64().unwrap(),
        t["minute"].as_i64().unwrap(),
    )
}

async fn wait_done(app: &Router, id: u64) -> Value {
    let deadline = Instant::now() + Duration::from_secs(120);
    loop {
        let (s, job) = get(app, &format!("/api/v1/jobs/{id}")).await;
        assert_eq!(s, StatusCode::OK);
        if job["status"] == "done" || job["status"] == "failed" {
            return job;
        }
        assert!(Instant::now() < deadline, "job {id} did not finish");
        tokio::time::sleep(Duration::from_millis(20)).await;
    }
}

#[tokio::test]
async fn sun_defaults_to_midsummer_noon() {
    let app = app_with(None);
    let (s, v) = get(&app, "/api/sun").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(instant(&v), (6, 21, 12, 0));
    assert_eq!(v["snap_mode"], "off");
    let alt = v["position"]["altitude_deg"].as_f64().unwrap();
    assert!(alt > 60.0 && alt < 80.0, "{alt}");
    let (s2, v2) = get(&app, "/api/v1/sun").await;
    assert_eq!(s2, StatusCode::OK);
    assert_eq!(v, v2);
}

#[tokio::test]
async fn month_thirteen_is_a_field_error() {
    let app = app();
    let (s, v) = post(&app, "/api/time", json!({"month": 13, "day": 1, "hour": 12})).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["field"], "month");
    assert!(v["code"].is_string() && v["message"].is_string());
    // State untouched.
    let (_, sun) = get(&app, "/api/sun").await;
    assert_eq!(instant(&sun), (6, 21, 12, 0));
}

#[tokio::test]
async fn malformed_and_mistyped_bodies() {
    let app = app();
    let (s, b) = call(&app, Method::POST, "/api/v1/time", Some(json!("not an object"))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY, "{}", String::from_utf8_lossy(&b));
    let req =
        Request::post("/api/v1/time").header("content-type", "application/json").body(Body::from("{oops")).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    assert_eq!(resp.status(), StatusCode::BAD_REQUEST);
    let (s, v) = get(&app, "/api/v1/nowhere").await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(v["code"], "not_found");
}

#[tokio::test]
async fn time_steps_wrap_and_snap() {
    let app = app();
    let (_, v) = post(&app, "/api/v1/time/step", json!({"hour": 3})).await;
    assert_eq!(instant(&v), (6, 21, 15, 0));
    post(&app, "/api/v1/time", json!({"month": 6, "day": 21, "hour": 23})).await;
    let (_, v) = post(&app, "/api/v1/time/step", json!({"hour": 2})).await;
    assert_eq!(instant(&v), (6, 22, 1, 0));

    // Setting a time or a mode does not move the clock; the next step snaps.
    post(&app, "/api/v1/time", json!({"month": 3, "day": 5, "hour": 10})).await;
    let (s, v) = post(&app, "/api/v1/time/snap-mode", json!({"mode": "day"})).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["snap_mode"], "day");
    assert_eq!(instant(&v), (3, 5, 10, 0));
    let (_, v) = post(&app, "/api/v1/time/step", json!({"day": 1})).await;
    assert_eq!(instant(&v), (3, 21, 10, 0));
    let (_, v) = post(&app, "/api/v1/time/step", json!({"day": -1})).await;
    assert_eq!(instant(&v), (2, 21, 10, 0));
    post(&app, "/api/v1/time/snap-mode", json!({"mode": "hour"})).await;
    post(&app, "/api/v1/time", json!({"month": 6, "day": 21, "hour": 12, "minute": 20})).await;
    let (_, v) = post(&app, "/api/v1/time/step", json!({"hour": 1})).await;
    assert_eq!(instant(&v), (6, 21, 14, 0));

    let (s, v) = post(&app, "/api/v1/time/snap-mode", json!({"mode": "sometimes"})).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY, "{v}");
}

#[tokio::test]
async fn nine_point_buttons() {
    let app = app();
    let (_, v) = post(&app, "/api/v1/time/nine-point", json!({"index": 0})).await;
    assert_eq!(instant(&v), (6, 21, 9, 0));
    let (_, v) = post(&app, "/api/v1/time/nine-point", json!({"index": 8})).await;
    assert_eq!(instant(&v), (12, 22, 15, 0));
    let (s, v) = post(&app, "/api/v1/time/nine-point", json!({"index": 9})).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["field"], "index");
    let (_, sun) = get(&app, "/api/v1/sun").await;
    assert_eq!(instant(&sun), (12, 22, 15, 0));
}

#[tokio::test]
async fn scene_round_trip_and_validation() {
    let app = app_with(None);
    let (s, v) = get(&app, "/api/v1/scene").await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["code"], "no_scene");

    let text = windowed_room::<f64>().to_json_string();
    let scene: Value = serde_json::from_str(&text).unwrap();
    let (s, summary) = post(&app, "/api/v1/scene", scene.clone()).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(summary["triangles"].as_u64().unwrap() as usize, windowed_room::<f64>().triangle_count());
    let (s, back) = get(&app, "/api/v1/scene").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(back, scene);

    let mut broken = scene.clone();
    broken["site"]["lat"] = json!(123.0);
    let (s, v) = post(&app, "/api/v1/scene", broken).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY, "{v}");
    let (_, still) = get(&app, "/api/v1/scene").await;
    assert_eq!(still, scene);
}

#[tokio::test]
async fn sunpath_query() {
    let app = app();
    let (s, v) = get(&app, "/api/v1/sunpath?observer=3,2.5,0.8&radius=50").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["arcs"].as_array().unwrap().len(), 12);
    let (s, v) = get(&app, "/api/v1/sunpath?observer=3,2.5,0.8&radius=50&strict=true").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["arcs"].as_array().unwrap().len(), 11);
    let (s, v) = get(&app, "/api/v1/sunpath?observer=3,2.5&radius=50").await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["field"], "observer");
    let (s, v) = get(&app, "/api/v1/sunpath?observer=3,2.5,0.8&radius=-1").await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["field"], "radius");
}

#[tokio::test]
async fn grid_validation() {
    let app = app();
    let spec = json!({"center": [3.0, 2.5], "height": 0.8, "size": [4.0, 4.0], "spacing": [1.0, 1.0]});
    let (s, g) = post(&app, "/api/v1/grid", spec).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(g["sensors"].as_array().unwrap().len(), 25);
    let (_, again) = get(&app, "/api/v1/grid").await;
    assert_eq!(again, g);
    let bad = json!({"center": [3.0, 2.5], "height": 0.8, "size": [4.0, 4.0], "spacing": [0.0, 1.0]});
    let (s, v) = post(&app, "/api/v1/grid", bad).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["field"], "spacing_x");
}

#[tokio::test]
async fn simulate_preconditions() {
    let app = app();
    let (s, v) = post(&app, "/api/v1/simulate", json!({"metric": "df"})).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["code"], "no_grid");
    post(&app, "/api/v1/grid", json!({"center": [3.0, 2.5], "height": 0.8, "size": [2.0, 2.0], "spacing": [1.0, 1.0]}))
        .await;
    let (s, v) = post(&app, "/api/v1/simulate", json!({"metric": "glare"})).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["field"], "metric");
    post(&app, "/api/v1/time", json!({"month": 6, "day": 21, "hour": 1})).await;
    let (s, v) = post(&app, "/api/v1/simulate", json!({"metric": "illuminance"})).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["field"], "instant");
    let (s, _) = get(&app, "/api/v1/jobs/1").await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn job_lifecycle_and_immutable_results() {
    let app = app();
    post(&app, "/api/v1/grid", json!({"center": [3.0, 2.5], "height": 0.8, "size": [4.0, 4.0], "spacing": [0.5, 0.5]}))
        .await;
    let (s, job) = post(&app, "/api/simulate", json!({"metric": "df", "backend": "oracle"})).await;
    assert_eq!(s, StatusCode::ACCEPTED);
    assert_eq!(job["status"], "pending");
    let id = job["id"].as_u64().unwrap();

    let done = wait_done(&app, id).await;
    assert_eq!(done["status"], "done", "{done}");
    assert_eq!(done["history"], json!(["pending", "running", "done"]));
    let url = done["result_url"].as_str().unwrap().to_owned();
    assert_eq!(url, format!("/api/v1/results/{id}"));

    let (s1, a) = call(&app, Method::GET, &url, None).await;
    // Changing the range afterwards must not touch the stored result.
    let (s, recolored) = post(&app, "/api/v1/heatmap-range", json!({"min": 2.0, "max": 4.0})).await;
    assert_eq!(s, StatusCode::OK);
    let (s2, b) = call(&app, Method::GET, &url, None).await;
    assert_eq!((s1, s2), (StatusCode::OK, StatusCode::OK));
    assert_eq!(a, b);

    let result: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(result["metric"], "daylight_factor_percent");
    assert_eq!(result["spec"], json!({"min": 0.0, "mid": 5.0, "max": 10.0}));
    let n = result["grid"]["sensors"].as_array().unwrap().len();
    assert_eq!(n, 81);
    assert_eq!(result["values"].as_array().unwrap().len(), n);
    assert_eq!(result["colors"].as_array().unwrap().len(), n);
    assert_eq!(recolored["spec"], json!({"min": 2.0, "mid": 3.0, "max": 4.0}));
    assert_eq!(recolored["result"]["values"], result["values"]);
    assert_eq!(recolored["job_id"], json!(id));
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn sun_stays_fast_during_a_long_job() {
    let app = app();
    // About 20k sensors keeps the oracle busy for a while in a debug build.
    post(
        &app,
        "/api/v1/grid",
        json!({"center": [3.0, 2.5], "height": 0.8, "size": [5.9, 4.9], "spacing": [0.035, 0.035]}),
    )
    .await;
    let (s, job) = post(&app, "/api/v1/simulate", json!({"metric": "df"})).await;
    assert_eq!(s, StatusCode::ACCEPTED);
    let id = job["id"].as_u64().unwrap();

    let (s, v) = post(&app, "/api/v1/simulate", json!({"metric": "df"})).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["code"], "job_active");

    let mut measured = Vec::new();
    loop {
        let (_, j) = get(&app, &format!("/api/v1/jobs/{id}")).await;
        if j["status"] == "done" || j["status"] == "failed" {
            break;
        }
        if j["status"] == "running" {
            let t0 = Instant::now();
            let (s, _) = get(&app, "/api/v1/sun").await;
            let (s2, _) = post(&app, "/api/v1/time/step", json!({"hour": 1})).await;
            let dt = t0.elapsed();
            let (_, after) = get(&app, &format!("/api/v1/jobs/{id}")).await;
            assert_eq!((s, s2), (StatusCode::OK, StatusCode::OK));
            if after["status"] == "running" {
                measured.push(dt);
            }
        }
        tokio::time::sleep(Duration::from_millis(5)).await;
    }
    assert!(measured.len() >= 3, "job finished too fast to measure: {} samples", measured.len());
    let worst = measured.iter().max().unwrap();
    assert!(*worst < Duration::from_millis(100), "slowest sun/time round trip {worst:?}");
    let done = wait_done(&app, id).await;
    assert_eq!(done["status"], "done");
}

#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn cancelled_job_fails() {
    let app = app();
    post(
        &app,
        "/api/v1/grid",
        json!({"center": [3.0, 2.5], "height": 0.8, "size": [5.9, 4.9], "spacing": [0.035, 0.035]}),
    )
    .await;
    let (_, job) = post(&app, "/api/v1/simulate", json!({"metric": "df"})).await;
    let id = job["id"].as_u64().unwrap();
    let (s, _) = call(&app, Method::DELETE, &format!("/api/v1/jobs/{id}"), None).await;
    assert_eq!(s, StatusCode::ACCEPTED);
    let done = wait_done(&app, id).await;
    assert_eq!(done["status"], "failed");
    assert!(done["error"].as_str().unwrap().contains("cancel"), "{done}");
    let (s, v) = get(&app, &format!("/api/v1/results/{id}")).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["code"], "not_ready");
}

#[tokio::test]
async fn radiance_missing_is_reported() {
    let missing = RadianceConfig { bin: Some("/nonexistent/radiance/bin".into()), work_root: None };
    // An explicit but wrong directory still falls through to discovery, so
    // this only fails where no Radiance exists at all.
    if helios_radiance::Installation::discover(missing.bin.as_deref()).is_ok() {
        eprintln!("Radiance is installed; skipping");
        return;
    }
    let app = router(Arc::new(AppState::with_scene(Some(windowed_room()), missing)));
    post(&app, "/api/v1/grid", json!({"center": [3.0, 2.5], "height": 0.8, "size": [2.0, 2.0], "spacing": [1.0, 1.0]}))
        .await;
    let (s, v) = post(&app, "/api/v1/simulate", json!({"metric": "df", "backend": "radiance"})).await;
    assert_eq!(s, StatusCode::SERVICE_UNAVAILABLE);
    assert_eq!(v["code"], "radiance_not_installed");
    assert!(v["message"].as_str().unwrap().contains("HELIOS_RADIANCE_BIN"));
}

#[tokio::test]
async fn mutations_are_idempotent() {
    let app = app();
    let bodies = [
        ("/api/v1/time", json!({"month": 9, "day": 3, "hour": 14, "minute": 40})),
        ("/api/v1/time/snap-mode", json!({"mode": "both"})),
        ("/api/v1/time/nine-point", json!({"index": 4})),
        ("/api/v1/grid", json!({"center": [3.0, 2.5], "height": 0.8, "size": [2.0, 2.0], "spacing": [0.5, 0.5]})),
        ("/api/v1/heatmap-range", json!({"min": 2.0, "max": 4.0})),
        ("/api/v1/display/transparent", json!({"enabled": true})),
        ("/api/v1/scene", serde_json::from_str(&windowed_room::<f64>().to_json_string()).unwrap()),
    ];
    for (uri, body) in bodies {
        let first = post(&app, uri, body.clone()).await;
        let snapshot = (get(&app, "/api/v1/sun").await, get(&app, "/api/v1/grid").await);
        let second = post(&app, uri, body).await;
        assert_eq!(first, second, "{uri}");
        assert_eq!(snapshot, (get(&app, "/api/v1/sun").await, get(&app, "/api/v1/grid").await), "{uri}");
    }
    let (_, t) = get(&app, "/api/v1/display/transparent").await;
    assert_eq!(t, json!({"enabled": true}));
}

#[tokio::test]
async fn heatmap_range_validation_and_reset() {
    let app = app();
    let (s, v) = post(&app, "/api/v1/heatmap-range", json!({"min": 4.0, "max": 2.0})).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["field"], "min");
    let (s, v) = post(&app, "/api/v1/heatmap-range", json!({"min": 0.0, "mid": 20.0, "max": 10.0})).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["field"], "mid");
    let (s, v) = post(&app, "/api/v1/heatmap-range", json!({"reset": true})).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["spec"], Value::Null);
}
