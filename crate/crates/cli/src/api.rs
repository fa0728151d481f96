//! HTTP routes. Everything lives under `/api/v1`; `/api` is an alias.

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use helios_core::fixtures::san_francisco;
use helios_core::sunpath::DEFAULT_STEP_MINUTES;
use helios_core::{
    build_diagram, nine_point_matrix, solar_position, step_time, CivilInstant, ColoredResult, DiagramError,
    DiagramOptions, GridSpec, HeatmapSpec, JobStatus, Scene, SensorGrid, Site, SkyModel, SnapMode, SolarPosition,
    TimeStep, Vec3,
};
use helios_radiance::RadianceError;
use serde::{Deserialize, Serialize};

use crate::error::ApiError;
use crate::run::{make_backend, parse_metric, BackendKind};
use crate::state::{AppState, JobReply, JobSpec, Session};

type Shared = Arc<AppState>;
type ApiResult<T> = Result<T, ApiError>;
type Body<T> = Result<Json<T>, JsonRejection>;

pub fn router(state: Shared) -> Router {
    let api = Router::new()
        .route("/scene", get(get_scene).post(post_scene))
        .route("/sun", get(get_sun))
        .route("/time", get(get_time).post(post_time))
        .route("/time/step", post(post_step))
        .route("/time/snap-mode", post(post_snap_mode))
        .route("/time/nine-point", post(post_nine_point))
        .route("/sunpath", get(get_sunpath))
        .route("/grid", get(get_grid).post(post_grid))
        .route("/simulate", post(post_simulate))
        .route("/jobs/{id}", get(get_job).delete(cancel_job))
        .route("/results/{id}", get(get_result))
        .route("/heatmap-range", get(get_heatmap_range).post(post_heatmap_range))
        .route("/display/transparent", get(get_transparent).post(post_transparent))
        .with_state(state);
    Router::new().nest("/api/v1", api.clone()).nest("/api", api).fallback(|| async { ApiError::not_found("route") })
}

/// Site used for sun queries before any scene is loaded.
fn session_site(s: &Session) -> Site {
    s.scene.as_ref().map(|sc| sc.site).unwrap_or_else(san_francisco)
}

fn require_scene(s: &Session) -> ApiResult<Arc<Scene>> {
    s.scene.clone().ok_or_else(|| ApiError::conflict("no_scene", "no scene loaded; POST /api/v1/scene first"))
}

// ---- scene ----

#[derive(Debug, Serialize)]
pub struct SceneSummary {
    pub meshes: usize,
    pub triangles: usize,
    pub materials: Vec<String>,
    pub bounds: Option<helios_core::Aabb>,
    pub site: Site,
}

impl SceneSummary {
    fn of(scene: &Scene) -> Self {
        Self {
            meshes: scene.meshes.len(),
            triangles: scene.triangle_count(),
            materials: scene.materials.iter().map(|m| m.name.clone()).collect(),
            bounds: scene.bounds(),
            site: scene.site,
        }
    }
}

async fn get_scene(State(state): State<Shared>) -> ApiResult<Response> {
    let scene = require_scene(&state.session())?;
    Ok(([(header::CONTENT_TYPE, "application/json")], scene.to_json_string()).into_response())
}

async fn post_scene(State(state): State<Shared>, body: String) -> ApiResult<Json<SceneSummary>> {
    let scene = Scene::from_json_str(&body)?;
    let summary = SceneSummary::of(&scene);
    let mut s = state.session_mut();
    if s.scene.as_deref() != Some(&scene) {
        // Grid and observer belong to the old geometry.
        s.scene = Some(Arc::new(scene));
        s.grid = None;
        s.observer = None;
    }
    Ok(Json(summary))
}

// ---- sun and time ----

#[derive(Debug, Serialize)]
pub struct SunReply {
    pub instant: CivilInstant,
    pub snap_mode: SnapMode,
    pub site: Site,
    pub position: SolarPosition,
}

impl SunReply {
    fn of(s: &Session) -> Self {
        let site = session_site(s);
        Self { instant: s.instant, snap_mode: s.snap, site, position: solar_position(&site, &s.instant) }
    }
}

async fn get_sun(State(state): State<Shared>) -> Json<SunReply> {
    Json(SunReply::of(&state.session()))
}

async fn get_time(State(state): State<Shared>) -> Json<SunReply> {
    Json(SunReply::of(&state.session()))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TimeBody {
    year: Option<i32>,
    month: u32,
    day: u32,
    hour: u32,
    #[serde(default)]
    minute: u32,
}

async fn post_time(State(state): State<Shared>, body: Body<TimeBody>) -> ApiResult<Json<SunReply>> {
    let Json(b) = body?;
    let mut s = state.session_mut();
    // Absolute times are taken as given; snapping applies to steps only.
    s.instant = CivilInstant::new(b.year.unwrap_or(s.instant.year()), b.month, b.day, b.hour, b.minute)?;
    Ok(Json(SunReply::of(&s)))
}

async fn post_step(State(state): State<Shared>, body: Body<TimeStep>) -> ApiResult<Json<SunReply>> {
    let Json(step) = body?;
    let mut s = state.session_mut();
    s.instant = step_time(s.instant, step, s.snap);
    Ok(Json(SunReply::of(&s)))
}

#[derive(Debug, Deserialize)]
struct SnapBody {
    mode: SnapMode,
}

async fn post_snap_mode(State(state): State<Shared>, body: Body<SnapBody>) -> ApiResult<Json<SunReply>> {
    let Json(b) = body?;
    let mut s = state.session_mut();
    s.snap = b.mode;
    Ok(Json(SunReply::of(&s)))
}

#[derive(Debug, Deserialize)]
struct NinePointBody {
    index: usize,
}

async fn post_nine_point(State(state): State<Shared>, body: Body<NinePointBody>) -> ApiResult<Json<SunReply>> {
    let Json(b) = body?;
    let mut s = state.session_mut();
    let matrix = nine_point_matrix(s.instant.year());
    let t = *matrix
        .get(b.index)
        .ok_or_else(|| ApiError::invalid("index", format!("index must be 0..=8, got {}", b.index)))?;
    s.instant = t;
    Ok(Json(SunReply::of(&s)))
}

// ---- sun path ----

#[derive(Debug, Deserialize)]
struct SunpathQuery {
    observer: Option<String>,
    radius: Option<f64>,
    #[serde(default)]
    strict: bool,
    step: Option<u32>,
}

pub fn parse_triple(s: &str) -> Option<Vec3> {
    let v: Vec<f64> = s.split(',').map(|p| p.trim().parse().ok()).collect::<Option<_>>()?;
    match v[..] {
        [x, y, z] => Some(Vec3::new(x, y, z)),
        _ => None,
    }
}

/// Scene centre at floor level and half the plan diagonal.
fn default_view(scene: &Scene) -> (Vec3, f64) {
    match scene.bounds() {
        Some(b) => {
            let c = b.center();
            let e = b.extents();
            (Vec3::new(c.x, c.y, b.min.z), (0.5 * (e.x * e.x + e.y * e.y).sqrt()).max(1.0))
        }
        None => (Vec3::zero(), 10.0),
    }
}

async fn get_sunpath(
    State(state): State<Shared>,
    query: Result<Query<SunpathQuery>, axum::extract::rejection::QueryRejection>,
) -> ApiResult<Json<helios_core::SunPathDiagram>> {
    let Query(q) = query.map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid", e.body_text()))?;
    let (scene, year, remembered) = {
        let s = state.session();
        (require_scene(&s)?, s.instant.year(), s.observer)
    };
    let (default_observer, default_radius) = default_view(&scene);
    let observer = match q.observer.as_deref() {
        Some(text) => {
            parse_triple(text).ok_or_else(|| ApiError::invalid("observer", format!("expected x,y,z, got {text:?}")))?
        }
        None => remembered.unwrap_or(default_observer),
    };
    let options = DiagramOptions { year, strict: q.strict, step_minutes: q.step.unwrap_or(DEFAULT_STEP_MINUTES) };
    let diagram = build_diagram(&scene, observer, q.radius.unwrap_or(default_radius), &options).map_err(|e| {
        let field = match e {
            DiagramError::Radius(_) => "radius",
            DiagramError::Observer => "observer",
            DiagramError::Step(_) => "step",
        };
        ApiError::invalid(field, e.to_string())
    })?;
    state.session_mut().observer = Some(observer);
    Ok(Json(diagram))
}

// ---- grid ----

async fn get_grid(State(state): State<Shared>) -> ApiResult<Json<SensorGrid>> {
    let grid = state.session().grid.clone().ok_or_else(|| ApiError::not_found("grid"))?;
    Ok(Json((*grid).clone()))
}

async fn post_grid(State(state): State<Shared>, body: Body<GridSpec>) -> ApiResult<Json<SensorGrid>> {
    let Json(spec) = body?;
    let grid = SensorGrid::from_spec(&spec)?;
    state.session_mut().grid = Some(Arc::new(grid.clone()));
    Ok(Json(grid))
}

// ---- simulation jobs ----

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateBody {
    metric: String,
    #[serde(default = "default_backend")]
    backend: BackendKind,
    #[serde(default = "default_bounces")]
    ab: u32,
}

fn default_backend() -> BackendKind {
    BackendKind::Oracle
}

fn default_bounces() -> u32 {
    2
}

async fn post_simulate(
    State(state): State<Shared>,
    body: Body<SimulateBody>,
) -> ApiResult<(StatusCode, Json<JobReply>)> {
    let Json(b) = body?;
    let metric = parse_metric(&b.metric).map_err(|m| ApiError::invalid("metric", m))?;
    let (scene, grid, instant) = {
        let s = state.session();
        let scene = require_scene(&s)?;
        let grid =
            s.grid.clone().ok_or_else(|| ApiError::conflict("no_grid", "no sensor grid; POST /api/v1/grid first"))?;
        (scene, grid, s.instant)
    };
    if metric == helios_core::Metric::IlluminanceLux {
        SkyModel::clear(scene.site, instant).validate().map_err(|e| ApiError::invalid("instant", e.to_string()))?;
    }
    let backend = make_backend(b.backend, b.ab, &state.radiance).map_err(|e| match e {
        RadianceError::NotInstalled { .. } => {
            ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "radiance_not_installed", e.to_string())
        }
        other => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "backend", other.to_string()),
    })?;
    let spec = JobSpec { metric, backend_kind: b.backend, ambient_bounces: b.ab, instant, backend, scene, grid };
    let (reply, cancel) = state
        .submit(&spec)
        .map_err(|active| ApiError::conflict("job_active", format!("job {active} is still pending or running")))?;
    let id = reply.id;
    let worker = state.clone();
    tokio::task::spawn_blocking(move || worker.run_job(id, spec, &cancel));
    Ok((StatusCode::ACCEPTED, Json(reply)))
}

async fn get_job(State(state): State<Shared>, Path(id): Path<u64>) -> ApiResult<Json<JobReply>> {
    let jobs = state.jobs();
    let job = jobs.get(id).ok_or_else(|| ApiError::not_found("job"))?;
    Ok(Json(job.reply()))
}

/// Requests cancellation; the job fails at its next checkpoint.
async fn cancel_job(State(state): State<Shared>, Path(id): Path<u64>) -> ApiResult<(StatusCode, Json<JobReply>)> {
    let jobs = state.jobs();
    let job = jobs.get(id).ok_or_else(|| ApiError::not_found("job"))?;
    job.cancel.cancel();
    Ok((StatusCode::ACCEPTED, Json(job.reply())))
}

async fn get_result(State(state): State<Shared>, Path(id): Path<u64>) -> ApiResult<Response> {
    let stored = {
        let jobs = state.jobs();
        let job = jobs.get(id).ok_or_else(|| ApiError::not_found("job"))?;
        match (&job.result, job.status) {
            (Some(r), JobStatus::Done) => r.clone(),
            _ => {
                return Err(ApiError::conflict(
                    "not_ready",
                    format!("job {id} is {:?}; no result", job.status).to_lowercase(),
                ))
            }
        }
    };
    Ok(([(header::CONTENT_TYPE, "application/json")], stored.body.clone()).into_response())
}

// ---- display settings ----

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RangeBody {
    min: Option<f64>,
    mid: Option<f64>,
    max: Option<f64>,
    #[serde(default)]
    reset: bool,
}

#[derive(Debug, Serialize)]
pub struct RangeReply {
    /// The user range, absent when the metric default applies.
    pub spec: Option<HeatmapSpec>,
    /// The latest finished result recoloured with the range now in effect.
    pub result: Option<ColoredResult<f64>>,
    pub job_id: Option<u64>,
}

fn range_reply(state: &AppState, spec: Option<HeatmapSpec>) -> RangeReply {
    let latest = state.jobs().latest_done().and_then(|j| Some((j.id, j.result.clone()?)));
    let (job_id, result) = match latest {
        Some((id, stored)) => {
            let r = &stored.result;
            let used = spec.unwrap_or_else(|| HeatmapSpec::default_for(r.metric, &r.values));
            (Some(id), Some(ColoredResult::new(r, used)))
        }
        None => (None, None),
    };
    RangeReply { spec, result, job_id }
}

async fn get_heatmap_range(State(state): State<Shared>) -> Json<RangeReply> {
    let spec = state.session().heatmap;
    Json(range_reply(&state, spec))
}

async fn post_heatmap_range(State(state): State<Shared>, body: Body<RangeBody>) -> ApiResult<Json<RangeReply>> {
    let Json(b) = body?;
    let spec = if b.reset {
        None
    } else {
        let min = b.min.ok_or_else(|| ApiError::invalid("min", "min is required unless reset is set"))?;
        let max = b.max.ok_or_else(|| ApiError::invalid("max", "max is required unless reset is set"))?;
        Some(match b.mid {
            Some(mid) => HeatmapSpec::with_mid(min, mid, max)?,
            None => HeatmapSpec::new(min, max)?,
        })
    };
    state.session_mut().heatmap = spec;
    Ok(Json(range_reply(&state, spec)))
}

#[derive(Debug, Serialize, Deserialize)]
struct TransparentBody {
    enabled: bool,
}

async fn get_transparent(State(state): State<Shared>) -> Json<TransparentBody> {
    Json(TransparentBody { enabled: state.session().transparent })
}

async fn post_transparent(
    State(state): State<Shared>,
    body: Body<TransparentBody>,
) -> ApiResult<Json<TransparentBody>> {
    let Json(b) = body?;
    state.session_mut().transparent = b.enabled;
    Ok(Json(b))
}
