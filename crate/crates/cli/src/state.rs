//! Session state and the job table behind the HTTP service.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, MutexGuard, RwLock, RwLockReadGuard, RwLockWriteGuard};

use chrono::Datelike;
use helios_core::{
    Backend, CancelToken, CivilInstant, ColoredResult, HeatmapSpec, JobStatus, Metric, ReferenceCache, Scene,
    SensorGrid, SimulationResult, SnapMode, Vec3,
};
use serde::Serialize;

use crate::run::{simulate, BackendKind, RadianceConfig};

/// Single-user session: the scene being studied and every UI setting.
#[derive(Debug, Clone)]
pub struct Session {
    pub scene: Option<Arc<Scene>>,
    pub instant: CivilInstant,
    pub snap: SnapMode,
    pub observer: Option<Vec3>,
    pub grid: Option<Arc<SensorGrid>>,
    /// User-set heatmap range; `None` means the metric default.
    pub heatmap: Option<HeatmapSpec>,
    pub transparent: bool,
}

impl Session {
    /// June 21, 12:00 of `year`, snapping off.
    pub fn new(year: i32, scene: Option<Scene>) -> Self {
        Self {
            scene: scene.map(Arc::new),
            instant: CivilInstant::new(year, 6, 21, 12, 0).expect("valid default instant"),
            snap: SnapMode::Off,
            observer: None,
            grid: None,
            heatmap: None,
            transparent: false,
        }
    }
}

/// A finished result together with its serialized reply, fixed at completion.
#[derive(Debug)]
pub struct StoredResult {
    pub result: SimulationResult,
    pub body: String,
}

#[derive(Debug, Clone)]
pub struct Job {
    pub id: u64,
    pub metric: Metric,
    pub backend: BackendKind,
    pub ambient_bounces: u32,
    pub instant: CivilInstant,
    pub status: JobStatus,
    pub history: Vec<JobStatus>,
    pub error: Option<String>,
    pub result: Option<Arc<StoredResult>>,
    pub cancel: CancelToken,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobReply {
    pub id: u64,
    pub status: JobStatus,
    pub history: Vec<JobStatus>,
    pub metric: Metric,
    pub backend: BackendKind,
    pub ambient_bounces: u32,
    pub instant: CivilInstant,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result_url: Option<String>,
}

impl Job {
    pub fn reply(&self) -> JobReply {
        JobReply {
            id: self.id,
            status: self.status,
            history: self.history.clone(),
            metric: self.metric,
            backend: self.backend,
            ambient_bounces: self.ambient_bounces,
            instant: self.instant,
            error: self.error.clone(),
            result_url: (self.status == JobStatus::Done).then(|| format!("/api/v1/results/{}", self.id)),
        }
    }
}

#[derive(Debug, Default)]
pub struct JobTable {
    next_id: u64,
    jobs: BTreeMap<u64, Job>,
}

impl JobTable {
    pub fn get(&self, id: u64) -> Option<&Job> {
        self.jobs.get(&id)
    }

    pub fn active(&self) -> Option<&Job> {
        self.jobs.values().find(|j| !j.status.is_terminal())
    }

    /// Most recent job that finished successfully.
    pub fn latest_done(&self) -> Option<&Job> {
        self.jobs.values().rev().find(|j| j.status == JobStatus::Done)
    }

    fn insert(&mut self, metric: Metric, backend: BackendKind, ambient_bounces: u32, instant: CivilInstant) -> &Job {
        self.next_id += 1;
        let id = self.next_id;
        let job = Job {
            id,
            metric,
            backend,
            ambient_bounces,
            instant,
            status: JobStatus::Pending,
            history: vec![JobStatus::Pending],
            error: None,
            result: None,
            cancel: CancelToken::new(),
        };
        self.jobs.entry(id).or_insert(job)
    }

    fn advance(&mut self, id: u64, to: JobStatus) {
        if let Some(job) = self.jobs.get_mut(&id) {
            if job.status.advance(to).is_ok() {
                job.history.push(to);
            }
        }
    }
}

/// Everything a simulation job needs, captured when it is submitted.
pub struct JobSpec {
    pub metric: Metric,
    pub backend_kind: BackendKind,
    pub ambient_bounces: u32,
    pub instant: CivilInstant,
    pub backend: Box<dyn Backend<f64>>,
    pub scene: Arc<Scene>,
    pub grid: Arc<SensorGrid>,
}

pub struct AppState {
    session: RwLock<Session>,
    jobs: Mutex<JobTable>,
    pub references: ReferenceCache<f64>,
    pub radiance: RadianceConfig,
}

impl AppState {
    pub fn new(session: Session, radiance: RadianceConfig) -> Self {
        Self {
            session: RwLock::new(session),
            jobs: Mutex::new(JobTable::default()),
            references: ReferenceCache::new(),
            radiance,
        }
    }

    /// Session for the current year with an optional scene.
    pub fn with_scene(scene: Option<Scene>, radiance: RadianceConfig) -> Self {
        Self::new(Session::new(chrono::Utc::now().year(), scene), radiance)
    }

    pub fn session(&self) -> RwLockReadGuard<'_, Session> {
        self.session.read().unwrap_or_else(|e| e.into_inner())
    }

    pub fn session_mut(&self) -> RwLockWriteGuard<'_, Session> {
        self.session.write().unwrap_or_else(|e| e.into_inner())
    }

    pub fn jobs(&self) -> MutexGuard<'_, JobTable> {
        self.jobs.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Registers a pending job unless one is already pending or running.
    /// Returns the new job's id and cancel token, or the id of the active job.
    pub fn submit(&self, spec: &JobSpec) -> Result<(JobReply, CancelToken), u64> {
        let mut jobs = self.jobs();
        if let Some(active) = jobs.active() {
            return Err(active.id);
        }
        let job = jobs.insert(spec.metric, spec.backend_kind, spec.ambient_bounces, spec.instant);
        Ok((job.reply(), job.cancel.clone()))
    }

    /// Runs a submitted job to completion on the calling thread.
    pub fn run_job(&self, id: u64, spec: JobSpec, cancel: &CancelToken) {
        self.jobs().advance(id, JobStatus::Running);
        let outcome = simulate(
            spec.backend.as_ref(),
            &spec.scene,
            &spec.grid,
            spec.metric,
            spec.instant,
            &self.references,
            cancel,
        );
        let override_spec = self.session().heatmap;
        let mut jobs = self.jobs();
        match outcome {
            Ok(result) => {
                let heatmap = override_spec.unwrap_or_else(|| HeatmapSpec::default_for(result.metric, &result.values));
                let body = serde_json::to_string(&ColoredResult::new(&result, heatmap)).expect("result serializes");
                if let Some(job) = jobs.jobs.get_mut(&id) {
                    job.result = Some(Arc::new(StoredResult { result, body }));
                }
                jobs.advance(id, JobStatus::Done);
            }
            Err(e) => {
                if let Some(job) = jobs.jobs.get_mut(&id) {
                    job.error = Some(e.to_string());
                }
                jobs.advance(id, JobStatus::Failed);
            }
        }
    }
}
