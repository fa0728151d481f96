//! Backend selection and the two simulation entry points shared by the CLI
//! and the service.

use std::path::PathBuf;
use std::str::FromStr;

use helios_core::metrics::MetricsError;
use helios_core::{
    daylight_factor, point_in_time_illuminance, Backend, CancelToken, CivilInstant, Metric, OracleBackend,
    ReferenceCache, Scene, SensorGrid, SimulationResult, SkyModel,
};
use helios_radiance::rtrace::AmbientParams;
use helios_radiance::{Installation, RadianceBackend, RadianceError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Oracle,
    Radiance,
}

impl FromStr for BackendKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "oracle" => Ok(BackendKind::Oracle),
            "radiance" => Ok(BackendKind::Radiance),
            _ => Err(format!("unknown backend {s:?} (expected oracle or radiance)")),
        }
    }
}

/// Accepts the short CLI spellings as well as the result-document names.
pub fn parse_metric(s: &str) -> Result<Metric, String> {
    match s {
        "df" | "daylight_factor" | "daylight_factor_percent" => Ok(Metric::DaylightFactorPercent),
        "illuminance" | "lux" | "illuminance_lux" => Ok(Metric::IlluminanceLux),
        _ => Err(format!("unknown metric {s:?} (expected df or illuminance)")),
    }
}

/// Where to find Radiance and where its jobs may write.
#[derive(Debug, Clone, Default)]
pub struct RadianceConfig {
    pub bin: Option<PathBuf>,
    pub work_root: Option<PathBuf>,
}

/// Builds the requested backend. Radiance is located up front so a missing
/// installation fails before any job starts.
pub fn make_backend(
    kind: BackendKind,
    ambient_bounces: u32,
    radiance: &RadianceConfig,
) -> Result<Box<dyn Backend<f64>>, RadianceError> {
    match kind {
        BackendKind::Oracle => Ok(Box::new(OracleBackend::default())),
        BackendKind::Radiance => {
            let install = Installation::discover(radiance.bin.as_deref())?;
            let mut backend = RadianceBackend::new(install).with_ambient(AmbientParams::with_bounces(ambient_bounces));
            backend.work_root = radiance.work_root.clone();
            Ok(Box::new(backend))
        }
    }
}

/// Runs `metric` over `grid`. Daylight factor forces an overcast sky; the
/// instant only matters for illuminance.
pub fn simulate(
    backend: &dyn Backend<f64>,
    scene: &Scene,
    grid: &SensorGrid,
    metric: Metric,
    instant: CivilInstant,
    references: &ReferenceCache<f64>,
    cancel: &CancelToken,
) -> Result<SimulationResult, MetricsError> {
    match metric {
        Metric::DaylightFactorPercent => {
            daylight_factor(backend, scene, grid, &SkyModel::overcast(scene.site, instant), references, cancel)
        }
        Metric::IlluminanceLux => point_in_time_illuminance(backend, scene, grid, instant, cancel),
    }
}
