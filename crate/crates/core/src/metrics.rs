//! Illuminance and Daylight Factor results.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::{Backend, BackendError};
use crate::geometry::Vec3;
use crate::grid::{Sensor, SensorGrid};
use crate::jobs::CancelToken;
use crate::num::Real;
use crate::scene::{Scene, ValidationError};
use crate::sky::{SkyKind, SkyModel};
use crate::time::CivilInstant;

/// Radiance luminous efficacy (lm/W) and RGB luminance weights.
pub const LUMINOUS_EFFICACY: f64 = 179.0;
pub const RGB_WEIGHTS: [f64; 3] = [0.265, 0.670, 0.065];

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("irradiance component {channel} is {value}; components must be finite and non-negative")]
    Irradiance { channel: char, value: f64 },
    #[error("unobstructed reference illuminance is {0}; the sky emitted no light")]
    NoReference(f64),
    #[error("sky site: {0}")]
    Site(#[from] ValidationError),
    #[error(transparent)]
    Backend(#[from] BackendError),
}

/// Per-sensor RGB irradiance as reported by `rtrace -I`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct IrradianceTriple<T> {
    pub r: T,
    pub g: T,
    pub b: T,
}

impl<T: Real> IrradianceTriple<T> {
    pub fn new(r: T, g: T, b: T) -> Self {
        Self { r, g, b }
    }

    pub fn validate(&self) -> Result<(), MetricsError> {
        for (channel, v) in [('r', self.r), ('g', self.g), ('b', self.b)] {
            if !(v.is_finite() && v >= T::zero()) {
                return Err(MetricsError::Irradiance { channel, value: v.as_f64() });
            }
        }
        Ok(())
    }
}

/// `179 · (0.265 r + 0.670 g + 0.065 b)` lux.
pub fn illuminance_from_irradiance<T: Real>(t: IrradianceTriple<T>) -> Result<T, MetricsError> {
    t.validate()?;
    let [wr, wg, wb] = RGB_WEIGHTS.map(T::lit);
    Ok(T::lit(LUMINOUS_EFFICACY) * (wr * t.r + wg * t.g + wb * t.b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    IlluminanceLux,
    DaylightFactorPercent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct SimulationResult<T> {
    pub metric: Metric,
    pub backend: String,
    pub sky: SkyModel<T>,
    pub grid: SensorGrid<T>,
    pub values: Vec<T>,
}

impl<T: Real> SimulationResult<T> {
    pub fn mean(&self) -> T {
        if self.values.is_empty() {
            return T::zero();
        }
        self.values.iter().copied().sum::<T>() / T::from_usize_lossy(self.values.len())
    }

    pub fn min_max(&self) -> Option<(T, T)> {
        let mut it = self.values.iter().copied();
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }
}

/// Unobstructed reference illuminance per backend and sky, computed once.
#[derive(Debug, Default)]
pub struct ReferenceCache<T> {
    values: Mutex<HashMap<String, T>>,
}

impl<T: Real> ReferenceCache<T> {
    pub fn new() -> Self {
        Self { values: Mutex::new(HashMap::new()) }
    }

    pub fn len(&self) -> usize {
        self.values.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn key(backend: &dyn Backend<T>, sky: &SkyModel<T>, height: T) -> String {
        let sky = serde_json::to_string(sky).expect("sky serializes");
        format!("{}|{}|{}", backend.fingerprint(), sky, height)
    }

    /// Illuminance at a single upward sensor under `sky` with no geometry.
    pub fn unobstructed(
        &self,
        backend: &dyn Backend<T>,
        sky: &SkyModel<T>,
        height: T,
        cancel: &CancelToken,
    ) -> Result<T, MetricsError> {
        let key = Self::key(backend, sky, height);
        if let Some(v) = self.values.lock().expect("cache lock").get(&key) {
            return Ok(*v);
        }
        let empty = Scene::unobstructed(sky.site)?;
        let sensor = Sensor::upward(Vec3::new(T::zero(), T::zero(), height));
        let e = backend.illuminance(&empty, &[sensor], sky, cancel)?[0];
        self.values.lock().expect("cache lock").insert(key, e);
        Ok(e)
    }
}

/// Daylight Factor (percent) per sensor: `100 · E_obs / E_unobs` under the
/// CIE overcast version of `sky`.
pub fn daylight_factor<T: Real>(
    backend: &dyn Backend<T>,
    scene: &Scene<T>,
    grid: &SensorGrid<T>,
    sky: &SkyModel<T>,
    cache: &ReferenceCache<T>,
    cancel: &CancelToken,
) -> Result<SimulationResult<T>, MetricsError> {
    let sky = SkyModel { kind: SkyKind::CieOvercast, site: scene.site, ..*sky };
    let reference = cache.unobstructed(backend, &sky, grid.height_z, cancel)?;
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail too
    if !(reference > T::zero()) {
        return Err(MetricsError::NoReference(reference.as_f64()));
    }
    let observed = backend.illuminance(scene, &grid.sensors, &sky, cancel)?;
    let hundred = T::lit(100.0);
    Ok(SimulationResult {
        metric: Metric::DaylightFactorPercent,
        backend: backend.name().to_string(),
        sky,
        grid: grid.clone(),
        values: observed.into_iter().map(|e| hundred * e / reference).collect(),
    })
}

/// Illuminance (lux) per sensor under a CIE clear sky at `instant`.
pub fn point_in_time_illuminance<T: Real>(
    backend: &dyn Backend<T>,
    scene: &Scene<T>,
    grid: &SensorGrid<T>,
    instant: CivilInstant,
    cancel: &CancelToken,
) -> Result<SimulationResult<T>, MetricsError> {
    let sky = SkyModel::clear(scene.site, instant);
    sky.validate().map_err(BackendError::from)?;
    let values = backend.illuminance(scene, &grid.sensors, &sky, cancel)?;
    Ok(SimulationResult {
        metric: Metric::IlluminanceLux,
        backend: backend.name().to_string(),
        sky,
        grid: grid.clone(),
        values,
    })
}
