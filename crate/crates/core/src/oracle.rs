//! Reference simulator: shadow-tested direct sun plus a patch-integrated sky.
//!
//! No interreflection. The sky hemisphere is split into Tregenza bands, and
//! Reinhart subdivision refines each patch into `mf × mf` parts (145, 577,
//! 1297 ... patches). Each patch is tested with a single ray through its
//! center and weighted by the beam transmission along that ray.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::backend::{Backend, BackendError};
use crate::geometry::Vec3;
use crate::grid::Sensor;
use crate::jobs::CancelToken;
use crate::num::Real;
use crate::raycast::beam_transmission;
use crate::scene::Scene;
use crate::sky::{DirectNormalModel, SkyModel};
use crate::solar::{sun_vector, SolarPosition};

/// Patches per Tregenza band, horizon upwards, excluding the zenith cap.
pub const TREGENZA_BANDS: [usize; 7] = [30, 30, 24, 24, 18, 12, 6];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct OracleConfig<T> {
    /// Reinhart subdivision factor; the hemisphere has `144·mf² + 1` patches.
    pub subdivision: usize,
    pub direct_normal: DirectNormalModel<T>,
}

impl<T: Real> Default for OracleConfig<T> {
    fn default() -> Self {
        Self { subdivision: 1, direct_normal: DirectNormalModel::default() }
    }
}

impl<T: Real> OracleConfig<T> {
    pub fn with_subdivision(subdivision: usize) -> Self {
        Self { subdivision: subdivision.max(1), ..Self::default() }
    }

    pub fn sky_patches(&self) -> usize {
        patch_count(self.subdivision)
    }
}

pub fn patch_count(subdivision: usize) -> usize {
    let mf = subdivision.max(1);
    144 * mf * mf + 1
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkyPatch<T> {
    /// Unit vector through the patch center.
    pub direction: Vec3<T>,
    pub solid_angle: T,
}

/// Hemisphere patches in band order, each band starting at north.
pub fn sky_patches<T: Real>(subdivision: usize) -> Vec<SkyPatch<T>> {
    let mf = subdivision.max(1);
    let rows = TREGENZA_BANDS.len() * mf;
    let band = T::lit(90.0) / (T::from_usize_lossy(rows) + T::lit(0.5));
    let mut patches = Vec::with_capacity(patch_count(mf));
    for row in 0..rows {
        let lo = band * T::from_usize_lossy(row);
        let hi = lo + band;
        let mid = (lo + hi) / T::lit(2.0);
        let n = TREGENZA_BANDS[row / mf] * mf;
        let dphi = T::TAU() / T::from_usize_lossy(n);
        let omega = dphi * (hi.sin_deg() - lo.sin_deg());
        let step_deg = T::lit(360.0) / T::from_usize_lossy(n);
        for k in 0..n {
            patches.push(SkyPatch {
                direction: sun_vector(mid, step_deg * T::from_usize_lossy(k), T::zero()),
                solid_angle: omega,
            });
        }
    }
    let cap_lo = band * T::from_usize_lossy(rows);
    patches.push(SkyPatch { direction: Vec3::unit_z(), solid_angle: T::TAU() * (T::one() - cap_lo.sin_deg()) });
    patches
}

/// Direct-sun illuminance (lux) on `sensor`.
pub fn direct_illuminance<T: Real>(
    scene: &Scene<T>,
    sensor: &Sensor<T>,
    sun: &SolarPosition<T>,
    model: &DirectNormalModel<T>,
) -> T {
    if !sun.is_up() {
        return T::zero();
    }
    let cosine = sun.sun_direction.dot(sensor.direction);
    if cosine <= T::zero() {
        return T::zero();
    }
    let tau = beam_transmission(scene, sensor.position, sun.sun_direction);
    model.eval(sun.altitude_deg) * cosine * tau
}

fn integrate_sky<T: Real>(
    scene: &Scene<T>,
    sensor: &Sensor<T>,
    patches: &[SkyPatch<T>],
    luminance: impl Fn(Vec3<T>) -> T,
) -> T {
    patches
        .iter()
        .map(|p| {
            let cosine = p.direction.dot(sensor.direction);
            if cosine <= T::zero() {
                return T::zero();
            }
            let tau = beam_transmission(scene, sensor.position, p.direction);
            if tau == T::zero() {
                return T::zero();
            }
            luminance(p.direction) * p.solid_angle * cosine * tau
        })
        .sum()
}

/// Sky-only illuminance (lux) from a CIE overcast sky of zenith luminance `lz`.
pub fn overcast_sky_illuminance<T: Real>(scene: &Scene<T>, sensor: &Sensor<T>, lz: T, config: &OracleConfig<T>) -> T {
    let patches = sky_patches(config.subdivision);
    integrate_sky(scene, sensor, &patches, |d| lz * (T::one() + T::lit(2.0) * d.z) / T::lit(3.0))
}

/// Sky-only illuminance (lux) for an arbitrary sky model.
pub fn sky_illuminance<T: Real>(scene: &Scene<T>, sensor: &Sensor<T>, sky: &SkyModel<T>, patches: &[SkyPatch<T>]) -> T {
    integrate_sky(scene, sensor, patches, sky.distribution())
}

/// Oracle as a simulation backend. Clear skies add the direct sun.
#[derive(Debug, Clone)]
pub struct OracleBackend<T> {
    pub config: OracleConfig<T>,
}

impl<T: Real> Default for OracleBackend<T> {
    fn default() -> Self {
        Self::new(OracleConfig::default())
    }
}

impl<T: Real> OracleBackend<T> {
    pub fn new(config: OracleConfig<T>) -> Self {
        Self { config }
    }
}

impl<T: Real> Backend<T> for OracleBackend<T> {
    fn name(&self) -> &str {
        "oracle"
    }

    fn fingerprint(&self) -> String {
        format!(
            "oracle mf={} en={}:{}",
            self.config.subdivision, self.config.direct_normal.scale_lux, self.config.direct_normal.extinction
        )
    }

    fn illuminance(
        &self,
        scene: &Scene<T>,
        sensors: &[Sensor<T>],
        sky: &SkyModel<T>,
        cancel: &CancelToken,
    ) -> Result<Vec<T>, BackendError> {
        sky.validate()?;
        let patches = sky_patches(self.config.subdivision);
        let sun = sky.sun();
        let luminance = sky.distribution();
        sensors
            .par_iter()
            .map(|s| {
                if cancel.is_cancelled() {
                    return Err(BackendError::Cancelled);
                }
                let mut e = integrate_sky(scene, s, &patches, &luminance);
                if sky.has_sun() {
                    e = e + direct_illuminance(scene, s, &sun, &self.config.direct_normal);
                }
                Ok(e)
            })
            .collect()
    }
}
