//! CIE standard sky descriptions shared by the simulation backends.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Vec3;
use crate::num::Real;
use crate::scene::Site;
use crate::solar::{solar_position, SolarPosition};
use crate::time::CivilInstant;

/// Horizontal illuminance (lux) of the default overcast sky.
pub const DEFAULT_OVERCAST_HORIZONTAL_LUX: f64 = 10_000.0;
pub const DEFAULT_GROUND_REFLECTANCE: f64 = 0.2;
/// Linke-style turbidity used for the clear-sky zenith luminance.
pub const CLEAR_SKY_TURBIDITY: f64 = 2.45;
/// Extraterrestrial illuminance and extinction in the direct-normal model.
pub const DIRECT_NORMAL_SCALE_LUX: f64 = 127_500.0;
pub const DIRECT_NORMAL_EXTINCTION: f64 = 0.21;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SkyError {
    #[error("clear sky needs the sun above the horizon; altitude at {instant} is {altitude:.3}°")]
    SunBelowHorizon { instant: CivilInstant, altitude: f64 },
    #[error("ground reflectance {0} out of range [0, 1]")]
    GroundReflectance(f64),
    #[error("zenith luminance must be positive, got {0}")]
    ZenithLuminance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkyKind {
    CieOvercast,
    CieClear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct SkyModel<T> {
    pub kind: SkyKind,
    pub site: Site<T>,
    pub instant: CivilInstant,
    pub ground_reflectance: T,
    /// Zenith luminance in cd/m². `None` selects the model default.
    pub zenith_luminance: Option<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct DirectNormalModel<T> {
    pub scale_lux: T,
    pub extinction: T,
}

impl<T: Real> Default for DirectNormalModel<T> {
    fn default() -> Self {
        Self { scale_lux: T::lit(DIRECT_NORMAL_SCALE_LUX), extinction: T::lit(DIRECT_NORMAL_EXTINCTION) }
    }
}

impl<T: Real> DirectNormalModel<T> {
    /// `scale · exp(-extinction / sin(alt))`, zero at or below the horizon.
    pub fn eval(&self, altitude_deg: T) -> T {
        if altitude_deg <= T::zero() {
            return T::zero();
        }
        self.scale_lux * (-self.extinction / altitude_deg.sin_deg()).exp()
    }
}

/// Clear-sky direct normal illuminance (lux) under the default model.
pub fn direct_normal_illuminance<T: Real>(altitude_deg: T) -> T {
    DirectNormalModel::default().eval(altitude_deg)
}

/// Closed-form horizontal illuminance of an unobstructed CIE overcast sky.
pub fn overcast_horizontal_illuminance<T: Real>(zenith_luminance: T) -> T {
    T::lit(7.0) * T::PI() / T::lit(9.0) * zenith_luminance
}

/// Relative CIE clear-sky luminance `L / Lz` towards `dir` for a sun at `sun`.
pub fn cie_clear_relative<T: Real>(dir: Vec3<T>, sun: Vec3<T>) -> T {
    let l = T::lit;
    let indicatrix = |gamma: T| l(0.91) + l(10.0) * (l(-3.0) * gamma).exp() + l(0.45) * gamma.cos().powi(2);
    let gradation = |cos_zenith: T| {
        if cos_zenith <= T::zero() {
            T::one()
        } else {
            T::one() - (l(-0.32) / cos_zenith).exp()
        }
    };
    let gamma = dir.dot(sun).max(-T::one()).min(T::one()).acos();
    let sun_zenith = sun.z.max(-T::one()).min(T::one()).acos();
    indicatrix(gamma) * gradation(dir.z) / (indicatrix(sun_zenith) * gradation(T::one()))
}

impl<T: Real> SkyModel<T> {
    pub fn overcast(site: Site<T>, instant: CivilInstant) -> Self {
        Self {
            kind: SkyKind::CieOvercast,
            site,
            instant,
            ground_reflectance: T::lit(DEFAULT_GROUND_REFLECTANCE),
            zenith_luminance: None,
        }
    }

    pub fn clear(site: Site<T>, instant: CivilInstant) -> Self {
        Self { kind: SkyKind::CieClear, ..Self::overcast(site, instant) }
    }

    pub fn with_zenith_luminance(mut self, lz: T) -> Self {
        self.zenith_luminance = Some(lz);
        self
    }

    pub fn sun(&self) -> SolarPosition<T> {
        solar_position(&self.site, &self.instant)
    }

    pub fn validate(&self) -> Result<(), SkyError> {
        let g = self.ground_reflectance;
        if !(g >= T::zero() && g <= T::one()) {
            return Err(SkyError::GroundReflectance(g.as_f64()));
        }
        if let Some(lz) = self.zenith_luminance {
            if !(lz > T::zero() && lz.is_finite()) {
                return Err(SkyError::ZenithLuminance(lz.as_f64()));
            }
        }
        if self.kind == SkyKind::CieClear {
            let sun = self.sun();
            if !sun.is_up() {
                return Err(SkyError::SunBelowHorizon { instant: self.instant, altitude: sun.altitude_deg.as_f64() });
            }
        }
        Ok(())
    }

    /// Zenith luminance in cd/m².
    ///
    /// Overcast default gives [`DEFAULT_OVERCAST_HORIZONTAL_LUX`] on an open
    /// horizontal plane. Clear default is `(1.376·τ − 1.81)·tan(alt) + 0.38`
    /// kcd/m² with turbidity τ = 2.45.
    pub fn zenith_luminance(&self) -> T {
        if let Some(lz) = self.zenith_luminance {
            return lz;
        }
        match self.kind {
            SkyKind::CieOvercast => T::lit(DEFAULT_OVERCAST_HORIZONTAL_LUX) / overcast_horizontal_illuminance(T::one()),
            SkyKind::CieClear => {
                let alt = self.sun().altitude_deg.max(T::zero());
                let k = T::lit(1.376 * CLEAR_SKY_TURBIDITY - 1.81);
                T::lit(1000.0) * (k * alt.tan_deg() + T::lit(0.38))
            }
        }
    }

    /// Luminance (cd/m²) as a function of direction in scene coordinates,
    /// with the sun position and zenith luminance resolved once.
    pub fn distribution(&self) -> impl Fn(Vec3<T>) -> T + Send + Sync {
        let lz = self.zenith_luminance();
        let kind = self.kind;
        let sun = match kind {
            SkyKind::CieClear => self.sun().sun_direction,
            SkyKind::CieOvercast => Vec3::unit_z(),
        };
        move |dir: Vec3<T>| match kind {
            SkyKind::CieOvercast => lz * (T::one() + T::lit(2.0) * dir.z) / T::lit(3.0),
            SkyKind::CieClear => lz * cie_clear_relative(dir, sun),
        }
    }

    pub fn luminance(&self, dir: Vec3<T>) -> T {
        self.distribution()(dir)
    }

    /// Whether the sky carries a sun disc.
    pub fn has_sun(&self) -> bool {
        self.kind == SkyKind::CieClear
    }
}
