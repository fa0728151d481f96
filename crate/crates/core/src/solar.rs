//! Sun position from site and civil time, following the NOAA solar
//! calculator formulation of Meeus' low-precision solar theory.
//!
//! Azimuth is measured clockwise from true north. Altitude includes NOAA's
//! atmospheric refraction correction above -1°.

use chrono::NaiveDate;
use serde::Serialize;

use crate::geometry::Vec3;
use crate::num::Real;
use crate::scene::Site;
use crate::time::CivilInstant;

/// Refraction is only applied when the geometric altitude exceeds this.
pub const REFRACTION_CUTOFF_DEG: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real"))]
pub struct SolarPosition<T> {
    /// Apparent altitude above the horizon, refraction included.
    pub altitude_deg: T,
    /// Clockwise from true north, in `[0, 360)`.
    pub azimuth_deg: T,
    /// `90 - altitude_deg`.
    pub zenith_deg: T,
    pub declination_deg: T,
    pub equation_of_time_min: T,
    pub hour_angle_deg: T,
    /// Unit vector towards the sun in scene coordinates.
    pub sun_direction: Vec3<T>,
}

impl<T: Real> SolarPosition<T> {
    pub fn is_up(&self) -> bool {
        self.altitude_deg > T::zero()
    }
}

/// Days since J2000.0 (2000-01-01 12:00 UT) for a civil date and clock time.
///
/// The integer day count is taken exactly so single precision keeps
/// sub-minute resolution.
pub fn days_since_j2000<T: Real>(date: NaiveDate, local_hours: T, tz_hours: T) -> T {
    let epoch = NaiveDate::from_ymd_opt(2000, 1, 1).expect("valid epoch");
    let whole = (date - epoch).num_days() as f64 - 0.5;
    T::lit(whole) + (local_hours - tz_hours) / T::lit(24.0)
}

/// Declination and equation of time at a given Julian century.
#[derive(Debug, Clone, Copy)]
struct SunEphemeris<T> {
    declination_deg: T,
    equation_of_time_min: T,
}

fn ephemeris<T: Real>(jc: T) -> SunEphemeris<T> {
    let l = T::lit;
    let mean_lon = (l(280.46646) + jc * (l(36000.76983) + jc * l(0.0003032))).rem_pos(l(360.0));
    let mean_anom = l(357.52911) + jc * (l(35999.05029) - l(0.0001537) * jc);
    let ecc = l(0.016708634) - jc * (l(0.000042037) + l(0.0000001267) * jc);
    let m = mean_anom.to_radians();
    let center = m.sin() * (l(1.914602) - jc * (l(0.004817) + l(0.000014) * jc))
        + (m + m).sin() * (l(0.019993) - l(0.000101) * jc)
        + (l(3.0) * m).sin() * l(0.000289);
    let true_lon = mean_lon + center;
    let omega = l(125.04) - l(1934.136) * jc;
    let app_lon = true_lon - l(0.00569) - l(0.00478) * omega.sin_deg();
    let mean_obliq =
        l(23.0) + (l(26.0) + (l(21.448) - jc * (l(46.815) + jc * (l(0.00059) - jc * l(0.001813)))) / l(60.0)) / l(60.0);
    let obliq = mean_obliq + l(0.00256) * omega.cos_deg();
    let declination_deg = (obliq.sin_deg() * app_lon.sin_deg()).asin().to_degrees();

    let y = (obliq / l(2.0)).tan_deg().powi(2);
    let l0 = mean_lon.to_radians();
    let eot = y * (l0 + l0).sin() - l(2.0) * ecc * m.sin() + l(4.0) * ecc * y * m.sin() * (l0 + l0).cos()
        - l(0.5) * y * y * (l(4.0) * l0).sin()
        - l(1.25) * ecc * ecc * (m + m).sin();
    SunEphemeris { declination_deg, equation_of_time_min: l(4.0) * eot.to_degrees() }
}

/// NOAA refraction correction in degrees for a geometric altitude in degrees.
pub fn refraction_correction_deg<T: Real>(altitude_deg: T) -> T {
    let l = T::lit;
    if altitude_deg <= l(REFRACTION_CUTOFF_DEG) || altitude_deg > l(85.0) {
        return T::zero();
    }
    let arcsec = if altitude_deg > l(5.0) {
        let t = altitude_deg.tan_deg();
        l(58.1) / t - l(0.07) / t.powi(3) + l(0.000086) / t.powi(5)
    } else if altitude_deg > l(-0.575) {
        let e = altitude_deg;
        l(1735.0) + e * (l(-518.2) + e * (l(103.4) + e * (l(-12.79) + e * l(0.711))))
    } else {
        l(-20.772) / altitude_deg.tan_deg()
    };
    arcsec / l(3600.0)
}

/// Unit vector towards a sun at (`altitude`, `azimuth`) in scene coordinates,
/// where true north is +Y rotated counterclockwise by `north_offset_deg`.
pub fn sun_vector<T: Real>(altitude_deg: T, azimuth_deg: T, north_offset_deg: T) -> Vec3<T> {
    let (sa, ca) = altitude_deg.to_radians().sin_cos();
    let (sz, cz) = azimuth_deg.to_radians().sin_cos();
    Vec3::new(ca * sz, ca * cz, sa).rotate_z_deg(north_offset_deg)
}

/// Solar position for a site at a fractional local clock hour of `date`.
/// `local_hours` may fall outside `[0, 24)`.
pub fn solar_position_at<T: Real>(site: &Site<T>, date: NaiveDate, local_hours: T) -> SolarPosition<T> {
    let l = T::lit;
    let days = days_since_j2000(date, local_hours, site.timezone_offset_hours);
    let eph = ephemeris(days / l(36525.0));

    let minutes = local_hours * l(60.0);
    let true_solar = (minutes + eph.equation_of_time_min + l(4.0) * site.longitude
        - l(60.0) * site.timezone_offset_hours)
        .rem_pos(l(1440.0));
    let quarter = true_solar / l(4.0);
    let hour_angle = if quarter < T::zero() { quarter + l(180.0) } else { quarter - l(180.0) };

    let (slat, clat) = site.latitude.to_radians().sin_cos();
    let (sdec, cdec) = eph.declination_deg.to_radians().sin_cos();
    let cos_zen = (slat * sdec + clat * cdec * hour_angle.cos_deg()).max(-T::one()).min(T::one());
    let geo_zenith = cos_zen.acos().to_degrees();
    let geo_altitude = l(90.0) - geo_zenith;

    let denom = clat * geo_zenith.sin_deg();
    let azimuth = if denom.abs() < l(1e-12) {
        if site.latitude >= eph.declination_deg {
            l(180.0)
        } else {
            T::zero()
        }
    } else {
        let c = ((slat * geo_zenith.cos_deg() - sdec) / denom).max(-T::one()).min(T::one());
        let a = c.acos().to_degrees();
        let az = if hour_angle > T::zero() { a + l(180.0) } else { l(540.0) - a };
        let az = az.rem_pos(l(360.0));
        if az >= l(360.0) {
            az - l(360.0)
        } else {
            az
        }
    };

    let altitude_deg = geo_altitude + refraction_correction_deg(geo_altitude);
    SolarPosition {
        altitude_deg,
        azimuth_deg: azimuth,
        zenith_deg: l(90.0) - altitude_deg,
        declination_deg: eph.declination_deg,
        equation_of_time_min: eph.equation_of_time_min,
        hour_angle_deg: hour_angle,
        sun_direction: sun_vector(altitude_deg, azimuth, site.north_offset_deg),
    }
}

pub fn solar_position<T: Real>(site: &Site<T>, t: &CivilInstant) -> SolarPosition<T> {
    solar_position_at(site, t.date(), t.hours())
}

/// Civil clock time of solar noon on `date`, in fractional hours.
pub fn solar_noon_hours<T: Real>(site: &Site<T>, date: NaiveDate) -> T {
    let l = T::lit;
    let noon = |eot: T| (l(720.0) - l(4.0) * site.longitude - eot + site.timezone_offset_hours * l(60.0)) / l(60.0);
    let first = noon(solar_position_at(site, date, l(12.0)).equation_of_time_min);
    noon(solar_position_at(site, date, first).equation_of_time_min)
}
