//! Observer-centred sun-path diagram: one arc per representative day, one
//! analemma per clock hour, each sample tagged with direct-sun visibility.
//!
//! Arcs run from sunrise to sunset around the representative day's solar
//! noon and are clipped at apparent altitude 0. Samples step every 10 minutes
//! from sunrise and the exact sunset closes the arc. Arc colors run from blue
//! (winter solstice) to orange (summer solstice), linear in declination.

use std::fmt::Write as _;

use chrono::{Duration, NaiveDate};
use serde::Serialize;
use thiserror::Error;

use crate::color::Rgb8;
use crate::geometry::Vec3;
use crate::num::Real;
use crate::raycast::{classify_visibility, Visibility};
use crate::scene::{Scene, Site};
use crate::solar::{solar_noon_hours, solar_position_at};
use crate::time::representative_days;

pub const DEFAULT_STEP_MINUTES: u32 = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagramError {
    #[error("diagram radius must be positive and finite, got {0}")]
    Radius(f64),
    #[error("observer position is not finite")]
    Observer,
    #[error("sample step must be between 1 and 120 minutes, got {0}")]
    Step(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramOptions {
    /// Calendar year the representative days are taken from.
    pub year: i32,
    /// Use the 11-day list without April.
    pub strict: bool,
    pub step_minutes: u32,
}

impl Default for DiagramOptions {
    fn default() -> Self {
        Self { year: 2026, strict: false, step_minutes: DEFAULT_STEP_MINUTES }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real"))]
pub struct DiagramSample<T> {
    pub date: NaiveDate,
    /// Local clock time in fractional hours, `[0, 24)`.
    pub hours: T,
    pub altitude_deg: T,
    pub azimuth_deg: T,
    pub sun_direction: Vec3<T>,
    /// `observer + radius * sun_direction`.
    pub point: Vec3<T>,
    pub visibility: Visibility,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real"))]
pub struct MonthArc<T> {
    pub month: u32,
    pub day: u32,
    pub declination_deg: T,
    pub color: Rgb8,
    /// Sunset minus sunrise, minutes.
    pub daylight_minutes: T,
    pub samples: Vec<DiagramSample<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real"))]
pub struct HourAnalemma<T> {
    pub hour: u32,
    /// One sample per representative day, in calendar order.
    pub samples: Vec<DiagramSample<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real"))]
pub struct SunPathDiagram<T> {
    pub observer: Vec3<T>,
    pub radius: T,
    pub latitude: T,
    pub longitude: T,
    pub arcs: Vec<MonthArc<T>>,
    pub analemmas: Vec<HourAnalemma<T>>,
}

impl<T: Real> SunPathDiagram<T> {
    pub fn samples(&self) -> impl Iterator<Item = &DiagramSample<T>> {
        self.arcs.iter().flat_map(|a| a.samples.iter()).chain(self.analemmas.iter().flat_map(|a| a.samples.iter()))
    }
}

struct Sampler<'a, T> {
    scene: &'a Scene<T>,
    observer: Vec3<T>,
    radius: T,
}

impl<T: Real> Sampler<'_, T> {
    fn sample(&self, date: NaiveDate, hours: T) -> DiagramSample<T> {
        let (date, hours) = normalize(date, hours);
        let pos = solar_position_at(&self.scene.site, date, hours);
        DiagramSample {
            date,
            hours,
            altitude_deg: pos.altitude_deg,
            azimuth_deg: pos.azimuth_deg,
            sun_direction: pos.sun_direction,
            point: self.observer + pos.sun_direction * self.radius,
            visibility: classify_visibility(self.scene, self.observer, pos.sun_direction),
        }
    }
}

fn normalize<T: Real>(date: NaiveDate, hours: T) -> (NaiveDate, T) {
    let day = T::lit(24.0);
    let shift = (hours / day).floor();
    let mut h = hours - shift * day;
    let mut days = shift.to_i64().expect("bounded shift");
    if h >= day {
        h = h - day;
        days += 1;
    }
    (date + Duration::days(days), h)
}

/// Time where apparent altitude crosses zero between `below` and `above`
/// (altitude at `below` is ≤ 0, at `above` > 0). Returns the side above.
fn horizon_crossing<T: Real>(site: &Site<T>, date: NaiveDate, mut below: T, mut above: T) -> T {
    for _ in 0..60 {
        let mid = (below + above) / T::lit(2.0);
        if solar_position_at(site, date, mid).altitude_deg > T::zero() {
            above = mid;
        } else {
            below = mid;
        }
    }
    above
}

/// Sunrise and sunset (fractional clock hours relative to `date`, possibly
/// outside `[0, 24)`) bracketing that day's solar noon, or `None` in polar night.
/// In polar day the bounds are solar noon ± 12 h.
pub fn daylight_span<T: Real>(site: &Site<T>, date: NaiveDate) -> Option<(T, T)> {
    let noon = solar_noon_hours(site, date);
    let half = T::lit(12.0);
    let alt = |h: T| solar_position_at(site, date, h).altitude_deg;
    if alt(noon) <= T::zero() {
        return None;
    }
    let (start, end) = (noon - half, noon + half);
    let rise = if alt(start) > T::zero() { start } else { horizon_crossing(site, date, start, noon) };
    let set = if alt(end) > T::zero() { end } else { horizon_crossing(site, date, end, noon) };
    Some((rise, set))
}

/// Blue-to-orange season color for a declination, hemisphere aware.
pub fn season_color<T: Real>(declination: T, winter_declination: T, summer_declination: T) -> Rgb8 {
    let span = summer_declination - winter_declination;
    let s = if span == T::zero() { T::zero() } else { (declination - winter_declination) / span };
    Rgb8::BLUE.lerp(Rgb8::ORANGE, s.as_f64())
}

pub fn build_diagram<T: Real>(
    scene: &Scene<T>,
    observer: Vec3<T>,
    radius: T,
    options: &DiagramOptions,
) -> Result<SunPathDiagram<T>, DiagramError> {
    if !(radius > T::zero() && radius.is_finite()) {
        return Err(DiagramError::Radius(radius.as_f64()));
    }
    if !observer.is_finite() {
        return Err(DiagramError::Observer);
    }
    if !(1..=120).contains(&options.step_minutes) {
        return Err(DiagramError::Step(options.step_minutes));
    }
    let site = &scene.site;
    let sampler = Sampler { scene, observer, radius };
    let days: Vec<NaiveDate> = representative_days(options.strict)
        .into_iter()
        .map(|(m, d)| NaiveDate::from_ymd_opt(options.year, m, d).expect("fixed valid dates"))
        .collect();

    let declination = |d: NaiveDate| solar_position_at(site, d, solar_noon_hours(site, d)).declination_deg;
    let june = declination(NaiveDate::from_ymd_opt(options.year, 6, 21).expect("valid"));
    let december = declination(NaiveDate::from_ymd_opt(options.year, 12, 22).expect("valid"));
    let (winter, summer) = if site.is_southern() { (june, december) } else { (december, june) };

    let step = T::lit(options.step_minutes as f64 / 60.0);
    let arcs = days
        .iter()
        .map(|&date| {
            let decl = declination(date);
            let mut samples = Vec::new();
            let mut daylight_minutes = T::zero();
            if let Some((rise, set)) = daylight_span(site, date) {
                daylight_minutes = (set - rise) * T::lit(60.0);
                let mut k = T::zero();
                while rise + k * step < set {
                    samples.push(sampler.sample(date, rise + k * step));
                    k = k + T::one();
                }
                samples.push(sampler.sample(date, set));
            }
            MonthArc {
                month: chrono::Datelike::month(&date),
                day: chrono::Datelike::day(&date),
                declination_deg: decl,
                color: season_color(decl, winter, summer),
                daylight_minutes,
                samples,
            }
        })
        .collect();

    let analemmas = (0..24u32)
        .filter_map(|hour| {
            let h = T::lit(hour as f64);
            let samples: Vec<_> = days.iter().map(|&d| sampler.sample(d, h)).collect();
            samples.iter().any(|s| s.altitude_deg > T::zero()).then_some(HourAnalemma { hour, samples })
        })
        .collect();

    Ok(SunPathDiagram { observer, radius, latitude: site.latitude, longitude: site.longitude, arcs, analemmas })
}

/// Polar projection used for the 2D export.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Projection {
    /// Radius proportional to zenith angle.
    #[default]
    Equidistant,
    /// Radius proportional to `tan(zenith / 2)`.
    Stereographic,
}

impl Projection {
    /// Normalized radius in `[0, 1]` for a sun at `altitude_deg` above the horizon.
    pub fn radius(self, altitude_deg: f64) -> f64 {
        let zenith = (90.0 - altitude_deg).clamp(0.0, 90.0);
        match self {
            Projection::Equidistant => zenith / 90.0,
            Projection::Stereographic => (zenith.to_radians() / 2.0).tan(),
        }
    }

    /// Plot position with zenith at the origin and north up (screen y grows downwards).
    pub fn project(self, altitude_deg: f64, azimuth_deg: f64) -> (f64, f64) {
        let r = self.radius(altitude_deg);
        let (s, c) = azimuth_deg.to_radians().sin_cos();
        (r * s, -r * c)
    }
}

/// Renders the diagram as a standalone SVG: altitude rings every 30°,
/// colored arcs, grey analemmas, and hollow markers on blocked samples.
pub fn diagram_svg<T: Real>(diagram: &SunPathDiagram<T>, size_px: u32, projection: Projection) -> String {
    let half = size_px as f64 / 2.0;
    let plot = half * 0.9;
    let xy = |s: &DiagramSample<T>| {
        let (x, y) = projection.project(s.altitude_deg.as_f64(), s.azimuth_deg.as_f64());
        (half + plot * x, half + plot * y)
    };
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size_px}" height="{size_px}" viewBox="0 0 {size_px} {size_px}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for alt in [0.0, 30.0, 60.0] {
        let _ = writeln!(
            svg,
            r##"<circle cx="{half:.2}" cy="{half:.2}" r="{:.2}" fill="none" stroke="#bbbbbb"/>"##,
            plot * projection.radius(alt)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{half:.2}" y="{:.2}" text-anchor="middle" font-size="12">N</text>"#,
        half - plot - 4.0
    );
    let polyline = |svg: &mut String, samples: &[DiagramSample<T>], stroke: &str| {
        let pts: Vec<String> = samples
            .iter()
            .filter(|s| s.altitude_deg >= T::zero())
            .map(|s| {
                let (x, y) = xy(s);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        if pts.len() > 1 {
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="1.5"/>"#,
                pts.join(" ")
            );
        }
    };
    for a in &diagram.analemmas {
        polyline(&mut svg, &a.samples, "#888888");
    }
    for arc in &diagram.arcs {
        polyline(&mut svg, &arc.samples, &arc.color.hex());
    }
    for s in diagram.samples().filter(|s| s.visibility == Visibility::Blocked) {
        let (x, y) = xy(s);
        let _ = writeln!(svg, r##"<circle cx="{x:.2}" cy="{y:.2}" r="2" fill="none" stroke="#333333"/>"##);
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn rejects_bad_inputs() {
        let s = fixtures::sealed_box::<f64>(Vec3::zero(), Vec3::new(1.0, 1.0, 1.0));
        let o = DiagramOptions::default();
        assert!(matches!(build_diagram(&s, Vec3::zero(), 0.0, &o), Err(DiagramError::Radius(_))));
        assert!(matches!(build_diagram(&s, Vec3::new(f64::NAN, 0.0, 0.0), 1.0, &o), Err(DiagramError::Observer)));
    }

    #[test]
    fn normalize_wraps_dates() {
        let d = NaiveDate::from_ymd_opt(2026, 3, 1).unwrap();
        assert_eq!(normalize(d, -1.5f64), (NaiveDate::from_ymd_opt(2026, 2, 28).unwrap(), 22.5));
        assert_eq!(normalize(d, 25.0f64), (NaiveDate::from_ymd_opt(2026, 3, 2).unwrap(), 1.0));
        assert_eq!(normalize(d, 7.25f64), (d, 7.25));
    }

    #[test]
    fn polar_night_has_empty_arc() {
        let site = Site::new(78.2f64, 15.6, 1.0);
        let date = NaiveDate::from_ymd_opt(2026, 12, 22).unwrap();
        assert!(daylight_span(&site, date).is_none());
        let (rise, set) = daylight_span(&site, NaiveDate::from_ymd_opt(2026, 6, 21).unwrap()).unwrap();
        assert!((set - rise - 24.0).abs() < 1e-9, "midnight sun spans the full day");
    }

    #[test]
    fn projections() {
        assert_eq!(Projection::Equidistant.project(90.0, 0.0), (0.0, 0.0));
        let (x, y) = Projection::Equidistant.project(0.0, 0.0);
        assert!(x.abs() < 1e-12 && (y + 1.0).abs() < 1e-12, "north is up");
        let (x, _) = Projection::Stereographic.project(0.0, 90.0);
        assert!((x - 1.0).abs() < 1e-12, "east is right");
    }
}
