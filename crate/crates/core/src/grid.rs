//! Workplane sensor grids and their `rtrace` sensor-line encoding.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Vec3;
use crate::num::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("{name} must be positive and finite (extents may be zero), got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{name} spacing {spacing} exceeds extent {extent}")]
    SpacingExceedsExtent { name: &'static str, spacing: f64, extent: f64 },
    #[error("center or height is not finite")]
    NonFinite,
    #[error("sensor line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct Sensor<T> {
    pub position: Vec3<T>,
    pub direction: Vec3<T>,
}

impl<T: Real> Sensor<T> {
    pub fn upward(position: Vec3<T>) -> Self {
        Self { position, direction: Vec3::unit_z() }
    }
}

/// Construction parameters of a grid, as supplied by a user or client.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct GridSpec<T> {
    pub center: [T; 2],
    pub height: T,
    /// Extent along x and y.
    pub size: [T; 2],
    pub spacing: [T; 2],
}

/// Rectangular array of upward-facing sensors, centred on `center_xy`.
/// Sensors are stored row-major: y outer, x inner, both ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct SensorGrid<T> {
    pub center_xy: [T; 2],
    pub height_z: T,
    pub width_x: T,
    pub depth_y: T,
    pub spacing_x: T,
    pub spacing_y: T,
    pub count_x: usize,
    pub count_y: usize,
    pub sensors: Vec<Sensor<T>>,
}

/// `floor(extent / spacing) + 1`, tolerant of decimal inputs such as 0.3 / 0.1.
pub fn sensor_count<T: Real>(extent: T, spacing: T) -> usize {
    let ratio = (extent / spacing).as_f64();
    (ratio * (1.0 + 1e-12)).floor() as usize + 1
}

pub fn make_grid<T: Real>(
    center_xy: [T; 2],
    height_z: T,
    width_x: T,
    depth_y: T,
    spacing_x: T,
    spacing_y: T,
) -> Result<SensorGrid<T>, GridError> {
    for (name, value) in [("spacing_x", spacing_x), ("spacing_y", spacing_y)] {
        if !(value > T::zero() && value.is_finite()) {
            return Err(GridError::NonPositive { name, value: value.as_f64() });
        }
    }
    // A zero extent is a single row (or column) of sensors.
    for (name, value) in [("width_x", width_x), ("depth_y", depth_y)] {
        if !(value >= T::zero() && value.is_finite()) {
            return Err(GridError::NonPositive { name, value: value.as_f64() });
        }
    }
    if !(center_xy[0].is_finite() && center_xy[1].is_finite() && height_z.is_finite()) {
        return Err(GridError::NonFinite);
    }
    for (name, spacing, extent) in [("x", spacing_x, width_x), ("y", spacing_y, depth_y)] {
        if extent > T::zero() && spacing > extent {
            return Err(GridError::SpacingExceedsExtent { name, spacing: spacing.as_f64(), extent: extent.as_f64() });
        }
    }
    let count_x = sensor_count(width_x, spacing_x);
    let count_y = sensor_count(depth_y, spacing_y);
    let offset = |i: usize, n: usize, s: T| {
        let half = T::from_usize_lossy(n - 1) / T::lit(2.0);
        (T::from_usize_lossy(i) - half) * s
    };
    let mut sensors = Vec::with_capacity(count_x * count_y);
    for j in 0..count_y {
        let y = center_xy[1] + offset(j, count_y, spacing_y);
        for i in 0..count_x {
            let x = center_xy[0] + offset(i, count_x, spacing_x);
            sensors.push(Sensor::upward(Vec3::new(x, y, height_z)));
        }
    }
    Ok(SensorGrid { center_xy, height_z, width_x, depth_y, spacing_x, spacing_y, count_x, count_y, sensors })
}

impl<T: Real> SensorGrid<T> {
    pub fn from_spec(spec: &GridSpec<T>) -> Result<Self, GridError> {
        make_grid(spec.center, spec.height, spec.size[0], spec.size[1], spec.spacing[0], spec.spacing[1])
    }

    pub fn spec(&self) -> GridSpec<T> {
        GridSpec {
            center: self.center_xy,
            height: self.height_z,
            size: [self.width_x, self.depth_y],
            spacing: [self.spacing_x, self.spacing_y],
        }
    }

    pub fn len(&self) -> usize {
        self.sensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sensors.is_empty()
    }

    /// Index of the sensor in column `i` (x) and row `j` (y).
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.count_x + i
    }
}

fn push_num<T: Real>(out: &mut String, v: T) {
    use std::fmt::Write as _;
    // Avoid printing negative zero.
    let v = if v == T::zero() { T::zero() } else { v };
    let _ = write!(out, "{v}");
}

/// One `x y z dx dy dz` line per sensor, shortest round-trip decimals,
/// newline-terminated. This is the `rtrace` standard-input format.
pub fn sensor_lines<T: Real>(sensors: &[Sensor<T>]) -> String {
    let mut out = String::with_capacity(sensors.len() * 32);
    for s in sensors {
        let p = s.position;
        let d = s.direction;
        for (k, v) in [p.x, p.y, p.z, d.x, d.y, d.z].into_iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            push_num(&mut out, v);
        }
        out.push('\n');
    }
    out
}

pub fn grid_to_sensor_lines<T: Real>(grid: &SensorGrid<T>) -> String {
    sensor_lines(&grid.sensors)
}

pub fn parse_sensor_lines<T: Real>(text: &str) -> Result<Vec<Sensor<T>>, GridError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let nums: Vec<T> = l
                .split_whitespace()
                .map(|tok| {
                    T::from_str_radix(tok, 10)
                        .map_err(|_| GridError::Parse { line: i + 1, message: format!("not a number: {tok:?}") })
                })
                .collect::<Result<_, _>>()?;
            match nums.as_slice() {
                &[x, y, z, dx, dy, dz] => Ok(Sensor { position: Vec3::new(x, y, z), direction: Vec3::new(dx, dy, dz) }),
                other => {
                    Err(GridError::Parse { line: i + 1, message: format!("expected 6 values, found {}", other.len()) })
                }
            }
        })
        .collect()
}
