//! Three-colour false-colour mapping of simulation results.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::color::Rgb8;
use crate::grid::SensorGrid;
use crate::metrics::{Metric, SimulationResult};
use crate::num::Real;
use crate::sky::SkyModel;

pub const DF_DEFAULT_MIN: f64 = 0.0;
pub const DF_DEFAULT_MAX: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeatmapError {
    #[error("heatmap range needs min < max, got [{min}, {max}]")]
    EmptyRange { min: f64, max: f64 },
    #[error("heatmap mid {mid} outside [{min}, {max}]")]
    Mid { min: f64, mid: f64, max: f64 },
    #[error("heatmap bounds must be finite")]
    NonFinite,
}

/// Value anchors: blue at `min`, yellow at `mid`, red at `max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatmapSpec {
    pub min: f64,
    pub mid: f64,
    pub max: f64,
}

impl HeatmapSpec {
    /// Range with the mid anchor at the midpoint.
    pub fn new(min: f64, max: f64) -> Result<Self, HeatmapError> {
        Self::with_mid(min, (min + max) / 2.0, max)
    }

    pub fn with_mid(min: f64, mid: f64, max: f64) -> Result<Self, HeatmapError> {
        if !(min.is_finite() && mid.is_finite() && max.is_finite()) {
            return Err(HeatmapError::NonFinite);
        }
        if min >= max {
            return Err(HeatmapError::EmptyRange { min, max });
        }
        if !(min <= mid && mid <= max) {
            return Err(HeatmapError::Mid { min, mid, max });
        }
        Ok(Self { min, mid, max })
    }

    pub fn daylight_factor_default() -> Self {
        Self::new(DF_DEFAULT_MIN, DF_DEFAULT_MAX).expect("valid constant range")
    }

    /// Observed min/max. A constant field maps onto `[v, v + 1]` so it reads
    /// as the minimum colour.
    pub fn auto_range<T: Real>(values: &[T]) -> Self {
        let finite = values.iter().map(|v| v.as_f64()).filter(|v| v.is_finite());
        let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if lo > hi {
            return Self::new(0.0, 1.0).expect("valid constant range");
        }
        let hi = if hi > lo { hi } else { lo + 1.0 };
        Self::new(lo, hi).expect("ordered finite range")
    }

    pub fn default_for<T: Real>(metric: Metric, values: &[T]) -> Self {
        match metric {
            Metric::DaylightFactorPercent => Self::daylight_factor_default(),
            Metric::IlluminanceLux => Self::auto_range(values),
        }
    }

    /// Colour for one value; out-of-range values clamp to the end colours.
    pub fn color(&self, value: f64) -> Rgb8 {
        if value.is_nan() || value <= self.min {
            return Rgb8::BLUE;
        }
        if value >= self.max {
            return Rgb8::RED;
        }
        if value <= self.mid {
            Rgb8::BLUE.lerp(Rgb8::YELLOW, (value - self.min) / (self.mid - self.min))
        } else {
            Rgb8::YELLOW.lerp(Rgb8::RED, (value - self.mid) / (self.max - self.mid))
        }
    }
}

pub fn colorize<T: Real>(result: &SimulationResult<T>, spec: &HeatmapSpec) -> Vec<Rgb8> {
    result.values.iter().map(|v| spec.color(v.as_f64())).collect()
}

/// Result document handed to clients: values plus the colours they map to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct ColoredResult<T> {
    pub metric: Metric,
    pub backend: String,
    pub sky: SkyModel<T>,
    pub grid: SensorGrid<T>,
    pub values: Vec<T>,
    pub spec: HeatmapSpec,
    pub colors: Vec<Rgb8>,
}

impl<T: Real> ColoredResult<T> {
    pub fn new(result: &SimulationResult<T>, spec: HeatmapSpec) -> Self {
        Self {
            metric: result.metric,
            backend: result.backend.clone(),
            sky: result.sky,
            grid: result.grid.clone(),
            values: result.values.clone(),
            spec,
            colors: colorize(result, &spec),
        }
    }
}

/// RGB8 raster with one `block × block` square per sensor. North (largest y)
/// is the top row, x increases to the right.
pub fn raster(count_x: usize, count_y: usize, colors: &[Rgb8], block: usize) -> (usize, usize, Vec<u8>) {
    assert_eq!(colors.len(), count_x * count_y, "one colour per sensor");
    let block = block.max(1);
    let (w, h) = (count_x * block, count_y * block);
    let mut px = vec![0u8; w * h * 3];
    for py in 0..h {
        let j = count_y - 1 - py / block;
        for pxl in 0..w {
            let c = colors[j * count_x + pxl / block];
            let o = (py * w + pxl) * 3;
            px[o..o + 3].copy_from_slice(&[c.r, c.g, c.b]);
        }
    }
    (w, h, px)
}
