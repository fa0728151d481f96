//! Daylighting engine core: solar position, sun-path diagrams, sensor grids,
//! a reference illuminance simulator and the Daylight Factor / illuminance
//! metrics with their heatmap colouring.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`). The aliases
//! below fix the scalar to `f64`, which is what the CLI and service use.

pub mod backend;
pub mod color;
pub mod fixtures;
pub mod geometry;
pub mod grid;
pub mod heatmap;
pub mod jobs;
pub mod metrics;
pub mod num;
pub mod oracle;
pub mod raycast;
pub mod scene;
pub mod sky;
pub mod solar;
pub mod sunpath;
pub mod time;

pub use backend::{Backend, BackendError};
pub use color::Rgb8;
pub use heatmap::{colorize, ColoredResult, HeatmapError, HeatmapSpec};
pub use jobs::{CancelToken, JobStatus};
pub use metrics::{
    daylight_factor, illuminance_from_irradiance, point_in_time_illuminance, Metric, MetricsError, ReferenceCache,
};
pub use num::Real;
pub use raycast::{beam_transmission, classify_visibility, ray_hits, SurfaceKind, Visibility};
pub use scene::{load_scene, scene_bounds, MaterialKind, SceneError, ValidationError};
pub use sky::{SkyError, SkyKind};
pub use solar::solar_position;
pub use sunpath::{build_diagram, DiagramError, DiagramOptions};
pub use time::{
    nine_point_matrix, representative_days, snap_time, step_time, CivilInstant, SnapMode, TimeError, TimeStep,
};

pub type Vec3 = geometry::Vec3<f64>;
pub type Aabb = geometry::Aabb<f64>;
pub type Site = scene::Site<f64>;
pub type Material = scene::Material<f64>;
pub type TriangleMesh = scene::TriangleMesh<f64>;
pub type Scene = scene::Scene<f64>;
pub type SolarPosition = solar::SolarPosition<f64>;
pub type SunPathDiagram = sunpath::SunPathDiagram<f64>;
pub type Sensor = grid::Sensor<f64>;
pub type GridSpec = grid::GridSpec<f64>;
pub type SensorGrid = grid::SensorGrid<f64>;
pub type SkyModel = sky::SkyModel<f64>;
pub type OracleConfig = oracle::OracleConfig<f64>;
pub type OracleBackend = oracle::OracleBackend<f64>;
pub type IrradianceTriple = metrics::IrradianceTriple<f64>;
pub type SimulationResult = metrics::SimulationResult<f64>;
