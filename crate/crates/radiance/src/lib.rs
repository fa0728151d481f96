//! Radiance bridge: writes scene, material and sky descriptions, compiles
//! them with `oconv` and evaluates sensor grids with `rtrace`.
//!
//! Workdir layout: `materials.rad`, `geometry.rad`, `sky.rad`, `scene.oct`,
//! `sensors.pts`, `output.dat`.

use std::io;
use std::path::PathBuf;

use helios_core::jobs::TransitionError;
use thiserror::Error;

pub mod backend;
pub mod emit;
pub mod format;
pub mod install;
pub mod octree;
mod process;
pub mod rtrace;

pub use backend::RadianceBackend;
pub use emit::{emit_radiance_files, EmitError, RadianceFiles, WrittenFiles};
pub use format::fmt_g;
pub use install::{Installation, BIN_ENV};
pub use octree::{build_octree, OCTREE_FILE};
pub use rtrace::{parse_output, run_rtrace, AmbientParams, RadianceJob, OUTPUT_FILE, SENSORS_FILE};

#[derive(Debug, Error)]
pub enum RadianceError {
    #[error("Radiance not installed: set {variable} to the Radiance bin directory (searched {})", display_paths(.searched))]
    NotInstalled { variable: &'static str, searched: Vec<PathBuf> },
    #[error(transparent)]
    Emit(#[from] EmitError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
    #[error("{program} exited with {status}: {stderr}")]
    Process { program: String, status: String, stderr: String },
    #[error("rtrace returned {got} lines for {expected} sensors")]
    LineCount { expected: usize, got: usize },
    #[error("rtrace output line {line} is not an RGB triple: {text:?}")]
    Parse { line: usize, text: String },
    #[error(transparent)]
    Transition(#[from] TransitionError),
    #[error("cancelled")]
    Cancelled,
}

fn display_paths(paths: &[PathBuf]) -> String {
    let shown: Vec<String> = paths.iter().map(|p| p.display().to_string()).collect();
    shown.join(", ")
}

pub(crate) fn io_error(context: impl Into<String>) -> impl FnOnce(io::Error) -> RadianceError {
    let context = context.into();
    move |source| RadianceError::Io { context, source }
}
