//! [`Backend`] implementation driving a Radiance installation.

use std::fs;
use std::path::PathBuf;

use helios_core::backend::{Backend, BackendError};
use helios_core::grid::Sensor;
use helios_core::metrics::illuminance_from_irradiance;
use helios_core::num::Real;
use helios_core::scene::Scene;
use helios_core::sky::SkyModel;
use helios_core::CancelToken;

use crate::emit::EmitError;
use crate::install::Installation;
use crate::rtrace::{AmbientParams, RadianceJob, DEFAULT_BATCH_SIZE};
use crate::{io_error, RadianceError};

pub const NAME: &str = "radiance";

#[derive(Debug, Clone)]
pub struct RadianceBackend {
    pub install: Installation,
    pub ambient: AmbientParams,
    pub batch_size: usize,
    /// Parent of per-run working directories; the system temp dir when unset.
    pub work_root: Option<PathBuf>,
    /// Keep working directories after a run instead of deleting them.
    pub keep_workdirs: bool,
}

impl RadianceBackend {
    pub fn new(install: Installation) -> Self {
        Self {
            install,
            ambient: AmbientParams::default(),
            batch_size: DEFAULT_BATCH_SIZE,
            work_root: None,
            keep_workdirs: false,
        }
    }

    pub fn with_ambient(mut self, ambient: AmbientParams) -> Self {
        self.ambient = ambient;
        self
    }

    /// Runs one job and converts the triples to lux.
    pub fn run<T: Real>(
        &self,
        scene: &Scene<T>,
        sensors: &[Sensor<T>],
        sky: &SkyModel<T>,
        cancel: &CancelToken,
    ) -> Result<Vec<T>, RadianceError> {
        let mut builder = tempfile::Builder::new();
        builder.prefix("helios-rad-");
        let dir = match &self.work_root {
            Some(root) => {
                fs::create_dir_all(root).map_err(io_error(format!("creating {}", root.display())))?;
                builder.tempdir_in(root)
            }
            None => builder.tempdir(),
        }
        .map_err(io_error("creating working directory"))?;

        let mut job = RadianceJob::new(scene, *sky, sensors, dir.path()).with_ambient(self.ambient);
        job.batch_size = self.batch_size;
        let triples = job.simulate(&self.install, cancel);
        if self.keep_workdirs {
            let _ = dir.keep();
        }
        triples?
            .into_iter()
            .map(|t| illuminance_from_irradiance(t).map_err(|e| RadianceError::Parse { line: 0, text: e.to_string() }))
            .collect()
    }
}

impl<T: Real> Backend<T> for RadianceBackend {
    fn name(&self) -> &str {
        NAME
    }

    fn fingerprint(&self) -> String {
        format!("{NAME} {}", self.ambient.fingerprint())
    }

    fn illuminance(
        &self,
        scene: &Scene<T>,
        sensors: &[Sensor<T>],
        sky: &SkyModel<T>,
        cancel: &CancelToken,
    ) -> Result<Vec<T>, BackendError> {
        sky.validate()?;
        self.run(scene, sensors, sky, cancel).map_err(|e| match e {
            RadianceError::Cancelled => BackendError::Cancelled,
            RadianceError::Emit(EmitError::Sky(s)) => BackendError::Sky(s),
            other => BackendError::Failed { backend: NAME.to_owned(), source: Box::new(other) },
        })
    }
}
