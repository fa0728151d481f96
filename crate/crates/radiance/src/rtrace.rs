//! Sensor evaluation with `rtrace -I+`.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use helios_core::grid::{sensor_lines, Sensor};
use helios_core::metrics::IrradianceTriple;
use helios_core::num::Real;
use helios_core::scene::Scene;
use helios_core::sky::SkyModel;
use helios_core::{CancelToken, JobStatus};

use crate::emit::emit_radiance_files;
use crate::install::Installation;
use crate::octree::{build_octree, OCTREE_FILE};
use crate::{io_error, process, RadianceError};

pub const SENSORS_FILE: &str = "sensors.pts";
pub const OUTPUT_FILE: &str = "output.dat";
pub const DEFAULT_BATCH_SIZE: usize = 1024;

/// Ambient calculation settings. Only the bounce count is normally changed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbientParams {
    pub bounces: u32,
    pub divisions: u32,
    pub supersamples: u32,
    pub accuracy: f64,
    pub resolution: u32,
}

impl Default for AmbientParams {
    fn default() -> Self {
        Self { bounces: 2, divisions: 1024, supersamples: 256, accuracy: 0.15, resolution: 128 }
    }
}

impl AmbientParams {
    pub fn with_bounces(bounces: u32) -> Self {
        Self { bounces, ..Self::default() }
    }

    /// Full `rtrace` argument list, octree excluded.
    pub fn args(&self) -> Vec<String> {
        let mut args: Vec<String> = ["-I+", "-h", "-w"].iter().map(|s| s.to_string()).collect();
        args.extend(self.fingerprint().split(' ').flat_map(|kv| {
            let (k, v) = kv.split_once('=').expect("key=value");
            [format!("-{k}"), v.to_owned()]
        }));
        args
    }

    pub fn fingerprint(&self) -> String {
        format!(
            "ab={} ad={} as={} aa={} ar={}",
            self.bounces,
            self.divisions,
            self.supersamples,
            crate::fmt_g(self.accuracy),
            self.resolution
        )
    }
}

/// One simulation: a scene, a sky and the sensors to evaluate, run in a
/// dedicated working directory.
#[derive(Debug)]
pub struct RadianceJob<'a, T> {
    pub scene: &'a Scene<T>,
    pub sky: SkyModel<T>,
    pub sensors: &'a [Sensor<T>],
    pub ambient: AmbientParams,
    pub workdir: PathBuf,
    pub batch_size: usize,
    status: JobStatus,
}

impl<'a, T: Real> RadianceJob<'a, T> {
    pub fn new(scene: &'a Scene<T>, sky: SkyModel<T>, sensors: &'a [Sensor<T>], workdir: impl Into<PathBuf>) -> Self {
        Self {
            scene,
            sky,
            sensors,
            ambient: AmbientParams::default(),
            workdir: workdir.into(),
            batch_size: DEFAULT_BATCH_SIZE,
            status: JobStatus::Pending,
        }
    }

    pub fn with_ambient(mut self, ambient: AmbientParams) -> Self {
        self.ambient = ambient;
        self
    }

    pub fn status(&self) -> JobStatus {
        self.status
    }

    pub fn octree_path(&self) -> PathBuf {
        self.workdir.join(OCTREE_FILE)
    }

    /// Emits the scene files and compiles the octree.
    pub fn prepare(&self, install: &Installation) -> Result<PathBuf, RadianceError> {
        fs::create_dir_all(&self.workdir).map_err(io_error(format!("creating {}", self.workdir.display())))?;
        let files = emit_radiance_files(self.scene, &self.sky)?.write_to(&self.workdir)?;
        build_octree(install, &files, &self.workdir)
    }

    /// [`prepare`](Self::prepare) followed by [`run_rtrace`].
    pub fn simulate(
        &mut self,
        install: &Installation,
        cancel: &CancelToken,
    ) -> Result<Vec<IrradianceTriple<T>>, RadianceError> {
        if let Err(e) = self.prepare(install) {
            self.status.advance(JobStatus::Failed)?;
            return Err(e);
        }
        run_rtrace(self, install, cancel)
    }
}

/// Runs `rtrace` over the job's sensors in batches, checking `cancel` before
/// each batch. Expects the octree to exist already.
pub fn run_rtrace<T: Real>(
    job: &mut RadianceJob<'_, T>,
    install: &Installation,
    cancel: &CancelToken,
) -> Result<Vec<IrradianceTriple<T>>, RadianceError> {
    job.status.advance(JobStatus::Running)?;
    let result = trace_batches(job, install, cancel);
    job.status.advance(if result.is_ok() { JobStatus::Done } else { JobStatus::Failed })?;
    result
}

fn trace_batches<T: Real>(
    job: &RadianceJob<'_, T>,
    install: &Installation,
    cancel: &CancelToken,
) -> Result<Vec<IrradianceTriple<T>>, RadianceError> {
    let octree = job.octree_path();
    if !octree.is_file() {
        return Err(RadianceError::Io {
            context: format!("octree {}", octree.display()),
            source: std::io::ErrorKind::NotFound.into(),
        });
    }
    let sensors_path = job.workdir.join(SENSORS_FILE);
    fs::write(&sensors_path, sensor_lines(job.sensors))
        .map_err(io_error(format!("writing {}", sensors_path.display())))?;
    let output_path = job.workdir.join(OUTPUT_FILE);
    let mut output = OpenOptions::new()
        .create(true)
        .write(true)
        .truncate(true)
        .open(&output_path)
        .map_err(io_error(format!("creating {}", output_path.display())))?;

    let mut triples = Vec::with_capacity(job.sensors.len());
    for batch in job.sensors.chunks(job.batch_size.max(1)) {
        if cancel.is_cancelled() {
            return Err(RadianceError::Cancelled);
        }
        let text = trace(install, &job.ambient, &octree, &job.workdir, batch, cancel)?;
        output.write_all(text.as_bytes()).map_err(io_error(format!("writing {}", output_path.display())))?;
        triples.extend(parse_output(&text, batch.len())?);
    }
    Ok(triples)
}

fn trace<T: Real>(
    install: &Installation,
    ambient: &AmbientParams,
    octree: &Path,
    workdir: &Path,
    sensors: &[Sensor<T>],
    cancel: &CancelToken,
) -> Result<String, RadianceError> {
    let mut cmd = install.command("rtrace");
    cmd.current_dir(workdir).args(ambient.args()).arg(octree);
    let out = process::run(cmd, "rtrace", sensor_lines(sensors).into_bytes(), cancel)?;
    String::from_utf8(out)
        .map_err(|e| RadianceError::Parse { line: 0, text: String::from_utf8_lossy(e.as_bytes()).into_owned() })
}

/// One whitespace-separated `r g b` triple per line, exactly `expected` lines.
pub fn parse_output<T: Real>(text: &str, expected: usize) -> Result<Vec<IrradianceTriple<T>>, RadianceError> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.len() != expected {
        return Err(RadianceError::LineCount { expected, got: lines.len() });
    }
    lines
        .iter()
        .enumerate()
        .map(|(i, line)| {
            let bad = || RadianceError::Parse { line: i + 1, text: (*line).to_owned() };
            let values: Vec<f64> = line
                .split_whitespace()
                .map(|tok| tok.parse::<f64>().ok().filter(|v| v.is_finite()))
                .collect::<Option<_>>()
                .ok_or_else(bad)?;
            match values[..] {
                [r, g, b] => Ok(IrradianceTriple::new(T::lit(r), T::lit(g), T::lit(b))),
                _ => Err(bad()),
            }
        })
        .collect()
}
