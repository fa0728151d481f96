//! Compiling the emitted files into a single octree.

use std::fs;
use std::path::{Path, PathBuf};

use helios_core::CancelToken;

use crate::emit::WrittenFiles;
use crate::install::Installation;
use crate::{io_error, process, RadianceError};

pub const OCTREE_FILE: &str = "scene.oct";

/// `oconv materials sky geometry > scene.oct`, run inside `workdir`.
pub fn build_octree(install: &Installation, files: &WrittenFiles, workdir: &Path) -> Result<PathBuf, RadianceError> {
    let mut cmd = install.command("oconv");
    cmd.current_dir(workdir).arg(&files.materials).arg(&files.sky).arg(&files.geometry);
    let octree = process::run(cmd, "oconv", Vec::new(), &CancelToken::new())?;
    let path = workdir.join(OCTREE_FILE);
    fs::write(&path, octree).map_err(io_error(format!("writing {}", path.display())))?;
    Ok(path)
}
