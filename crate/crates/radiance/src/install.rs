//! Locating the Radiance binaries and building commands that can find their
//! auxiliary files.

use std::env;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::Command;

use crate::RadianceError;

/// Environment variable naming the Radiance `bin` directory.
pub const BIN_ENV: &str = "HELIOS_RADIANCE_BIN";

/// Conventional install prefixes tried after the environment and `PATH`.
pub const STANDARD_BIN_DIRS: [&str; 2] = ["/usr/local/radiance/bin", "/opt/radiance/bin"];

/// Programs every simulation needs.
pub const REQUIRED_PROGRAMS: [&str; 4] = ["oconv", "rtrace", "gensky", "xform"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Installation {
    pub bin: PathBuf,
    /// Directory holding `.cal` files, when one sits next to `bin`.
    pub lib: Option<PathBuf>,
}

fn has_programs(dir: &Path) -> bool {
    REQUIRED_PROGRAMS.iter().all(|p| dir.join(p).is_file())
}

impl Installation {
    /// Uses `bin` as the Radiance binary directory.
    pub fn at(bin: impl Into<PathBuf>) -> Result<Self, RadianceError> {
        let bin = bin.into();
        if !has_programs(&bin) {
            return Err(RadianceError::NotInstalled { variable: BIN_ENV, searched: vec![bin] });
        }
        let lib = bin.parent().map(|p| p.join("lib")).filter(|p| p.is_dir());
        Ok(Self { bin, lib })
    }

    /// Search order: `explicit`, then `$HELIOS_RADIANCE_BIN`, then each `PATH`
    /// entry, then the standard prefixes.
    pub fn discover(explicit: Option<&Path>) -> Result<Self, RadianceError> {
        let mut candidates: Vec<PathBuf> = Vec::new();
        candidates.extend(explicit.map(Path::to_path_buf));
        candidates.extend(env::var_os(BIN_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
        if let Some(path) = env::var_os("PATH") {
            candidates.extend(env::split_paths(&path));
        }
        candidates.extend(STANDARD_BIN_DIRS.iter().map(PathBuf::from));
        match candidates.iter().find(|dir| has_programs(dir)) {
            Some(dir) => Self::at(dir.clone()),
            None => Err(RadianceError::NotInstalled { variable: BIN_ENV, searched: candidates }),
        }
    }

    /// A command for `program` with `bin` first on `PATH` (for `!gensky` lines
    /// run by `oconv`) and `RAYPATH` covering the library directory.
    pub fn command(&self, program: &str) -> Command {
        let mut cmd = Command::new(self.bin.join(program));
        let mut path = vec![self.bin.clone()];
        if let Some(p) = env::var_os("PATH") {
            path.extend(env::split_paths(&p));
        }
        cmd.env("PATH", join(path));
        let mut raypath = vec![PathBuf::from(".")];
        raypath.extend(self.lib.clone());
        if let Some(p) = env::var_os("RAYPATH") {
            raypath.extend(env::split_paths(&p));
        }
        cmd.env("RAYPATH", join(raypath));
        cmd
    }
}

fn join(paths: Vec<PathBuf>) -> OsString {
    env::join_paths(paths).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_directory_names_the_variable() {
        let err = Installation::at("/nonexistent/radiance/bin").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains(BIN_ENV), "{msg}");
        assert!(msg.contains("/nonexistent/radiance/bin"), "{msg}");
    }
}
