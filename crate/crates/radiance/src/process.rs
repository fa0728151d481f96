use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::thread;
use std::time::Duration;

use helios_core::CancelToken;

use crate::{io_error, RadianceError};

const POLL: Duration = Duration::from_millis(10);

/// Runs `cmd` to completion, feeding `input` and collecting standard output.
/// A cancelled token kills the child. Non-zero exit carries stderr verbatim.
pub(crate) fn run(
    mut cmd: Command,
    program: &str,
    input: Vec<u8>,
    cancel: &CancelToken,
) -> Result<Vec<u8>, RadianceError> {
    let mut child = cmd
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(io_error(format!("starting {program}")))?;
    let mut stdin = child.stdin.take().expect("piped stdin");
    let writer = thread::spawn(move || stdin.write_all(&input));
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = thread::spawn(move || {
        let mut buf = Vec::new();
        stdout.read_to_end(&mut buf).map(|_| buf)
    });
    let mut stderr = child.stderr.take().expect("piped stderr");
    let errors = thread::spawn(move || {
        let mut buf = String::new();
        let _ = stderr.read_to_string(&mut buf);
        buf
    });

    let status = loop {
        if let Some(status) = child.try_wait().map_err(io_error(format!("waiting for {program}")))? {
            break status;
        }
        if cancel.is_cancelled() {
            let _ = child.kill();
            let _ = child.wait();
            return Err(RadianceError::Cancelled);
        }
        thread::sleep(POLL);
    };
    // A child that exits early closes its stdin; the write error is moot then.
    let written = writer.join().expect("stdin writer");
    let out = reader.join().expect("stdout reader").map_err(io_error(format!("reading {program} output")))?;
    let stderr = errors.join().expect("stderr reader");
    if !status.success() {
        return Err(RadianceError::Process {
            program: program.to_owned(),
            status: status.to_string(),
            stderr: stderr.trim_end().to_owned(),
        });
    }
    written.map_err(io_error(format!("writing {program} input")))?;
    Ok(out)
}
