use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;
use crate::Format;

/// Collects result files and writes them in one pass once everything is computed.
pub struct Output {
    dir: Option<PathBuf>,
    format: Option<Format>,
}

pub struct Files(Vec<(&'static str, Vec<u8>)>);

impl Files {
    pub fn new() -> Self {
        Files(Vec::new())
    }

    pub fn add(&mut self, name: &'static str, bytes: Vec<u8>) {
        self.0.push((name, bytes));
    }
}

impl Output {
    pub fn new(dir: Option<PathBuf>, format: Option<Format>) -> Self {
        Output { dir, format }
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn has_dir(&self) -> bool {
        self.dir.is_some()
    }

    /// Writes `files` under the output directory (if any), then `stdout`.
    pub fn finish(&self, files: Files, stdout: &[u8]) -> Result<(), CliError> {
        if let Some(dir) = &self.dir {
            fs::create_dir_all(dir).map_err(|source| io_err(dir, source))?;
            for (name, bytes) in &files.0 {
                let path = dir.join(name);
                fs::write(&path, bytes).map_err(|source| io_err(&path, source))?;
            }
        }
        let mut out = io::stdout().lock();
        out.write_all(stdout)
            .and_then(|_| out.flush())
            .map_err(|source| io_err(Path::new("<stdout>"), source))
    }
}

fn io_err(path: &Path, source: io::Error) -> CliError {
    CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("results serialize to JSON");
    v.push(b'\n');
    v
}

/// Renders into a buffer with a writer-taking function from the core crate.
pub fn buffer<E: Into<CliError>>(
    f: impl FnOnce(&mut Vec<u8>) -> Result<(), E>,
) -> Result<Vec<u8>, CliError> {
    let mut v = Vec::new();
    f(&mut v).map_err(Into::into)?;
    Ok(v)
}
