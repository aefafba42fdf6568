//! Atomic file output, content fingerprints and the metadata every artifact carries.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of the canonical JSON encoding of a resolved configuration.
pub fn config_hash<C: Serialize>(config: &C) -> String {
    sha256_hex(&serde_json::to_vec(config).expect("configurations serialize"))
}

pub fn read_bytes(path: &Path, contract: &'static str) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::data(contract, format!("{}: {e}", path.display())))
}

/// Writes through a temporary file in the destination directory, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let fail = |e: std::io::Error| CliError::data("output", format!("{}: {e}", path.display()));
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(fail)?;
    }
    let name = path.file_name().ok_or_else(|| CliError::usage(format!("{} is not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(fail)
}

/// Sidecar for formats without a comment syntax of their own.
pub fn meta_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    path.with_file_name(name)
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta<'a, C: Serialize> {
    pub schema_version: u32,
    pub command: &'a str,
    pub config_sha256: String,
    pub config: &'a C,
}

impl<'a, C: Serialize> Meta<'a, C> {
    pub fn new(command: &'a str, config: &'a C) -> Self {
        Self { schema_version: SCHEMA_VERSION, command, config_sha256: config_hash(config), config }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("metadata serializes");
        out.push(b'\n');
        out
    }

    /// One-line XML comment for SVG output.
    pub fn svg_comment(&self) -> String {
        format!("schema_version={} command={} config_sha256={}", self.schema_version, self.command, self.config_sha256)
    }
}

/// Files produced by one command, written only after every one of them has been built.
#[derive(Default)]
pub struct Outputs {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Outputs {
    pub fn add(&mut self, path: impl Into<PathBuf>, bytes: Vec<u8>) {
        self.files.push((path.into(), bytes));
    }

    /// Adds `bytes` at `path` and its `.meta.json` sidecar.
    pub fn add_with_meta<C: Serialize>(&mut self, path: impl Into<PathBuf>, bytes: Vec<u8>, meta: &Meta<'_, C>) {
        let path = path.into();
        self.files.push((meta_path(&path), meta.to_bytes()));
        self.files.push((path, bytes));
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.files.iter().map(|(p, _)| p.as_path())
    }

    pub fn commit(self) -> CliResult<Vec<PathBuf>> {
        let mut written = Vec::with_capacity(self.files.len());
        for (path, bytes) in self.files {
            write_atomic(&path, &bytes)?;
            written.push(path);
        }
        Ok(written)
    }
}

pub fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("output serializes");
    out.push(b'\n');
    out
}
