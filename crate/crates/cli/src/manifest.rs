use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

pub const MANIFEST_NAME: &str = "run.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Outcome of one verification check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub subcommand: &'static str,
    pub name: String,
    pub pass: bool,
    /// Failing gating checks set exit status 2; non-gating ones only with `--strict`.
    pub gating: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub config_hash: String,
    pub seed: u64,
    pub timestamp: String,
    pub files: Vec<FileRecord>,
    pub fits: Map<String, Value>,
    pub checks: Vec<CheckRecord>,
    pub status: String,
}

/// Serialized writes into one output directory, remembering what was written.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    files: Vec<FileRecord>,
}

impl OutputDir {
    /// Creates the directory; any failure means it is unwritable.
    pub fn create(root: &Path) -> std::io::Result<Self> {
        std::fs::create_dir_all(root)?;
        if !std::fs::metadata(root)?.is_dir() {
            return Err(std::io::Error::other(format!("{} is not a directory", root.display())));
        }
        Ok(Self { root: root.to_path_buf(), files: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Writes `name`, replacing the record if the same name was written before.
    pub fn write(&mut self, name: &str, contents: &[u8]) -> std::io::Result<()> {
        let path = self.root.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| std::io::Error::new(e.kind(), format!("writing {}: {e}", path.display())))?;
        let record =
            FileRecord { path: name.to_string(), sha256: hex::encode(Sha256::digest(contents)), bytes: contents.len() };
        match self.files.iter_mut().find(|f| f.path == name) {
            Some(existing) => *existing = record,
            None => self.files.push(record),
        }
        Ok(())
    }

    pub fn files(&self) -> &[FileRecord] {
        &self.files
    }
}

pub fn write_manifest(out: &mut OutputDir, mut manifest: RunManifest) -> std::io::Result<RunManifest> {
    manifest.files = out.files().to_vec();
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    let path = out.root().join(MANIFEST_NAME);
    std::fs::write(&path, text)
        .map_err(|e| std::io::Error::new(e.kind(), format!("writing {}: {e}", path.display())))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rewrites_keep_one_record() {
        let dir = std::env::temp_dir().join(format!("fastreact-manifest-{}", std::process::id()));
        let mut out = OutputDir::create(&dir).unwrap();
        out.write("a.csv", b"x\n").unwrap();
        out.write("b.csv", b"y\n").unwrap();
        out.write("a.csv", b"z\n").unwrap();
        assert_eq!(out.files().len(), 2);
        assert_eq!(out.files()[0].sha256, hex::encode(Sha256::digest(b"z\n")));
        std::fs::remove_dir_all(dir).unwrap();
    }
}
