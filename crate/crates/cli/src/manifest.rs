use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub bytes: u64,
    pub sha256: String,
}

/// How a set of artifacts was produced. Passing the file back through
/// `--config` repeats the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub subcommand: String,
    pub config: Value,
    pub input: Option<InputDigest>,
    pub seeds: BTreeMap<String, u64>,
    pub artifacts: Vec<String>,
    /// Not reproducible; kept out of every other artifact.
    pub duration_seconds: f64,
}

/// Envelope for the JSON reports: the payload plus a pointer to its manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report<T> {
    pub manifest: String,
    pub input_sha256: Option<String>,
    pub report: T,
}

pub fn digest(path: &Path) -> std::io::Result<InputDigest> {
    let mut file = std::fs::File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    let mut bytes = 0u64;
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
        bytes += n as u64;
    }
    Ok(InputDigest { path: path.to_path_buf(), bytes, sha256: hex::encode(hasher.finalize()) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_known_text() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x");
        std::fs::write(&path, b"abc").unwrap();
        let d = digest(&path).unwrap();
        assert_eq!(d.bytes, 3);
        assert_eq!(d.sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
