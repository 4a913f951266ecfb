//! The run manifest: one JSON object per invocation recording the command
//! line, the modulus-table hash, versions, the seed, and per-stage
//! wall-clock and pass/fail. Result bodies stay byte-identical across
//! reruns; only the manifest timestamp differs.

use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct Stage {
    pub name: String,
    pub wall_ms: u128,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema: u32,
    pub command: String,
    pub version: &'static str,
    pub timestamp_unix: u64,
    pub moduli_sha256: String,
    pub seed: u64,
    pub workers: usize,
    pub stages: Vec<Stage>,
}

impl RunManifest {
    pub fn new(command: String, moduli_text: &str, seed: u64, workers: usize) -> RunManifest {
        let mut hasher = Sha256::new();
        hasher.update(moduli_text.as_bytes());
        RunManifest {
            schema: 1,
            command,
            version: env!("CARGO_PKG_VERSION"),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            moduli_sha256: format!("{:x}", hasher.finalize()),
            seed,
            workers,
            stages: Vec::new(),
        }
    }

    pub fn push_stage(&mut self, name: impl Into<String>, wall: Duration, pass: bool) {
        self.stages.push(Stage {
            name: name.into(),
            wall_ms: wall.as_millis(),
            pass,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.stages.iter().all(|s| s.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("manifest serializes")
    }
}
