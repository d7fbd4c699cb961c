use std::path::{Path, PathBuf};

use autochrome_core::synth::SynthConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const MANIFEST_VERSION: &str = "1";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub version: String,
    pub dataset_seed: u64,
    /// Hex SHA-256 of the canonical TOML rendering of the config.
    pub config_digest: String,
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub clean_path: PathBuf,
    /// Relative to the manifest's directory.
    pub defected_path: PathBuf,
    /// Relative to the manifest's directory.
    pub mask_path: PathBuf,
    /// Position of the clean file among the sorted input candidates.
    pub index: u64,
    pub image_seed: u64,
    pub mix_class: String,
    pub defect_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<String>,
}

impl DatasetManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let manifest: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Data(format!("malformed manifest {}: {e}", path.display())))?;
        if manifest.version != MANIFEST_VERSION {
            return Err(CliError::Data(format!(
                "manifest {} has version {}, expected {MANIFEST_VERSION}",
                path.display(),
                manifest.version
            )));
        }
        Ok(manifest)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        std::fs::write(path, text).map_err(|e| CliError::io(path, e))
    }
}

/// Per-image seed: SplitMix64 finalizer over the dataset seed and index.
pub fn image_seed(dataset_seed: u64, index: u64) -> u64 {
    let mut z = dataset_seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn config_digest(config: &SynthConfig) -> String {
    hex::encode(Sha256::digest(config.to_toml_string().as_bytes()))
}
