use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use autochrome_core::image::{load_image, save_image, save_mask, BitDepth};
use autochrome_core::synth::{synthesize_pair, SynthConfig};
use autochrome_core::Error as CoreError;
use log::{info, warn};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::manifest::{config_digest, image_seed, DatasetManifest, ManifestEntry, MANIFEST_FILE, MANIFEST_VERSION};
use crate::{list_files, thread_pool};

pub const DEFECTED_DIR: &str = "defected";
pub const MASKS_DIR: &str = "masks";

#[derive(Debug, Clone)]
pub struct GenerateOptions {
    pub clean_dir: PathBuf,
    pub out_dir: PathBuf,
    pub config: SynthConfig,
    pub seed: u64,
    pub jobs: Option<usize>,
    /// Fraction of entries labelled `train`; the rest become `test`.
    pub split: Option<f64>,
    pub bit_depth: BitDepth,
}

/// Removes whatever a failed run wrote unless disarmed.
struct Cleanup {
    created_dirs: Vec<PathBuf>,
    files: Vec<PathBuf>,
    armed: bool,
}

impl Drop for Cleanup {
    fn drop(&mut self) {
        if !self.armed {
            return;
        }
        for f in &self.files {
            let _ = fs::remove_file(f);
        }
        for d in self.created_dirs.iter().rev() {
            let _ = fs::remove_dir_all(d);
        }
    }
}

fn ensure_dir(path: &Path, cleanup: &mut Cleanup) -> Result<()> {
    if !path.is_dir() {
        fs::create_dir_all(path).map_err(|e| CliError::io(path, e))?;
        cleanup.created_dirs.push(path.to_path_buf());
    }
    Ok(())
}

fn file_stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Synthesizes a defected image and mask for every decodable file in
/// `clean_dir` and records them in `out_dir/manifest.json`.
pub fn cmd_generate(opts: &GenerateOptions) -> Result<DatasetManifest> {
    opts.config.validate()?;
    if let Some(f) = opts.split {
        if !(0.0..=1.0).contains(&f) {
            return Err(CliError::Usage(format!("--split must lie in [0, 1], got {f}")));
        }
    }
    let candidates = list_files(&opts.clean_dir)?;
    if candidates.is_empty() {
        return Err(CliError::Usage(format!("no input files in {}", opts.clean_dir.display())));
    }
    let mut stems = BTreeSet::new();
    for c in &candidates {
        if !stems.insert(file_stem(c)) {
            return Err(CliError::Usage(format!(
                "two inputs share the stem {:?}; output names would collide",
                file_stem(c)
            )));
        }
    }

    let mut cleanup = Cleanup {
        created_dirs: vec![],
        files: vec![],
        armed: true,
    };
    ensure_dir(&opts.out_dir, &mut cleanup)?;
    let defected_dir = opts.out_dir.join(DEFECTED_DIR);
    let masks_dir = opts.out_dir.join(MASKS_DIR);
    ensure_dir(&defected_dir, &mut cleanup)?;
    ensure_dir(&masks_dir, &mut cleanup)?;
    let manifest_path = opts.out_dir.join(MANIFEST_FILE);
    for c in &candidates {
        let name = format!("{}.png", file_stem(c));
        cleanup.files.push(defected_dir.join(&name));
        cleanup.files.push(masks_dir.join(&name));
    }
    cleanup.files.push(manifest_path.clone());

    let pool = thread_pool(opts.jobs)?;
    let results: Vec<Result<Option<ManifestEntry>>> = pool.install(|| {
        candidates
            .par_iter()
            .enumerate()
            .map(|(index, path)| process_one(opts, index as u64, path, &defected_dir, &masks_dir))
            .collect()
    });
    let mut entries = Vec::with_capacity(results.len());
    for r in results {
        if let Some(e) = r? {
            entries.push(e);
        }
    }
    if entries.is_empty() {
        return Err(CliError::Usage(format!(
            "no decodable images in {}",
            opts.clean_dir.display()
        )));
    }

    if let Some(fraction) = opts.split {
        let mut order: Vec<usize> = (0..entries.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(opts.seed));
        let n_train = (fraction * entries.len() as f64).round() as usize;
        for (rank, &i) in order.iter().enumerate() {
            entries[i].split = Some(if rank < n_train { "train" } else { "test" }.to_string());
        }
    }

    let manifest = DatasetManifest {
        version: MANIFEST_VERSION.to_string(),
        dataset_seed: opts.seed,
        config_digest: config_digest(&opts.config),
        entries,
    };
    manifest.write(&manifest_path)?;
    cleanup.armed = false;
    info!(
        "wrote {} pairs to {}",
        manifest.entries.len(),
        opts.out_dir.display()
    );
    Ok(manifest)
}

fn process_one(
    opts: &GenerateOptions,
    index: u64,
    path: &Path,
    defected_dir: &Path,
    masks_dir: &Path,
) -> Result<Option<ManifestEntry>> {
    let clean = match load_image(path) {
        Ok(img) => img,
        Err(e @ CoreError::Format { .. }) => {
            warn!("skipping undecodable input: {e}");
            return Ok(None);
        }
        Err(e) => return Err(e.into()),
    };
    let seed = image_seed(opts.seed, index);
    let pair = match synthesize_pair(&clean, seed, &opts.config) {
        Ok(p) => p,
        Err(CoreError::Domain(msg)) => {
            warn!("skipping {}: {msg}", path.display());
            return Ok(None);
        }
        Err(e) => return Err(e.into()),
    };
    let name = PathBuf::from(format!("{}.png", file_stem(path)));
    save_image(&pair.defected, defected_dir.join(&name), opts.bit_depth)?;
    save_mask(&pair.mask, masks_dir.join(&name))?;
    Ok(Some(ManifestEntry {
        clean_path: path.to_path_buf(),
        defected_path: Path::new(DEFECTED_DIR).join(&name),
        mask_path: Path::new(MASKS_DIR).join(&name),
        index,
        image_seed: seed,
        mix_class: pair.layout.mix_class.name().to_string(),
        defect_count: pair.layout.specs.len(),
        split: None,
    }))
}
