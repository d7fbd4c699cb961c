//! Dataset plumbing around `autochrome-core`: batch pair generation with
//! manifests, mask derivation, loss auditing, metric evaluation and the
//! histogram-matching baseline.

mod error;
mod evaluate;
mod generate;
mod manifest;

use std::path::{Path, PathBuf};

use autochrome_core::baseline::{histogram_match_region, histogram_match_with_reference};
use autochrome_core::image::{load_image, load_mask, save_image, save_mask, BitDepth};
use autochrome_core::loss::{channel_max_abs_diff, combined_loss, LossReport, LossVariant, DEFAULT_FREQUENCY_WEIGHT};
use autochrome_core::GrayField;

pub use error::{CliError, Result};
pub use evaluate::{aggregate, cmd_evaluate, Aggregate, EvalReport, EvalRow, EvaluateOptions, Skipped, AGGREGATE_FILE, ROWS_FILE};
pub use generate::{cmd_generate, GenerateOptions, DEFECTED_DIR, MASKS_DIR};
pub use manifest::{config_digest, image_seed, DatasetManifest, ManifestEntry, MANIFEST_FILE, MANIFEST_VERSION};

/// Regular files directly inside `dir`, sorted by file name.
pub fn list_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let rd = std::fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut files = Vec::new();
    for entry in rd {
        let entry = entry.map_err(|e| CliError::io(dir, e))?;
        let path = entry.path();
        if path.is_file() {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

pub(crate) fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        if n == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

/// Binary mask of pixels whose channel-max absolute difference exceeds `t`.
pub fn derive_mask(input: &autochrome_core::RasterImage, gt: &autochrome_core::RasterImage, t: f64) -> Result<GrayField> {
    if !(t >= 0.0) {
        return Err(CliError::Usage(format!("--t must be non-negative, got {t}")));
    }
    let diff = channel_max_abs_diff(input, gt)?;
    let (w, h) = diff.dims();
    let bits = diff.values().iter().map(|&d| if d > t { 1.0 } else { 0.0 }).collect();
    Ok(GrayField::from_vec(w, h, bits)?)
}

pub fn cmd_derive_mask(input_path: &Path, gt_path: &Path, t: f64, out_path: &Path) -> Result<GrayField> {
    let mask = derive_mask(&load_image(input_path)?, &load_image(gt_path)?, t)?;
    save_mask(&mask, out_path)?;
    Ok(mask)
}

pub fn cmd_loss(pred_path: &Path, gt_path: &Path, input_path: &Path, w: f64, t: f64) -> Result<LossReport> {
    let variant = LossVariant::from_weight(w)
        .ok_or_else(|| CliError::Usage(format!("--w must be one of 0.1, 0.5 or 1.0, got {w}")))?;
    let pred = load_image(pred_path)?;
    let gt = load_image(gt_path)?;
    let input = load_image(input_path)?;
    Ok(combined_loss(&pred, &gt, &input, variant.weight(), t, DEFAULT_FREQUENCY_WEIGHT)?)
}

#[derive(Debug, Clone)]
pub struct BaselineOptions {
    pub defected_path: PathBuf,
    pub mask_path: PathBuf,
    pub out_path: PathBuf,
    pub annulus: usize,
    pub reference_mask: Option<PathBuf>,
    pub bit_depth: BitDepth,
}

pub fn cmd_baseline(opts: &BaselineOptions) -> Result<()> {
    let img = load_image(&opts.defected_path)?;
    let mask = load_mask(&opts.mask_path)?;
    if mask.count_above(0.5) == 0 {
        return Err(CliError::Data(format!(
            "mask {} marks no defect pixels",
            opts.mask_path.display()
        )));
    }
    let restored = match &opts.reference_mask {
        Some(r) => histogram_match_with_reference(&img, &mask, &load_mask(r)?)?,
        None => histogram_match_region(&img, &mask, opts.annulus)?,
    };
    save_image(&restored, &opts.out_path, opts.bit_depth)?;
    Ok(())
}
