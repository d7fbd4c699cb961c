use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use autochrome_core::image::{load_image, load_mask};
use autochrome_core::loss::{combined_loss, LossReport, DEFAULT_FREQUENCY_WEIGHT};
use autochrome_core::metrics::{cropout_ssim, ms_ssim, psnr, psnr_serde};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::{list_files, thread_pool};

pub const ROWS_FILE: &str = "rows.jsonl";
pub const AGGREGATE_FILE: &str = "aggregate.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub pair_id: String,
    #[serde(with = "psnr_serde")]
    pub psnr_db: f64,
    pub ms_ssim: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cropout_ssim: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss: Option<LossReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub name: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub pairs: usize,
    #[serde(with = "psnr_serde")]
    pub psnr_db: f64,
    pub ms_ssim: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cropout_ssim: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss: Option<LossReport>,
    pub skipped: Vec<Skipped>,
}

#[derive(Debug, Clone)]
pub struct EvaluateOptions {
    pub restored_dir: PathBuf,
    pub gt_dir: PathBuf,
    pub mask_dir: Option<PathBuf>,
    /// Degraded inputs; when given, rows carry the weighted loss.
    pub input_dir: Option<PathBuf>,
    pub w: f64,
    pub t: f64,
    pub out_dir: PathBuf,
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub rows: Vec<EvalRow>,
    pub aggregate: Aggregate,
}

fn by_stem(dir: &Path) -> Result<BTreeMap<String, PathBuf>> {
    Ok(list_files(dir)?
        .into_iter()
        .filter_map(|p| Some((p.file_stem()?.to_string_lossy().into_owned(), p)))
        .collect())
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (mut sum, mut n) = (0.0, 0usize);
    for v in values {
        sum += v;
        n += 1;
    }
    (n > 0).then(|| sum / n as f64)
}

/// Arithmetic means over the rows. Rows without a cropout score (empty
/// masks) do not enter the cropout mean.
pub fn aggregate(rows: &[EvalRow], with_cropout: bool, skipped: Vec<Skipped>) -> Aggregate {
    let loss = if !rows.is_empty() && rows.iter().all(|r| r.loss.is_some()) {
        let ls: Vec<LossReport> = rows.iter().filter_map(|r| r.loss).collect();
        let fw = ls[0].frequency_weight;
        Some(LossReport {
            spatial: mean(ls.iter().map(|l| l.spatial)).unwrap_or(0.0),
            frequency: mean(ls.iter().map(|l| l.frequency)).unwrap_or(0.0),
            combined: mean(ls.iter().map(|l| l.combined)).unwrap_or(0.0),
            frequency_weight: fw,
        })
    } else {
        None
    };
    Aggregate {
        pairs: rows.len(),
        psnr_db: mean(rows.iter().map(|r| r.psnr_db)).unwrap_or(f64::NAN),
        ms_ssim: mean(rows.iter().map(|r| r.ms_ssim)).unwrap_or(f64::NAN),
        cropout_ssim: if with_cropout {
            mean(rows.iter().filter_map(|r| r.cropout_ssim))
        } else {
            None
        },
        loss,
        skipped,
    }
}

fn score(opts: &EvaluateOptions, stem: &str, restored: &Path, gt: &Path, mask: Option<&Path>, input: Option<&Path>) -> Result<EvalRow> {
    let pred = load_image(restored)?;
    let reference = load_image(gt)?;
    let cropout = match mask {
        Some(m) => {
            let mask = load_mask(m)?;
            if mask.count_above(0.5) == 0 {
                None
            } else {
                Some(cropout_ssim(&pred, &reference, &mask)?)
            }
        }
        None => None,
    };
    let loss = match input {
        Some(p) => Some(combined_loss(&pred, &reference, &load_image(p)?, opts.w, opts.t, DEFAULT_FREQUENCY_WEIGHT)?),
        None => None,
    };
    Ok(EvalRow {
        pair_id: stem.to_string(),
        psnr_db: psnr(&pred, &reference)?,
        ms_ssim: ms_ssim(&pred, &reference)?,
        cropout_ssim: cropout,
        loss,
    })
}

/// Scores restored images against ground truth paired by file stem and
/// writes `rows.jsonl` and `aggregate.json` into the output directory.
pub fn cmd_evaluate(opts: &EvaluateOptions) -> Result<EvalReport> {
    let restored = by_stem(&opts.restored_dir)?;
    let gt = by_stem(&opts.gt_dir)?;
    let masks = opts.mask_dir.as_deref().map(by_stem).transpose()?;
    let inputs = opts.input_dir.as_deref().map(by_stem).transpose()?;

    let mut skipped = Vec::new();
    let mut jobs = Vec::new();
    for (stem, r) in &restored {
        let Some(g) = gt.get(stem) else {
            skipped.push(Skipped { name: stem.clone(), reason: "no ground truth with this name".into() });
            continue;
        };
        let m = match &masks {
            Some(ms) => match ms.get(stem) {
                Some(m) => Some(m.as_path()),
                None => {
                    skipped.push(Skipped { name: stem.clone(), reason: "no mask with this name".into() });
                    continue;
                }
            },
            None => None,
        };
        let i = match &inputs {
            Some(is) => match is.get(stem) {
                Some(i) => Some(i.as_path()),
                None => {
                    skipped.push(Skipped { name: stem.clone(), reason: "no input with this name".into() });
                    continue;
                }
            },
            None => None,
        };
        jobs.push((stem.as_str(), r.as_path(), g.as_path(), m, i));
    }
    for stem in gt.keys().filter(|s| !restored.contains_key(*s)) {
        skipped.push(Skipped { name: stem.clone(), reason: "no restored image with this name".into() });
    }

    let pool = thread_pool(opts.jobs)?;
    let scored: Vec<(String, Result<EvalRow>)> = pool.install(|| {
        jobs.par_iter()
            .map(|(stem, r, g, m, i)| (stem.to_string(), score(opts, stem, r, g, *m, *i)))
            .collect()
    });
    let mut rows = Vec::new();
    for (stem, res) in scored {
        match res {
            Ok(row) => rows.push(row),
            Err(e @ CliError::Io { .. }) => return Err(e),
            Err(e) => {
                log::warn!("skipping pair {stem}: {e}");
                skipped.push(Skipped { name: stem, reason: e.to_string() });
            }
        }
    }
    skipped.sort_by(|a, b| a.name.cmp(&b.name));

    let aggregate = aggregate(&rows, opts.mask_dir.is_some(), skipped);
    write_report(&opts.out_dir, &rows, &aggregate)?;
    if rows.is_empty() {
        return Err(CliError::Data(format!(
            "no pairs could be evaluated; {} skipped",
            aggregate.skipped.len()
        )));
    }
    Ok(EvalReport { rows, aggregate })
}

fn write_report(out_dir: &Path, rows: &[EvalRow], aggregate: &Aggregate) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let rows_path = out_dir.join(ROWS_FILE);
    let mut buf = Vec::new();
    for row in rows {
        serde_json::to_writer(&mut buf, row).expect("row serializes");
        buf.push(b'\n');
    }
    fs::File::create(&rows_path)
        .and_then(|mut f| f.write_all(&buf))
        .map_err(|e| CliError::io(&rows_path, e))?;
    let agg_path = out_dir.join(AGGREGATE_FILE);
    let mut text = serde_json::to_string_pretty(aggregate).expect("aggregate serializes");
    text.push('\n');
    fs::write(&agg_path, text).map_err(|e| CliError::io(&agg_path, e))
}
