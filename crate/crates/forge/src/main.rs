use std::path::PathBuf;
use std::process::ExitCode;

use autochrome_core::image::BitDepth;
use autochrome_core::loss::DEFAULT_THRESHOLD;
use autochrome_core::synth::SynthConfig;
use autochrome_forge::{
    cmd_baseline, cmd_derive_mask, cmd_evaluate, cmd_generate, cmd_loss, BaselineOptions, EvaluateOptions,
    GenerateOptions, Result,
};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "autochrome-forge", version, about = "Synthetic greening defects for autochrome restoration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize defected/mask pairs for every image in a directory.
    Generate {
        clean_dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// TOML synthesis config; defaults apply to missing keys.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Label this fraction of entries `train`, the rest `test`.
        #[arg(long)]
        split: Option<f64>,
        #[arg(long, default_value_t = 16, value_parser = parse_depth)]
        bit_depth: u32,
    },
    /// Threshold the channel-max difference between two images.
    DeriveMask {
        input: PathBuf,
        gt: PathBuf,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        t: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score restored images against ground truth, paired by file stem.
    Evaluate {
        restored_dir: PathBuf,
        gt_dir: PathBuf,
        /// Defect masks; adds the cropout SSIM column.
        #[arg(long)]
        masks: Option<PathBuf>,
        /// Degraded inputs; adds the weighted loss to every row.
        #[arg(long)]
        inputs: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        w: f64,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        t: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print the weighted spatial, frequency and combined loss as JSON.
    Loss {
        pred: PathBuf,
        gt: PathBuf,
        input: PathBuf,
        /// Weight outside defects: 0.1, 0.5 or 1.0.
        #[arg(long, default_value_t = 1.0)]
        w: f64,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        t: f64,
    },
    /// Histogram-match masked regions onto their surroundings.
    Baseline {
        defected: PathBuf,
        mask: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 16)]
        annulus: usize,
        /// Use these pixels as the reference for every component.
        #[arg(long)]
        reference_mask: Option<PathBuf>,
        #[arg(long, default_value_t = 16, value_parser = parse_depth)]
        bit_depth: u32,
    },
    /// Print the default synthesis config.
    DefaultConfig,
}

fn parse_depth(s: &str) -> std::result::Result<u32, String> {
    match s {
        "8" => Ok(8),
        "16" => Ok(16),
        _ => Err(format!("bit depth must be 8 or 16, got {s}")),
    }
}

fn depth(bits: u32) -> BitDepth {
    if bits == 8 {
        BitDepth::Eight
    } else {
        BitDepth::Sixteen
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate {
            clean_dir,
            out,
            seed,
            config,
            jobs,
            split,
            bit_depth,
        } => {
            let config = match config {
                Some(p) => SynthConfig::load(p)?,
                None => SynthConfig::default(),
            };
            let manifest = cmd_generate(&GenerateOptions {
                clean_dir,
                out_dir: out.clone(),
                config,
                seed,
                jobs,
                split,
                bit_depth: depth(bit_depth),
            })?;
            println!("{} pairs written to {}", manifest.entries.len(), out.display());
        }
        Command::DeriveMask { input, gt, t, out } => {
            let mask = cmd_derive_mask(&input, &gt, t, &out)?;
            println!("{} defect pixels", mask.count_above(0.5));
        }
        Command::Evaluate {
            restored_dir,
            gt_dir,
            masks,
            inputs,
            w,
            t,
            out,
            jobs,
        } => {
            let report = cmd_evaluate(&EvaluateOptions {
                restored_dir,
                gt_dir,
                mask_dir: masks,
                input_dir: inputs,
                w,
                t,
                out_dir: out,
                jobs,
            })?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report.aggregate).expect("aggregate serializes")
            );
        }
        Command::Loss { pred, gt, input, w, t } => {
            let report = cmd_loss(&pred, &gt, &input, w, t)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        Command::Baseline {
            defected,
            mask,
            out,
            annulus,
            reference_mask,
            bit_depth,
        } => cmd_baseline(&BaselineOptions {
            defected_path: defected,
            mask_path: mask,
            out_path: out,
            annulus,
            reference_mask,
            bit_depth: depth(bit_depth),
        })?,
        Command::DefaultConfig => print!("{}", SynthConfig::default().to_toml_string()),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
