//! `bodymap-synth`: build, subset, validate, and inspect body-map datasets.
//!
//! Exit codes: 0 success, 2 configuration error, 3 generation failure,
//! 4 I/O or decode error, 5 validation found violations.

mod config_file;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use bodymap_synth::bodymap::{
    BodyMask, RegionPartition, DEFAULT_HEIGHT, DEFAULT_MARGIN, DEFAULT_WIDTH,
};
use bodymap_synth::dataset::{
    build_dataset, summarize, validate_dataset, write_subset, DatasetManifest, Family, MaskSource,
};
use bodymap_synth::raster::{render_partition, write_png};
use bodymap_synth::{Error, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config_file::{resolve_scenario, ConfigFile, ScenarioRef};

const EXIT_CONFIG: u8 = 2;
const EXIT_GENERATION: u8 = 3;
const EXIT_IO: u8 = 4;
const EXIT_VIOLATIONS: u8 = 5;

#[derive(Parser)]
#[command(
    name = "bodymap-synth",
    version,
    about = "Synthetic body-map dataset generator"
)]
struct Cli {
    /// Print one JSON summary line instead of text.
    #[arg(long, global = true)]
    porcelain: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a dataset.
    Generate(GenerateArgs),
    /// Copy the first N train and M test images of every class.
    Subset(SubsetArgs),
    /// Check a dataset directory against its manifest.
    Validate(ValidateArgs),
    /// Write a PNG showing the twelve regions.
    Regions(RegionsArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// basic3, regions36, or diagnoses.
    family: Family,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    per_class_train: Option<u32>,
    #[arg(long)]
    per_class_test: Option<u32>,
    /// Canvas size as WxH.
    #[arg(long)]
    size: Option<Size>,
    /// Mask PNG; pixels brighter than 127 are drawable.
    #[arg(long)]
    mask: Option<PathBuf>,
    /// Background PNG the marks are drawn over.
    #[arg(long)]
    template: Option<PathBuf>,
    /// Scenario JSON for the diagnoses family.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// JSON config file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads; output does not depend on it.
    #[arg(long, default_value_t = default_jobs())]
    jobs: usize,
}

#[derive(Args)]
struct SubsetArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 5)]
    train_per_class: u32,
    #[arg(long, default_value_t = 4)]
    test_per_class: u32,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct RegionsArgs {
    #[arg(long)]
    out: PathBuf,
    /// Canvas size as WxH; defaults to the mask's size, else 1000x800.
    #[arg(long)]
    size: Option<Size>,
    #[arg(long)]
    mask: Option<PathBuf>,
    /// Grid shape as RxC; rows times columns must be 12.
    #[arg(long, default_value = "3x4")]
    grid: Size,
}

/// A `AxB` pair, used for both `WxH` sizes and `RxC` grids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Size(u32, u32);

impl FromStr for Size {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected AxB, got {s:?}"))?;
        let parse = |v: &str| v.trim().parse::<u32>().map_err(|e| format!("{v:?}: {e}"));
        Ok(Size(parse(a)?, parse(b)?))
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Domain(_) => EXIT_CONFIG,
        Error::SamplingExhausted { .. } | Error::GenerationFailed { .. } => EXIT_GENERATION,
        Error::Io { .. } | Error::Decode(_) => EXIT_IO,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let porcelain = cli.porcelain;
    let result = match cli.command {
        Command::Generate(args) => generate(args, porcelain),
        Command::Subset(args) => subset(args, porcelain),
        Command::Validate(args) => validate(args, porcelain),
        Command::Regions(args) => regions(args, porcelain),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("bodymap-synth: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn generate(args: GenerateArgs, porcelain: bool) -> Result<u8> {
    let file = match &args.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let file_out = file.out.clone();
    let mut config = file.apply(args.family)?;
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(n) = args.per_class_train {
        config.images_per_class_train = n;
    }
    if let Some(n) = args.per_class_test {
        config.images_per_class_test = n;
    }
    if let Some(Size(w, h)) = args.size {
        config.width = w;
        config.height = h;
    }
    if let Some(path) = args.mask {
        config.mask = MaskSource::File { path };
    }
    if let Some(path) = args.template {
        config.template = Some(path);
    }
    if let Some(path) = args.scenario {
        config.scenario = Some(resolve_scenario(ScenarioRef::Path(path))?);
    }
    if config.family != Family::Diagnoses && config.scenario.is_some() {
        return Err(Error::Config(format!(
            "scenarios only apply to the diagnoses family, not {}",
            config.family
        )));
    }
    let out = args
        .out
        .or(file_out)
        .ok_or_else(|| Error::Config("no output directory: pass --out or set \"out\"".into()))?;
    if args.jobs == 0 {
        return Err(Error::Config("--jobs must be at least 1".into()));
    }

    let manifest = build_dataset(&config, &out, args.jobs)?;
    let s = summarize(&manifest);
    if porcelain {
        println!(
            "{}",
            json!({
                "command": "generate",
                "family": s.family,
                "out": out,
                "train": s.train,
                "test": s.test,
                "config_digest": s.config_digest,
            })
        );
    } else {
        println!(
            "generated {} in {}: {} train, {} test, digest {}",
            s.family,
            out.display(),
            s.train,
            s.test,
            s.config_digest
        );
    }
    Ok(0)
}

fn subset(args: SubsetArgs, porcelain: bool) -> Result<u8> {
    let m = write_subset(
        &args.input,
        &args.out,
        args.train_per_class,
        args.test_per_class,
    )?;
    report_manifest("subset", &args.out, &m, porcelain);
    Ok(0)
}

fn report_manifest(command: &str, out: &Path, m: &DatasetManifest, porcelain: bool) {
    let s = summarize(m);
    if porcelain {
        println!(
            "{}",
            json!({
                "command": command,
                "family": s.family,
                "out": out,
                "train": s.train,
                "test": s.test,
                "config_digest": s.config_digest,
            })
        );
    } else {
        println!(
            "wrote {} {command} to {}: {} train, {} test, digest {}",
            s.family,
            out.display(),
            s.train,
            s.test,
            s.config_digest
        );
    }
}

fn validate(args: ValidateArgs, porcelain: bool) -> Result<u8> {
    let report = validate_dataset(&args.input)?;
    if porcelain {
        println!(
            "{}",
            json!({
                "command": "validate",
                "in": args.input,
                "entries_checked": report.entries_checked,
                "violations": report.violations,
            })
        );
    } else {
        for v in &report.violations {
            println!("{v}");
        }
        println!(
            "{} entries checked, {} violation(s)",
            report.entries_checked,
            report.violations.len()
        );
    }
    Ok(if report.is_clean() {
        0
    } else {
        EXIT_VIOLATIONS
    })
}

fn regions(args: RegionsArgs, porcelain: bool) -> Result<u8> {
    let mask = match (&args.mask, args.size) {
        (Some(path), size) => {
            let mask = BodyMask::load(path)?;
            if let Some(Size(w, h)) = size {
                if (w, h) != (mask.width(), mask.height()) {
                    return Err(Error::Config(format!(
                        "mask is {}x{}, --size asks for {w}x{h}",
                        mask.width(),
                        mask.height()
                    )));
                }
            }
            mask
        }
        (None, size) => {
            let Size(w, h) = size.unwrap_or(Size(DEFAULT_WIDTH, DEFAULT_HEIGHT));
            BodyMask::default_mask(w, h, DEFAULT_MARGIN)?
        }
    };
    let Size(rows, cols) = args.grid;
    let partition = RegionPartition::grid(&mask, rows, cols)?;
    let image = render_partition(&partition, mask.width(), mask.height());
    write_png(&args.out, &image)?;
    if porcelain {
        println!(
            "{}",
            json!({
                "command": "regions",
                "out": args.out,
                "width": mask.width(),
                "height": mask.height(),
                "rows": rows,
                "cols": cols,
            })
        );
    } else {
        println!(
            "wrote {rows}x{cols} region map ({}x{}) to {}",
            mask.width(),
            mask.height(),
            args.out.display()
        );
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sizes() {
        assert_eq!("1000x800".parse::<Size>().unwrap(), Size(1000, 800));
        assert_eq!("3X4".parse::<Size>().unwrap(), Size(3, 4));
        assert!("1000".parse::<Size>().is_err());
        assert!("ax3".parse::<Size>().is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
