//! Parallel, order-independent dataset assembly.
//!
//! Every image draws from its own stream, labelled
//! `"<family>/<class_dir>/<split>/<index>"`, so images can be produced in
//! any order on any number of threads and the result is the same. The
//! manifest lists entries by class, then split (train before test), then
//! index.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{DatasetConfig, Resources};
use super::label::{ClassLabel, Family, Split};
use super::manifest::{DatasetManifest, ManifestEntry, MarkRecord};
use super::scenario::{RegionSelector, ScenarioSpec};
use crate::bodymap::SampleDomain;
use crate::error::{Error, Result};
use crate::geometry::{derive_stream, RandomStream};
use crate::primitives::gen_primitive;
use crate::raster::{composite_template, encode_png, render, Canvas, TRANSPARENT};

/// Present in a dataset directory while a build is running or after it failed.
pub const INCOMPLETE_MARKER: &str = ".incomplete";

/// Counts and digest of a finished build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildSummary {
    pub family: Family,
    pub train: usize,
    pub test: usize,
    pub config_digest: String,
}

impl BuildSummary {
    fn of(manifest: &DatasetManifest) -> Self {
        BuildSummary {
            family: manifest.family,
            train: manifest.count(Split::Train),
            test: manifest.count(Split::Test),
            config_digest: manifest.config_digest.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct WorkItem {
    label: ClassLabel,
    split: Split,
    index: u32,
}

impl WorkItem {
    fn rel_path(&self) -> String {
        format!(
            "{}/{}/{:05}.png",
            self.split.as_str(),
            self.label.class_dir(),
            self.index
        )
    }

    fn stream_label(&self) -> String {
        format!(
            "{}/{}/{}/{}",
            self.label.family(),
            self.label.class_dir(),
            self.split.as_str(),
            self.index
        )
    }
}

fn work_items(config: &DatasetConfig) -> Vec<WorkItem> {
    let mut items = Vec::new();
    for label in config.family.labels() {
        for split in Split::ALL {
            for index in 0..config.count(split) {
                items.push(WorkItem {
                    label,
                    split,
                    index,
                });
            }
        }
    }
    items
}

pub fn build_basic3(config: &DatasetConfig, out: &Path, jobs: usize) -> Result<DatasetManifest> {
    expect_family(config, Family::Basic3)?;
    build_dataset(config, out, jobs)
}

pub fn build_regions36(config: &DatasetConfig, out: &Path, jobs: usize) -> Result<DatasetManifest> {
    expect_family(config, Family::Regions36)?;
    build_dataset(config, out, jobs)
}

pub fn build_diagnoses(
    config: &DatasetConfig,
    scenario: &ScenarioSpec,
    out: &Path,
    jobs: usize,
) -> Result<DatasetManifest> {
    expect_family(config, Family::Diagnoses)?;
    let config = DatasetConfig {
        scenario: Some(scenario.clone()),
        ..config.clone()
    };
    build_dataset(&config, out, jobs)
}

fn expect_family(config: &DatasetConfig, family: Family) -> Result<()> {
    if config.family == family {
        Ok(())
    } else {
        Err(Error::config(format!(
            "config is for {}, expected {family}",
            config.family
        )))
    }
}

/// Build the dataset described by `config` into `out`, which must be absent
/// or empty. `jobs` is the worker thread count (0 picks one per core).
///
/// On failure every image written so far is removed and only the
/// [`INCOMPLETE_MARKER`] file is left behind.
pub fn build_dataset(config: &DatasetConfig, out: &Path, jobs: usize) -> Result<DatasetManifest> {
    config.validate()?;
    let resources = config.resources(None)?;
    prepare_empty_dir(out)?;
    let marker = out.join(INCOMPLETE_MARKER);
    std::fs::write(&marker, b"").map_err(|e| Error::io(&marker, e))?;

    let items = work_items(config);
    let result = run_items(config, &resources, &items, out, jobs).and_then(|entries| {
        let manifest = DatasetManifest::new(config.clone(), entries);
        manifest.write(out)?;
        Ok(manifest)
    });
    match result {
        Ok(manifest) => {
            std::fs::remove_file(&marker).map_err(|e| Error::io(&marker, e))?;
            Ok(manifest)
        }
        Err(e) => {
            discard_partial(out, &items);
            Err(e)
        }
    }
}

/// Summary line data for a manifest.
pub fn summarize(manifest: &DatasetManifest) -> BuildSummary {
    BuildSummary::of(manifest)
}

pub(crate) fn prepare_empty_dir(out: &Path) -> Result<()> {
    match std::fs::read_dir(out) {
        Ok(mut it) => {
            if it.next().is_some() {
                return Err(Error::config(format!(
                    "output directory {} is not empty",
                    out.display()
                )));
            }
            Ok(())
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))
        }
        Err(e) => Err(Error::io(out, e)),
    }
}

fn discard_partial(out: &Path, items: &[WorkItem]) {
    for item in items {
        let _ = std::fs::remove_file(out.join(item.rel_path()));
    }
    for item in items {
        let class_dir = out.join(item.split.as_str()).join(item.label.class_dir());
        let _ = std::fs::remove_dir(class_dir);
    }
    for split in Split::ALL {
        let _ = std::fs::remove_dir(out.join(split.as_str()));
    }
    let _ = std::fs::remove_file(out.join(super::manifest::MANIFEST_FILE));
}

fn run_items(
    config: &DatasetConfig,
    resources: &Resources,
    items: &[WorkItem],
    out: &Path,
    jobs: usize,
) -> Result<Vec<ManifestEntry>> {
    for label in config.family.labels() {
        for split in Split::ALL {
            if config.count(split) > 0 {
                let dir = out.join(split.as_str()).join(label.class_dir());
                std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::config(format!("thread pool: {e}")))?;
    pool.install(|| {
        items
            .par_iter()
            .map(|item| build_item(config, resources, item, out))
            .collect()
    })
}

fn build_item(
    config: &DatasetConfig,
    resources: &Resources,
    item: &WorkItem,
    out: &Path,
) -> Result<ManifestEntry> {
    let rel = item.rel_path();
    let context = format!(
        "{} {} #{}",
        item.label.class_dir(),
        item.split.as_str(),
        item.index
    );
    let mut stream = derive_stream(config.master_seed, &item.stream_label());
    let geometry = generate_marks(config, resources, &item.label, &mut stream)
        .map_err(|e| e.with_context(&context))?;
    let image = draw_marks(config, resources, &geometry)?;
    let path: PathBuf = out.join(&rel);
    std::fs::write(&path, encode_png(&image)).map_err(|e| Error::io(&path, e))?;
    Ok(ManifestEntry {
        path: rel,
        label: item.label,
        split: item.split,
        index: item.index,
        geometry,
    })
}

/// Generate the marks of one image from its stream.
pub fn generate_marks(
    config: &DatasetConfig,
    resources: &Resources,
    label: &ClassLabel,
    stream: &mut RandomStream,
) -> Result<Vec<MarkRecord>> {
    let mask = &resources.mask;
    let gen = |kind, domain: &SampleDomain<'_>, stream: &mut RandomStream| {
        gen_primitive(
            kind,
            domain,
            stream,
            &config.line,
            &config.cluster,
            &config.dash,
            config.max_retries,
        )
    };
    match *label {
        ClassLabel::Basic3 { kind } => {
            let primitive = gen(kind, &SampleDomain::whole(mask), stream)?;
            Ok(vec![MarkRecord {
                color: config.style.color,
                rule: None,
                primitive,
            }])
        }
        ClassLabel::Regions36 { kind, region } => {
            let domain =
                SampleDomain::region(mask, &resources.partition, region).map_err(|_| {
                    Error::GenerationFailed {
                        context: format!("region {region}"),
                        reason: "region has no pixels".into(),
                    }
                })?;
            let primitive = gen(kind, &domain, stream)?;
            Ok(vec![MarkRecord {
                color: config.style.color,
                rule: None,
                primitive,
            }])
        }
        ClassLabel::Diagnoses { diagnosis } => {
            let scenario = config
                .scenario
                .as_ref()
                .ok_or_else(|| Error::config("the diagnoses family needs a scenario"))?;
            let mut marks = Vec::new();
            for (ri, rule) in scenario.rules(diagnosis).iter().enumerate() {
                let domain = match rule.region {
                    RegionSelector::Any => SampleDomain::whole(mask),
                    RegionSelector::Region(r) => {
                        SampleDomain::region(mask, &resources.partition, r).map_err(|e| {
                            Error::config(format!("{} rule {ri}: {e}", diagnosis.as_str()))
                        })?
                    }
                };
                let count = stream.range_inclusive(rule.count[0], rule.count[1]);
                for _ in 0..count {
                    let primitive = gen_primitive(
                        rule.kind,
                        &domain,
                        stream,
                        rule.line.as_ref().unwrap_or(&config.line),
                        rule.cluster.as_ref().unwrap_or(&config.cluster),
                        rule.dash.as_ref().unwrap_or(&config.dash),
                        config.max_retries,
                    )
                    .map_err(|e| e.with_context(format!("{} rule {ri}", diagnosis.as_str())))?;
                    marks.push(MarkRecord {
                        color: rule.color,
                        rule: Some(ri),
                        primitive,
                    });
                }
            }
            Ok(marks)
        }
    }
}

/// Render marks on a transparent layer, then place it over the template or
/// the background color.
pub fn draw_marks(
    config: &DatasetConfig,
    resources: &Resources,
    marks: &[MarkRecord],
) -> Result<Canvas> {
    let mut layer = Canvas::filled(config.width, config.height, TRANSPARENT);
    for mark in marks {
        render(
            &mut layer,
            &mark.primitive,
            &config.style.with_color(mark.color),
        );
    }
    let backdrop = match &resources.template {
        Some(t) => t.clone(),
        None => Canvas::filled(config.width, config.height, config.background),
    };
    composite_template(&layer, &backdrop)
}
