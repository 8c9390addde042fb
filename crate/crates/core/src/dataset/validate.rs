//! Independent re-checking of a dataset against its manifest.
//!
//! Labels are verified from stored construction geometry alone, without
//! looking at pixels: images are only checked for presence, decodability,
//! and size.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::Serialize;

use super::build::INCOMPLETE_MARKER;
use super::config::{DatasetConfig, Resources};
use super::label::{ClassLabel, Split};
use super::manifest::{DatasetManifest, ManifestEntry, MANIFEST_FILE};
use super::scenario::RegionSelector;
use crate::bodymap::SampleDomain;
use crate::error::{Error, Result};
use crate::primitives::{bound_violations, ClusterParams, LineParams, Primitive};
use crate::raster::decode_png;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    IncompleteBuild,
    DigestMismatch,
    DuplicatePath,
    Balance,
    MissingFile,
    CorruptImage,
    DimensionMismatch,
    LabelMismatch,
    RuleMismatch,
    Bounds,
    Containment,
    RegionMismatch,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::IncompleteBuild => "incomplete-build",
            ViolationKind::DigestMismatch => "digest-mismatch",
            ViolationKind::DuplicatePath => "duplicate-path",
            ViolationKind::Balance => "balance",
            ViolationKind::MissingFile => "missing-file",
            ViolationKind::CorruptImage => "corrupt-image",
            ViolationKind::DimensionMismatch => "dimension-mismatch",
            ViolationKind::LabelMismatch => "label-mismatch",
            ViolationKind::RuleMismatch => "rule-mismatch",
            ViolationKind::Bounds => "bounds",
            ViolationKind::Containment => "containment",
            ViolationKind::RegionMismatch => "region-mismatch",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One problem found by [`validate_dataset`]. `entry` is the manifest entry
/// index, absent for dataset-wide problems.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub entry: Option<usize>,
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.entry {
            Some(i) => write!(f, "entry {i}: {}: {}", self.kind, self.message),
            None => write!(f, "dataset: {}: {}", self.kind, self.message),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub entries_checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Groups messages so each entry reports each kind of problem at most once.
#[derive(Default)]
struct Collector {
    found: BTreeMap<(Option<usize>, ViolationKind), Vec<String>>,
}

impl Collector {
    fn push(&mut self, entry: Option<usize>, kind: ViolationKind, message: impl Into<String>) {
        self.found
            .entry((entry, kind))
            .or_default()
            .push(message.into());
    }

    fn finish(self, entries_checked: usize) -> ValidationReport {
        let violations = self
            .found
            .into_iter()
            .map(|((entry, kind), msgs)| Violation {
                entry,
                kind,
                message: msgs.join("; "),
            })
            .collect();
        ValidationReport {
            entries_checked,
            violations,
        }
    }
}

/// Check a dataset directory against its manifest.
///
/// Fails with an I/O or decode error when the manifest itself is missing or
/// unreadable, unless the directory carries the incomplete-build marker, in
/// which case that is reported as a violation.
pub fn validate_dataset(dir: &Path) -> Result<ValidationReport> {
    if !dir.is_dir() {
        return Err(Error::io(
            dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "dataset directory not found"),
        ));
    }
    let mut out = Collector::default();
    let incomplete = dir.join(INCOMPLETE_MARKER).exists();
    if incomplete {
        out.push(
            None,
            ViolationKind::IncompleteBuild,
            "the build did not finish",
        );
        if !dir.join(MANIFEST_FILE).exists() {
            return Ok(out.finish(0));
        }
    }
    let manifest = DatasetManifest::read(dir)?;
    let resources = manifest.config.resources(Some(dir))?;
    check_manifest(&manifest, &mut out);
    for (i, entry) in manifest.entries.iter().enumerate() {
        check_image(dir, &manifest.config, i, entry, &mut out);
        check_geometry(&manifest.config, &resources, i, entry, &mut out);
    }
    Ok(out.finish(manifest.entries.len()))
}

fn check_manifest(m: &DatasetManifest, out: &mut Collector) {
    let digest = m.config.digest();
    if digest != m.config_digest {
        out.push(
            None,
            ViolationKind::DigestMismatch,
            format!(
                "manifest says {}, config hashes to {digest}",
                m.config_digest
            ),
        );
    }
    if m.family != m.config.family || m.master_seed != m.config.master_seed {
        out.push(
            None,
            ViolationKind::DigestMismatch,
            "header disagrees with embedded config",
        );
    }
    let mut seen = HashSet::new();
    for (i, e) in m.entries.iter().enumerate() {
        if !seen.insert(e.path.as_str()) {
            out.push(
                Some(i),
                ViolationKind::DuplicatePath,
                format!("{} listed twice", e.path),
            );
        }
    }
    // Balance is counted per class folder, as folder-per-class loaders see it.
    let mut counts: HashMap<(&str, &str), u32> = HashMap::new();
    for e in &m.entries {
        let mut parts = e.path.split('/');
        if let (Some(split), Some(class_dir)) = (parts.next(), parts.next()) {
            *counts.entry((split, class_dir)).or_default() += 1;
        }
    }
    for label in m.family.labels() {
        for split in Split::ALL {
            let dir = label.class_dir();
            let got = counts
                .get(&(split.as_str(), dir.as_str()))
                .copied()
                .unwrap_or(0);
            let want = m.config.count(split);
            if got != want {
                out.push(
                    None,
                    ViolationKind::Balance,
                    format!(
                        "{} {}: {got} entries, expected {want}",
                        label.class_dir(),
                        split.as_str()
                    ),
                );
            }
        }
    }
}

fn check_image(
    dir: &Path,
    config: &DatasetConfig,
    i: usize,
    e: &ManifestEntry,
    out: &mut Collector,
) {
    let path = dir.join(&e.path);
    let bytes = match std::fs::read(&path) {
        Ok(b) => b,
        Err(err) => {
            out.push(
                Some(i),
                ViolationKind::MissingFile,
                format!("{}: {err}", e.path),
            );
            return;
        }
    };
    match decode_png(&bytes) {
        Ok(img) if img.width() != config.width || img.height() != config.height => out.push(
            Some(i),
            ViolationKind::DimensionMismatch,
            format!(
                "{} is {}x{}, expected {}x{}",
                e.path,
                img.width(),
                img.height(),
                config.width,
                config.height
            ),
        ),
        Ok(_) => {}
        Err(err) => out.push(
            Some(i),
            ViolationKind::CorruptImage,
            format!("{}: {err}", e.path),
        ),
    }
}

fn check_geometry(
    config: &DatasetConfig,
    res: &Resources,
    i: usize,
    e: &ManifestEntry,
    out: &mut Collector,
) {
    let whole = SampleDomain::whole(&res.mask);
    if e.label.family() != config.family {
        out.push(
            Some(i),
            ViolationKind::LabelMismatch,
            format!(
                "label family {} in a {} dataset",
                e.label.family(),
                config.family
            ),
        );
        return;
    }
    match e.label {
        ClassLabel::Basic3 { kind } | ClassLabel::Regions36 { kind, .. } => {
            if e.geometry.len() != 1 || e.geometry[0].primitive.kind() != kind {
                out.push(
                    Some(i),
                    ViolationKind::LabelMismatch,
                    format!("expected one {kind}, found {:?}", kinds(e)),
                );
            }
            for mark in &e.geometry {
                check_primitive(
                    &mark.primitive,
                    &config.line,
                    &config.cluster,
                    &whole,
                    i,
                    out,
                );
            }
            if let ClassLabel::Regions36 { region, .. } = e.label {
                for mark in &e.geometry {
                    let found = regions_of(&mark.primitive, res);
                    if found != [Some(region)] {
                        out.push(
                            Some(i),
                            ViolationKind::RegionMismatch,
                            format!("label region {region}, geometry lies in {found:?}"),
                        );
                    }
                }
            }
        }
        ClassLabel::Diagnoses { diagnosis } => {
            let Some(scenario) = &config.scenario else {
                out.push(
                    Some(i),
                    ViolationKind::RuleMismatch,
                    "config has no scenario",
                );
                return;
            };
            let rules = scenario.rules(diagnosis);
            let mut per_rule = vec![0u32; rules.len()];
            for mark in &e.geometry {
                let Some(rule) = mark.rule.and_then(|r| rules.get(r)) else {
                    out.push(
                        Some(i),
                        ViolationKind::RuleMismatch,
                        format!(
                            "mark refers to rule {:?} of {}",
                            mark.rule,
                            diagnosis.as_str()
                        ),
                    );
                    continue;
                };
                per_rule[mark.rule.unwrap()] += 1;
                if rule.kind != mark.primitive.kind() || rule.color != mark.color {
                    out.push(
                        Some(i),
                        ViolationKind::RuleMismatch,
                        format!(
                            "mark does not match the kind or color of rule {:?}",
                            mark.rule
                        ),
                    );
                }
                let domain = match rule.region {
                    RegionSelector::Any => Some(whole),
                    RegionSelector::Region(r) => {
                        SampleDomain::region(&res.mask, &res.partition, r).ok()
                    }
                };
                let Some(domain) = domain else {
                    out.push(
                        Some(i),
                        ViolationKind::Containment,
                        "rule region has no pixels",
                    );
                    continue;
                };
                check_primitive(
                    &mark.primitive,
                    rule.line.as_ref().unwrap_or(&config.line),
                    rule.cluster.as_ref().unwrap_or(&config.cluster),
                    &domain,
                    i,
                    out,
                );
            }
            for (ri, (rule, &n)) in rules.iter().zip(&per_rule).enumerate() {
                if n < rule.count[0] || n > rule.count[1] {
                    out.push(
                        Some(i),
                        ViolationKind::RuleMismatch,
                        format!("rule {ri} drew {n} marks, allowed {:?}", rule.count),
                    );
                }
            }
        }
    }
}

fn check_primitive(
    p: &Primitive,
    line: &LineParams,
    cluster: &ClusterParams,
    domain: &SampleDomain<'_>,
    i: usize,
    out: &mut Collector,
) {
    for msg in bound_violations(p, line, cluster) {
        out.push(Some(i), ViolationKind::Bounds, msg);
    }
    let outside = p
        .governing_points()
        .into_iter()
        .filter(|&q| !domain.contains(q))
        .count();
    if outside > 0 {
        out.push(
            Some(i),
            ViolationKind::Containment,
            format!("{outside} {} point(s) outside the domain", p.kind()),
        );
    }
}

/// Distinct regions touched by a primitive's governing points, in order of
/// first appearance; `None` marks points outside every region.
fn regions_of(p: &Primitive, res: &Resources) -> Vec<Option<u8>> {
    let mut found = Vec::new();
    for q in p.governing_points() {
        let r = res
            .mask
            .pixel_of(q.x, q.y)
            .and_then(|(x, y)| res.partition.region_at(x, y));
        if !found.contains(&r) {
            found.push(r);
        }
    }
    found
}

fn kinds(e: &ManifestEntry) -> Vec<String> {
    e.geometry
        .iter()
        .map(|m| m.primitive.kind().to_string())
        .collect()
}
