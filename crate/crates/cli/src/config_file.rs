//! The `--config FILE` format: every [`DatasetConfig`] field, all optional,
//! plus the output directory. Unknown keys are rejected.
//!
//! Defaults for omitted fields are those of [`DatasetConfig::new`]:
//! seed 0, 1000/100 images per class (50/10 for diagnoses), a 1000x800
//! canvas inset by 40 px, a 3x4 grid, lines within 200 px with control
//! points within 30 px, clusters of 3 to 20 points with 20 px steps,
//! 3 px strokes and points, dashes of 12 on / 8 off, black marks on white,
//! and the bundled scenario for diagnoses.

use std::path::{Path, PathBuf};

use bodymap_synth::dataset::{DatasetConfig, Family, MaskSource, PartitionSpec, ScenarioSpec};
use bodymap_synth::primitives::{ClusterParams, LineParams};
use bodymap_synth::raster::{DashPattern, Rgba, StrokeStyle};
use bodymap_synth::{Error, Result};
use serde::Deserialize;

/// A scenario given inline or as a path to a scenario JSON file.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ScenarioRef {
    Path(PathBuf),
    Inline(ScenarioSpec),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub out: Option<PathBuf>,
    pub family: Option<Family>,
    pub master_seed: Option<u64>,
    pub images_per_class_train: Option<u32>,
    pub images_per_class_test: Option<u32>,
    pub width: Option<u32>,
    pub height: Option<u32>,
    pub mask: Option<MaskSource>,
    pub partition: Option<PartitionSpec>,
    pub line: Option<LineParams>,
    pub cluster: Option<ClusterParams>,
    pub dash: Option<DashPattern>,
    pub style: Option<StrokeStyle>,
    pub background: Option<Rgba>,
    pub template: Option<PathBuf>,
    pub scenario: Option<ScenarioRef>,
    pub max_retries: Option<usize>,
}

impl ConfigFile {
    /// Parse a config file. Relative paths inside it are resolved against
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut file: ConfigFile = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(p) = file.out.as_mut() {
            rebase(p);
        }
        if let Some(p) = file.template.as_mut() {
            rebase(p);
        }
        if let Some(MaskSource::File { path }) = file.mask.as_mut() {
            rebase(path);
        }
        if let Some(PartitionSpec::Map { path }) = file.partition.as_mut() {
            rebase(path);
        }
        if let Some(ScenarioRef::Path(p)) = file.scenario.as_mut() {
            rebase(p);
        }
        Ok(file)
    }

    /// Layer this file over the defaults for `family`.
    pub fn apply(self, family: Family) -> Result<DatasetConfig> {
        if let Some(f) = self.family {
            if f != family {
                return Err(Error::Config(format!(
                    "config file is for {f}, command asks for {family}"
                )));
            }
        }
        let mut c = DatasetConfig::new(family, self.master_seed.unwrap_or(0));
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { c.$field = v; })*
            };
        }
        take!(
            images_per_class_train,
            images_per_class_test,
            width,
            height,
            mask,
            partition,
            line,
            cluster,
            dash,
            style,
            background,
            max_retries
        );
        if self.template.is_some() {
            c.template = self.template;
        }
        if let Some(s) = self.scenario {
            c.scenario = Some(resolve_scenario(s)?);
        }
        Ok(c)
    }
}

pub fn resolve_scenario(s: ScenarioRef) -> Result<ScenarioSpec> {
    match s {
        ScenarioRef::Path(p) => ScenarioSpec::load(p),
        ScenarioRef::Inline(spec) => Ok(spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let c = ConfigFile::default().apply(Family::Basic3).unwrap();
        assert_eq!(c, DatasetConfig::new(Family::Basic3, 0));
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = serde_json::from_str::<ConfigFile>(r#"{"seed": 3}"#).unwrap_err();
        assert!(err.to_string().contains("unknown field"));
    }

    #[test]
    fn fields_override_defaults() {
        let file: ConfigFile = serde_json::from_str(
            r#"{"master_seed": 9, "width": 300, "height": 200,
                "line": {"endpoint_radius": 50, "control_deviation": 5},
                "partition": {"grid": {"rows": 2, "cols": 6}}}"#,
        )
        .unwrap();
        let c = file.apply(Family::Regions36).unwrap();
        assert_eq!((c.master_seed, c.width, c.height), (9, 300, 200));
        assert_eq!(c.line.endpoint_radius, 50.0);
        assert_eq!(c.partition, PartitionSpec::Grid { rows: 2, cols: 6 });
        assert_eq!(c.images_per_class_train, 1000);
    }

    #[test]
    fn book_example_parses() {
        let book = include_str!("../../../book/src/cli.md");
        let start = book.find("```json\n").unwrap() + "```json\n".len();
        let len = book[start..].find("```").unwrap();
        let file: ConfigFile = serde_json::from_str(&book[start..start + len]).unwrap();
        let c = file.apply(Family::Basic3).unwrap();
        assert_eq!(c.line.endpoint_radius, 150.0);
        assert_eq!(c.style.width, 2.0);
    }

    #[test]
    fn family_conflict_is_config_error() {
        let file: ConfigFile = serde_json::from_str(r#"{"family": "diagnoses"}"#).unwrap();
        assert!(matches!(file.apply(Family::Basic3), Err(Error::Config(_))));
    }
}
