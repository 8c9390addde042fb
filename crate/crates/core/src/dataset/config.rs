use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::label::Family;
use super::scenario::ScenarioSpec;
use crate::bodymap::{BodyMask, RegionPartition, DEFAULT_HEIGHT, DEFAULT_MARGIN, DEFAULT_WIDTH};
use crate::error::{Error, Result};
use crate::primitives::{ClusterParams, LineParams, DEFAULT_MAX_RETRIES};
use crate::raster::{read_png, Canvas, DashPattern, Rgba, StrokeStyle, WHITE};

/// Source of the drawable-area mask.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MaskSource {
    /// The canvas inset by `margin` pixels on every side.
    Inset { margin: u32 },
    /// A PNG thresholded at luminance 127.
    File { path: PathBuf },
}

/// How the mask is divided into twelve regions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PartitionSpec {
    Grid {
        rows: u32,
        cols: u32,
    },
    /// A region-map PNG using the gray levels `10, 30, ..., 230`.
    Map {
        path: PathBuf,
    },
}

/// Everything that determines a dataset's bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub family: Family,
    pub master_seed: u64,
    pub images_per_class_train: u32,
    pub images_per_class_test: u32,
    pub width: u32,
    pub height: u32,
    pub mask: MaskSource,
    pub partition: PartitionSpec,
    pub line: LineParams,
    pub cluster: ClusterParams,
    pub dash: DashPattern,
    pub style: StrokeStyle,
    /// Canvas color under the marks when no template is given.
    pub background: Rgba,
    pub template: Option<PathBuf>,
    /// Drawing rules; only used by the diagnoses family.
    pub scenario: Option<ScenarioSpec>,
    pub max_retries: usize,
}

impl DatasetConfig {
    /// Defaults for `family`: 1000 train / 100 test images per class for the
    /// pre-training families, 50 / 10 for diagnoses.
    pub fn new(family: Family, master_seed: u64) -> Self {
        let (train, test) = match family {
            Family::Basic3 | Family::Regions36 => (1000, 100),
            Family::Diagnoses => (50, 10),
        };
        DatasetConfig {
            family,
            master_seed,
            images_per_class_train: train,
            images_per_class_test: test,
            width: DEFAULT_WIDTH,
            height: DEFAULT_HEIGHT,
            mask: MaskSource::Inset {
                margin: DEFAULT_MARGIN,
            },
            partition: PartitionSpec::Grid { rows: 3, cols: 4 },
            line: LineParams::default(),
            cluster: ClusterParams::default(),
            dash: DashPattern::default(),
            style: StrokeStyle::default(),
            background: WHITE,
            template: None,
            scenario: (family == Family::Diagnoses).then(ScenarioSpec::default_scenario),
            max_retries: DEFAULT_MAX_RETRIES,
        }
    }

    pub fn with_counts(mut self, train: u32, test: u32) -> Self {
        self.images_per_class_train = train;
        self.images_per_class_test = test;
        self
    }

    pub fn with_size(mut self, width: u32, height: u32) -> Self {
        self.width = width;
        self.height = height;
        self
    }

    pub fn count(&self, split: super::Split) -> u32 {
        match split {
            super::Split::Train => self.images_per_class_train,
            super::Split::Test => self.images_per_class_test,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::config(format!(
                "canvas size {}x{} is empty",
                self.width, self.height
            )));
        }
        if self.max_retries == 0 {
            return Err(Error::config("max_retries must be at least 1"));
        }
        self.line.validate()?;
        self.cluster.validate()?;
        self.dash.validate()?;
        self.style.validate()?;
        match (&self.family, &self.scenario) {
            (Family::Diagnoses, Some(s)) => s.validate()?,
            (Family::Diagnoses, None) => {
                return Err(Error::config("the diagnoses family needs a scenario"))
            }
            _ => {}
        }
        Ok(())
    }

    /// Lowercase hex SHA-256 of the compact JSON serialization (fields in
    /// declaration order, numbers in shortest round-trip form).
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    /// Load the mask, partition, and template. Relative paths are tried as
    /// given, then under `base` when one is supplied.
    pub fn resources(&self, base: Option<&Path>) -> Result<Resources> {
        let resolve = |p: &Path| -> PathBuf {
            match base {
                Some(b) if p.is_relative() && !p.exists() => b.join(p),
                _ => p.to_path_buf(),
            }
        };
        let mask = match &self.mask {
            MaskSource::Inset { margin } => {
                BodyMask::default_mask(self.width, self.height, *margin)?
            }
            MaskSource::File { path } => BodyMask::load(resolve(path))?,
        };
        if mask.width() != self.width || mask.height() != self.height {
            return Err(Error::config(format!(
                "mask is {}x{}, canvas is {}x{}",
                mask.width(),
                mask.height(),
                self.width,
                self.height
            )));
        }
        let partition = match &self.partition {
            PartitionSpec::Grid { rows, cols } => RegionPartition::grid(&mask, *rows, *cols)?,
            PartitionSpec::Map { path } => RegionPartition::load_region_map(&mask, resolve(path))?,
        };
        let template = self
            .template
            .as_deref()
            .map(|p| read_png(&resolve(p)))
            .transpose()?;
        if let Some(t) = &template {
            if t.width() != self.width || t.height() != self.height {
                return Err(Error::config(format!(
                    "template is {}x{}, canvas is {}x{}",
                    t.width(),
                    t.height(),
                    self.width,
                    self.height
                )));
            }
        }
        Ok(Resources {
            mask,
            partition,
            template,
        })
    }
}

/// Loaded spatial inputs of a dataset.
#[derive(Clone, Debug)]
pub struct Resources {
    pub mask: BodyMask,
    pub partition: RegionPartition,
    pub template: Option<Canvas>,
}
