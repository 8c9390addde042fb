//! Dataset families, manifests, subsetting, and validation.
//!
//! Layout on disk:
//!
//! ```text
//! <root>/manifest.json
//! <root>/<split>/<class_dir>/<index:05>.png
//! ```

mod build;
mod config;
mod label;
mod manifest;
mod scenario;
mod subset;
mod validate;

pub use build::{
    build_basic3, build_dataset, build_diagnoses, build_regions36, draw_marks, generate_marks,
    summarize, BuildSummary, INCOMPLETE_MARKER,
};
pub use config::{DatasetConfig, MaskSource, PartitionSpec, Resources};
pub use label::{ClassLabel, Diagnosis, Family, Split};
pub use manifest::{DatasetManifest, ManifestEntry, MarkRecord, MANIFEST_FILE, MANIFEST_VERSION};
pub use scenario::{RegionSelector, ScenarioRule, ScenarioSpec};
pub use subset::{extract_subset, write_subset};
pub use validate::{validate_dataset, ValidationReport, Violation, ViolationKind};
