use std::collections::HashMap;
use std::path::Path;

use super::build::prepare_empty_dir;
use super::label::{ClassLabel, Split};
use super::manifest::DatasetManifest;
use crate::error::{Error, Result};

/// Keep the first `per_class_train` / `per_class_test` entries (by image
/// index) of every class.
///
/// Because each image has its own stream, the result is exactly the manifest
/// a fresh build with those counts would produce; its config and digest are
/// updated to say so.
pub fn extract_subset(
    manifest: &DatasetManifest,
    per_class_train: u32,
    per_class_test: u32,
) -> Result<DatasetManifest> {
    let want = |split| match split {
        Split::Train => per_class_train,
        Split::Test => per_class_test,
    };
    let mut indices: HashMap<(ClassLabel, Split), Vec<u32>> = HashMap::new();
    for e in &manifest.entries {
        indices.entry((e.label, e.split)).or_default().push(e.index);
    }
    // Smallest excluded index per class and split; `None` keeps everything.
    let mut cutoff = HashMap::new();
    for label in manifest.family.labels() {
        for split in Split::ALL {
            let mut idx = indices.remove(&(label, split)).unwrap_or_default();
            let k = want(split) as usize;
            if idx.len() < k {
                return Err(Error::config(format!(
                    "class {} has {} {} images, {k} requested",
                    label.class_dir(),
                    idx.len(),
                    split.as_str(),
                )));
            }
            idx.sort_unstable();
            cutoff.insert((label, split), idx.get(k).copied());
        }
    }
    let mut entries: Vec<_> = manifest
        .entries
        .iter()
        .filter(|e| {
            cutoff
                .get(&(e.label, e.split))
                .is_some_and(|c| c.map_or(true, |c| e.index < c))
        })
        .cloned()
        .collect();
    // Keep the build's (class, split, index) order.
    let order = manifest.family.labels();
    entries.sort_by_key(|e| (order.iter().position(|l| *l == e.label), e.split, e.index));
    let config = manifest
        .config
        .clone()
        .with_counts(per_class_train, per_class_test);
    Ok(DatasetManifest::new(config, entries))
}

/// Write a subset of the dataset in `input` to `output`, copying images.
pub fn write_subset(
    input: &Path,
    output: &Path,
    per_class_train: u32,
    per_class_test: u32,
) -> Result<DatasetManifest> {
    let manifest = DatasetManifest::read(input)?;
    let subset = extract_subset(&manifest, per_class_train, per_class_test)?;
    prepare_empty_dir(output)?;
    for entry in &subset.entries {
        let from = input.join(&entry.path);
        let to = output.join(&entry.path);
        if let Some(parent) = to.parent() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        std::fs::copy(&from, &to).map_err(|e| Error::io(&from, e))?;
    }
    subset.write(output)?;
    Ok(subset)
}
