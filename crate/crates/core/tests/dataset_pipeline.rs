use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use bodymap_synth::dataset::{
    build_dataset, extract_subset, validate_dataset, write_subset, ClassLabel, DatasetConfig,
    DatasetManifest, Diagnosis, Family, ScenarioSpec, Split, ViolationKind, INCOMPLETE_MARKER,
    MANIFEST_FILE,
};
use bodymap_synth::geometry::Point;
use bodymap_synth::primitives::{Primitive, PrimitiveKind};
use bodymap_synth::raster::{read_png, WHITE};
use bodymap_synth::Error;
use tempfile::TempDir;

fn build(config: &DatasetConfig, jobs: usize) -> (TempDir, DatasetManifest) {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("ds");
    let m = build_dataset(config, &out, jobs).unwrap();
    (dir, m)
}

fn root(dir: &TempDir) -> std::path::PathBuf {
    dir.path().join("ds")
}

fn small(family: Family, train: u32, test: u32) -> DatasetConfig {
    DatasetConfig::new(family, 42).with_counts(train, test)
}

/// Grid region of a point on the default 1000x800 canvas with a 40 px inset.
fn grid_region(p: Point) -> Option<u8> {
    let (x, y) = (p.x.floor(), p.y.floor());
    if !(40.0..960.0).contains(&x) || !(40.0..760.0).contains(&y) {
        return None;
    }
    let col = ((x - 40.0) / 230.0) as u8;
    let row = ((y - 40.0) / 240.0) as u8;
    Some(row * 4 + col)
}

fn same_tree(a: &Path, b: &Path, m: &DatasetManifest) {
    assert_eq!(
        std::fs::read(a.join(MANIFEST_FILE)).unwrap(),
        std::fs::read(b.join(MANIFEST_FILE)).unwrap()
    );
    for e in &m.entries {
        let (x, y) = (
            read_png(&a.join(&e.path)).unwrap(),
            read_png(&b.join(&e.path)).unwrap(),
        );
        assert_eq!(x, y, "{}", e.path);
        assert_eq!(
            std::fs::read(a.join(&e.path)).unwrap(),
            std::fs::read(b.join(&e.path)).unwrap()
        );
    }
}

#[test]
fn builds_are_deterministic_across_threads() {
    let config = small(Family::Basic3, 4, 2);
    let (a, m) = build(&config, 1);
    let (b, m2) = build(&config, 8);
    assert_eq!(m, m2);
    same_tree(&root(&a), &root(&b), &m);
}

#[test]
fn different_seeds_differ() {
    let (_, a) = build(&small(Family::Basic3, 2, 1), 2);
    let mut c = small(Family::Basic3, 2, 1);
    c.master_seed = 43;
    let (_, b) = build(&c, 2);
    assert_ne!(a.entries[0].geometry, b.entries[0].geometry);
}

#[test]
fn layout_and_balance() {
    let (dir, m) = build(&small(Family::Basic3, 3, 2), 4);
    assert_eq!(m.count(Split::Train), 9);
    assert_eq!(m.count(Split::Test), 6);
    let mut per_class: BTreeMap<(String, Split), u32> = BTreeMap::new();
    for e in &m.entries {
        *per_class.entry((e.label.class_dir(), e.split)).or_default() += 1;
        let expect = format!(
            "{}/{}/{:05}.png",
            e.split.as_str(),
            e.label.class_dir(),
            e.index
        );
        assert_eq!(e.path, expect);
        assert!(root(&dir).join(&e.path).is_file());
    }
    assert_eq!(per_class.len(), 6);
    assert!(per_class
        .iter()
        .all(|((_, s), &n)| n == if *s == Split::Train { 3 } else { 2 }));
    let dirs: BTreeSet<_> = std::fs::read_dir(root(&dir).join("train"))
        .unwrap()
        .map(|d| d.unwrap().file_name().into_string().unwrap())
        .collect();
    assert_eq!(
        dirs,
        ["dashed_line", "line", "point_cluster"]
            .map(String::from)
            .into()
    );
    assert!(!root(&dir).join(INCOMPLETE_MARKER).exists());
}

#[test]
fn train_images_do_not_depend_on_test_count() {
    let (_, a) = build(&small(Family::Basic3, 2, 1), 2);
    let (_, b) = build(&small(Family::Basic3, 2, 5), 2);
    let train = |m: &DatasetManifest| {
        m.entries
            .iter()
            .filter(|e| e.split == Split::Train)
            .cloned()
            .collect::<Vec<_>>()
    };
    assert_eq!(train(&a), train(&b));
}

#[test]
fn regions36_labels_match_independent_grid() {
    let (dir, m) = build(&small(Family::Regions36, 2, 1), 8);
    let labels: BTreeSet<String> = m.entries.iter().map(|e| e.label.class_dir()).collect();
    assert_eq!(labels.len(), 36);
    for e in &m.entries {
        let ClassLabel::Regions36 { kind, region } = e.label else {
            panic!("wrong family")
        };
        assert_eq!(e.geometry.len(), 1);
        let prim = &e.geometry[0].primitive;
        assert_eq!(prim.kind(), kind);
        let found: BTreeSet<_> = prim
            .governing_points()
            .into_iter()
            .map(grid_region)
            .collect();
        assert_eq!(found, BTreeSet::from([Some(region)]), "{}", e.path);
    }
    assert!(validate_dataset(&root(&dir)).unwrap().is_clean());
}

#[test]
fn default_diagnoses_shape_and_subset() {
    let config = DatasetConfig::new(Family::Diagnoses, 42).with_size(400, 320);
    assert_eq!(
        (config.images_per_class_train, config.images_per_class_test),
        (50, 10)
    );
    let (dir, m) = build(&config, 8);
    assert_eq!(m.count(Split::Train), 250);
    assert_eq!(m.count(Split::Test), 50);

    let sub = extract_subset(&m, 5, 4).unwrap();
    assert_eq!((sub.count(Split::Train), sub.count(Split::Test)), (25, 20));
    for e in &sub.entries {
        let limit = if e.split == Split::Train { 5 } else { 4 };
        assert!(e.index < limit);
    }
    let identity = extract_subset(&m, 50, 10).unwrap();
    assert_eq!(identity, m);
    assert!(matches!(extract_subset(&m, 60, 10), Err(Error::Config(_))));

    // A subset equals a fresh build with the smaller counts.
    let (fresh_dir, fresh) = build(&config.clone().with_counts(5, 4), 2);
    assert_eq!(sub, fresh);
    let out = dir.path().join("subset");
    write_subset(&root(&dir), &out, 5, 4).unwrap();
    same_tree(&out, &root(&fresh_dir), &fresh);
    assert!(validate_dataset(&out).unwrap().is_clean());
}

#[test]
fn pelvic_contusion_always_has_red_mark_in_pelvic_region() {
    let config = DatasetConfig::new(Family::Diagnoses, 9).with_counts(20, 5);
    let (dir, m) = build(&config, 8);
    let mut seen = 0;
    for e in &m.entries {
        if e.label
            != (ClassLabel::Diagnoses {
                diagnosis: Diagnosis::PelvicContusion,
            })
        {
            continue;
        }
        seen += 1;
        let red: Vec<_> = e
            .geometry
            .iter()
            .filter(|g| g.color == [255, 0, 0, 255])
            .collect();
        assert!(!red.is_empty() && red.len() <= 3);
        for g in red {
            assert_eq!(g.primitive.kind(), PrimitiveKind::PointCluster);
            assert!(g
                .primitive
                .governing_points()
                .into_iter()
                .all(|p| grid_region(p) == Some(3)));
        }
    }
    assert_eq!(seen, 25);
    assert!(validate_dataset(&root(&dir)).unwrap().is_clean());
}

#[test]
fn empty_scenario_gives_blank_images() {
    let mut scenario = ScenarioSpec::default_scenario();
    for rules in scenario.diagnoses.values_mut() {
        for r in rules {
            r.count = [0, 0];
        }
    }
    let mut config = DatasetConfig::new(Family::Diagnoses, 1)
        .with_counts(2, 1)
        .with_size(120, 100);
    config.scenario = Some(scenario);
    let (dir, m) = build(&config, 2);
    for e in &m.entries {
        assert!(e.geometry.is_empty());
        let img = read_png(&root(&dir).join(&e.path)).unwrap();
        assert!(img.pixels().all(|p| p == WHITE));
    }
}

#[test]
fn validator_flags_exactly_the_injected_fault() {
    // Swapped label: one regions36 entry claims a neighbouring region.
    let (dir, mut m) = build(&small(Family::Regions36, 2, 1), 8);
    let ds = root(&dir);
    let ClassLabel::Regions36 { kind, region } = m.entries[7].label else {
        unreachable!()
    };
    m.entries[7].label = ClassLabel::Regions36 {
        kind,
        region: (region + 1) % 12,
    };
    m.write(&ds).unwrap();
    let r = validate_dataset(&ds).unwrap();
    assert_eq!(r.violations.len(), 1, "{:?}", r.violations);
    assert_eq!(r.violations[0].kind, ViolationKind::RegionMismatch);
    assert_eq!(r.violations[0].entry, Some(7));

    // Deleted file.
    let (dir, m) = build(&small(Family::Basic3, 2, 1), 4);
    let ds = root(&dir);
    std::fs::remove_file(ds.join(&m.entries[4].path)).unwrap();
    let r = validate_dataset(&ds).unwrap();
    assert_eq!(r.violations.len(), 1, "{:?}", r.violations);
    assert_eq!(r.violations[0].kind, ViolationKind::MissingFile);
    assert_eq!(r.violations[0].entry, Some(4));

    // Edited geometry: push one cluster point just past the step radius.
    let (dir, mut m) = build(&small(Family::Basic3, 2, 1), 4);
    let ds = root(&dir);
    let i = m
        .entries
        .iter()
        .position(|e| e.geometry[0].primitive.kind() == PrimitiveKind::PointCluster)
        .unwrap();
    let Primitive::PointCluster { points, .. } = &mut m.entries[i].geometry[0].primitive else {
        unreachable!()
    };
    let a = points[0];
    let centre = Point::new(500.0, 400.0);
    // 20.5 px from the first point, towards the centre so it stays in the mask.
    let moved = a + (centre - a) * (20.5 / a.distance(centre));
    points[1] = moved;
    m.write(&ds).unwrap();
    let r = validate_dataset(&ds).unwrap();
    assert_eq!(r.violations.len(), 1, "{:?}", r.violations);
    assert_eq!(r.violations[0].kind, ViolationKind::Bounds);
    assert_eq!(r.violations[0].entry, Some(i));
}

#[test]
fn validator_reports_other_faults() {
    let (dir, m) = build(&small(Family::Basic3, 1, 1), 2);
    let ds = root(&dir);
    std::fs::write(ds.join(&m.entries[0].path), b"not a png").unwrap();
    std::fs::write(ds.join(INCOMPLETE_MARKER), b"").unwrap();
    let r = validate_dataset(&ds).unwrap();
    assert_eq!(r.count(ViolationKind::CorruptImage), 1);
    assert_eq!(r.count(ViolationKind::IncompleteBuild), 1);

    let mut tampered = m.clone();
    tampered.config.master_seed += 1;
    tampered.write(&ds).unwrap();
    assert_eq!(
        validate_dataset(&ds)
            .unwrap()
            .count(ViolationKind::DigestMismatch),
        1
    );

    assert!(validate_dataset(&dir.path().join("nope")).is_err());
    std::fs::remove_file(ds.join(MANIFEST_FILE)).unwrap();
    std::fs::remove_file(ds.join(INCOMPLETE_MARKER)).unwrap();
    assert!(validate_dataset(&ds).is_err());
}

#[test]
fn failed_build_leaves_only_the_marker() {
    let mask_dir = TempDir::new().unwrap();
    let mask_path = mask_dir.path().join("mask.png");
    let mut canvas = bodymap_synth::raster::Canvas::filled(60, 50, [0, 0, 0, 255]);
    // Two isolated pixels: the grid fits, but no line can.
    canvas.set(5, 5, WHITE);
    canvas.set(50, 40, WHITE);
    bodymap_synth::raster::write_png(&mask_path, &canvas).unwrap();

    let mut config = small(Family::Basic3, 2, 1).with_size(60, 50);
    config.mask = bodymap_synth::dataset::MaskSource::File { path: mask_path };
    config.max_retries = 3;
    let out = mask_dir.path().join("ds");
    let err = build_dataset(&config, &out, 2).unwrap_err();
    assert!(matches!(err, Error::GenerationFailed { .. }), "{err}");
    let left: Vec<_> = std::fs::read_dir(&out)
        .unwrap()
        .map(|d| d.unwrap().file_name().into_string().unwrap())
        .collect();
    assert_eq!(left, vec![INCOMPLETE_MARKER.to_string()]);
    let r = validate_dataset(&out).unwrap();
    assert_eq!(r.count(ViolationKind::IncompleteBuild), 1);
}

#[test]
fn refuses_non_empty_output() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("keep.txt"), b"x").unwrap();
    let err = build_dataset(&small(Family::Basic3, 1, 1), dir.path(), 1).unwrap_err();
    assert!(matches!(err, Error::Config(_)), "{err}");
    assert!(dir.path().join("keep.txt").exists());
}

#[test]
fn manifest_schema_keys() {
    let (dir, _) = build(&small(Family::Regions36, 1, 1), 4);
    let text = std::fs::read_to_string(root(&dir).join(MANIFEST_FILE)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in [
        "version",
        "family",
        "config_digest",
        "master_seed",
        "entries",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["version"], 1);
    assert_eq!(v["family"], "regions36");
    assert_eq!(v["config_digest"].as_str().unwrap().len(), 64);
    let e = &v["entries"][0];
    for key in ["path", "label", "split", "index", "geometry"] {
        assert!(e.get(key).is_some(), "missing entry key {key}");
    }
    assert_eq!(e["split"], "train");
    assert_eq!(e["label"]["family"], "regions36");
    assert!(e["label"]["region"].is_u64());
    assert!(e["geometry"][0]["primitive"]["kind"].is_string());
    assert!(text.ends_with('\n'));
}
