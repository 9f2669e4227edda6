use std::fs;

use cerebro_core::analysis::{generate_synthetic_scan, validate_batch, SynthParams};
use cerebro_core::config::Settings;
use cerebro_core::swc::serialize_swc;

fn write_corpus(dir: &std::path::Path, seeds: std::ops::Range<u64>) {
    for seed in seeds {
        let scan = generate_synthetic_scan(seed, &SynthParams::default());
        fs::write(
            dir.join(format!("scan_{seed:03}.swc")),
            serialize_swc(&scan.forest),
        )
        .unwrap();
    }
}

#[test]
fn synthetic_corpus_passes_all_criteria() {
    let dir = tempfile::tempdir().unwrap();
    write_corpus(dir.path(), 0..25);
    let report = validate_batch(dir.path(), &Settings::default()).unwrap();
    assert_eq!(report.total, 25);
    assert!(report.all_passed(), "{}", report.summary());
    assert!(report.summary().ends_with("25/25 pass\n"));
}

#[test]
fn broken_file_is_isolated() {
    let dir = tempfile::tempdir().unwrap();
    write_corpus(dir.path(), 0..3);
    fs::write(
        dir.path().join("broken.swc"),
        "1 2 0 0 0 1.0 -1\n2 2 0 0 1 1.0 99\n",
    )
    .unwrap();
    let report = validate_batch(dir.path(), &Settings::default()).unwrap();
    assert_eq!((report.total, report.passed), (4, 3));
    let broken = report
        .scans
        .iter()
        .find(|s| s.file == "broken.swc")
        .unwrap();
    assert!(broken
        .error
        .as_deref()
        .unwrap()
        .contains("missing parent 99"));
}

#[test]
fn result_set_independent_of_file_names() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    write_corpus(a.path(), 0..6);
    // same scans under names that sort in reverse
    for seed in 0..6u64 {
        let scan = generate_synthetic_scan(seed, &SynthParams::default());
        fs::write(
            b.path().join(format!("{}_scan_{seed:03}.swc", 9 - seed)),
            serialize_swc(&scan.forest),
        )
        .unwrap();
    }
    let ra = validate_batch(a.path(), &Settings::default()).unwrap();
    let rb = validate_batch(b.path(), &Settings::default()).unwrap();
    let strip = |r: &cerebro_core::analysis::BatchReport| {
        let mut v: Vec<_> = r
            .scans
            .iter()
            .map(|s| {
                (
                    s.file.rsplit("scan_").next().unwrap().to_string(),
                    s.passed,
                    s.c1.clone(),
                    s.c2.clone(),
                    s.c3.clone(),
                )
            })
            .collect();
        v.sort_by(|x, y| x.0.cmp(&y.0));
        v
    };
    assert_eq!(strip(&ra), strip(&rb));
}
