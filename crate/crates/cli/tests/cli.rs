use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cerebro_core::analysis::{generate_synthetic_scan, SynthParams};
use cerebro_core::swc::serialize_swc;
use cerebro_core::vessel::{classify_arteries, contract_chains, ArteryLabel, ClassifyConfig, Side};

fn cerebro(args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cerebro"));
    for (k, _) in std::env::vars() {
        if k.to_ascii_uppercase().starts_with("CEREBRO_") {
            cmd.env_remove(k);
        }
    }
    cmd.args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn scan_file(dir: &Path, seed: u64) -> PathBuf {
    let scan = generate_synthetic_scan(seed, &SynthParams::default());
    write(
        dir,
        &format!("scan_{seed}.swc"),
        &serialize_swc(&scan.forest),
    )
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_is_deterministic() {
    let a = cerebro(&["gen", "--seed", "5"]);
    let b = cerebro(&["gen", "--seed", "5"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, cerebro(&["gen", "--seed", "6"]).stdout);
    let expected = serialize_swc(&generate_synthetic_scan(5, &SynthParams::default()).forest);
    assert_eq!(stdout(&a), expected);
}

#[test]
fn validate_reports_the_synthetic_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let out = cerebro(&[
        "gen",
        "--seed",
        "0",
        "--count",
        "25",
        "--out-dir",
        s(&corpus),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = dir.path().join("report.json");
    let out = cerebro(&["validate", s(&corpus), "--out", s(&report)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).ends_with("25/25 pass\n"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(doc["passed"], 25);

    write(&corpus, "broken.swc", "1 1 0 0 0 1 -1\n2 1 0 1 0 1 7\n");
    let out = cerebro(&["validate", s(&corpus)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("25/26 pass\n"), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["total"], 26);
}

#[test]
fn layout_render_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let swc = scan_file(dir.path(), 3);
    let out = cerebro(&["layout", s(&swc)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let scene = write(dir.path(), "scene.json", &stdout(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["version"], 1);
    assert_eq!(doc["scan_id"], "scan_3");
    let n_edges = doc["edges"].as_array().unwrap().len();

    let out = cerebro(&["render", s(&scene)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let svg = stdout(&out);
    assert!(svg.starts_with("<?xml") && svg.contains("<svg"));
    assert_eq!(svg.matches("data-edge-id=").count(), n_edges);
    assert_eq!(svg, stdout(&cerebro(&["render", s(&scene)])));

    // flow mode without flow values falls back with a warning
    let out = cerebro(&["render", s(&scene), "--color", "flow"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("no flow values"));
    assert_eq!(stdout(&out), svg);
}

#[test]
fn flow_blockage_whitens_downstream() {
    let dir = tempfile::tempdir().unwrap();
    let swc = scan_file(dir.path(), 4);
    let out = cerebro(&["flow", s(&swc), "--block", "MCA_R"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let edges = doc["edges"].as_array().unwrap();
    let mca: Vec<&serde_json::Value> = edges.iter().filter(|e| e["label"] == "MCA_R").collect();
    assert!(!mca.is_empty());
    assert!(mca.iter().all(|e| e["flow"] == 0.0));
    assert!(edges
        .iter()
        .any(|e| e["label"] == "MCA_L" && e["flow"].as_f64().unwrap() > 0.0));

    let scene = write(dir.path(), "flow.json", &stdout(&out));
    let out = cerebro(&["render", s(&scene), "--color", "flow"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).is_empty());
    assert!(stdout(&out).contains("#ffffff") || stdout(&out).contains("#FFFFFF"));

    let out = cerebro(&["flow", s(&swc), "--block", "e9999"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn inject_then_metrics_flags_the_lesion() {
    let dir = tempfile::tempdir().unwrap();
    let swc = scan_file(dir.path(), 7);
    let out = cerebro(&["inject", s(&swc), "--edge", "MCA_L", "--severity", "0.7"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let narrowed = write(dir.path(), "narrowed.swc", &stdout(&out));
    let out = cerebro(&["metrics", s(&narrowed)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let first = &doc["outliers"]["outliers"][0];
    assert_eq!(first["kind"], "narrowing");
    assert_eq!(doc["symmetry"]["pairs"].as_array().unwrap().len(), 3);

    for bad in ["1.2", "0", "-0.3"] {
        let out = cerebro(&["inject", s(&swc), "--edge", "MCA_L", "--severity", bad]);
        assert_eq!(code(&out), 64, "severity {bad}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&cerebro(&["frobnicate"])), 64);
    assert_eq!(code(&cerebro(&[])), 64);
    assert_eq!(code(&cerebro(&["--help"])), 0);
    assert_eq!(code(&cerebro(&["layout", "/nonexistent/scan.swc"])), 1);

    let dangling = write(
        dir.path(),
        "dangling.swc",
        "1 1 0 0 0 1 -1\n2 1 0 1 0 1 9\n",
    );
    let out = cerebro(&["layout", s(&dangling)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    let swc = scan_file(dir.path(), 1);
    let scene = stdout(&cerebro(&["layout", s(&swc)]));
    let future = write(
        dir.path(),
        "v2.json",
        &scene.replacen("\"version\": 1", "\"version\": 2", 1),
    );
    assert_eq!(code(&cerebro(&["render", s(&future)])), 3);
    let junk = write(dir.path(), "junk.json", "{\"version\": 1}");
    assert_eq!(code(&cerebro(&["render", s(&junk)])), 1);
}

#[test]
fn overrides_rescue_a_failed_classification() {
    let dir = tempfile::tempdir().unwrap();
    let scan = generate_synthetic_scan(2, &SynthParams::default());
    let net =
        classify_arteries(&contract_chains(&scan.forest), &ClassifyConfig::default()).unwrap();
    let pcomm = net.edges_with_label(ArteryLabel::PComm(Side::Left))[0];
    let cut = scan
        .forest
        .without_subtree(net.edge(pcomm).segment_ids[0])
        .unwrap();
    let swc = write(dir.path(), "cut.swc", &serialize_swc(&cut));

    let out = cerebro(&["layout", s(&swc)]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    let labels: String = scan
        .truth
        .chains
        .iter()
        .filter(|(seg, _)| cut.get(*seg).is_some())
        .map(|(seg, l)| format!("s{seg} = {l}\n"))
        .collect();
    let labels = write(dir.path(), "cut.labels", &labels);
    let out = cerebro(&["layout", s(&swc), "--labels", s(&labels)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let dashed: Vec<&str> = doc["edges"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["dashed"] == true)
        .map(|e| e["label"].as_str().unwrap())
        .collect();
    assert!(
        dashed.contains(&"PComm_L") && dashed.contains(&"AComm"),
        "{dashed:?}"
    );
}

#[test]
fn settings_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let swc = scan_file(dir.path(), 0);
    let layer = |args: &[&str], env: Option<&str>| -> f64 {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_cerebro"));
        if let Some(v) = env {
            cmd.env("CEREBRO_LAYER_HEIGHT", v);
        }
        let out = cmd.args(args).output().unwrap();
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        doc["config"]["layerHeight"].as_f64().unwrap()
    };
    let file = write(dir.path(), "cerebro.conf", "# test\nlayer_height = 50\n");
    let base = ["layout", s(&swc)];
    let with_file = ["layout", s(&swc), "--config", s(&file)];
    let with_set = [
        "layout",
        s(&swc),
        "--config",
        s(&file),
        "--set",
        "layer_height=70",
    ];
    let default = layer(&base, None);
    assert_eq!(layer(&with_file, None), 50.0);
    assert_eq!(layer(&with_file, Some("60")), 60.0);
    assert_eq!(layer(&with_set, Some("60")), 70.0);
    assert_ne!(default, 50.0);

    let out = cerebro(&["layout", s(&swc), "--set", "no_such_key=1"]);
    assert_eq!(code(&out), 64);
    assert!(stderr(&out).contains("no_such_key"));
}
