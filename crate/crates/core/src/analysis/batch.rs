//! Batch robustness validation over a directory of scans.
//!
//! Each scan runs the full pipeline and is checked against three criteria:
//!
//! * C1: the ring is closed, the A. Comm. arcs above the ring baseline, both
//!   P. Comms dip below it, and the left and right ring extents agree within
//!   the configured tolerance.
//! * C2: the layout checker reports no violation.
//! * C3: every edge resolves to exactly one polyline per projection and that
//!   polyline is its start node followed by its own segments.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Settings;
use crate::layout::{check_layout, LayoutScene};
use crate::pipeline::{build_scene, load_forest, load_overrides, Overrides};
use crate::swc::SegmentForest;
use crate::vessel::{ArteryLabel, LabeledNetwork, Side};

/// Flattening resolution used for apex and nadir checks.
const SAMPLES: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CriterionResult {
    pub passed: bool,
    pub diagnostics: Vec<String>,
}

impl CriterionResult {
    fn from_diagnostics(diagnostics: Vec<String>) -> Self {
        Self {
            passed: diagnostics.is_empty(),
            diagnostics,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanResult {
    pub file: String,
    pub passed: bool,
    /// Set when the pipeline itself failed; the criteria are then unset.
    pub error: Option<String>,
    pub c1: Option<CriterionResult>,
    pub c2: Option<CriterionResult>,
    pub c3: Option<CriterionResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatchReport {
    pub total: usize,
    pub passed: usize,
    pub scans: Vec<ScanResult>,
}

impl BatchReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    /// One line per scan, then the `passed/total` tally.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for s in &self.scans {
            let mark = |c: &Option<CriterionResult>| match c {
                Some(c) if c.passed => "ok",
                Some(_) => "FAIL",
                None => "-",
            };
            out.push_str(&format!(
                "{} {} C1 {} C2 {} C3 {}",
                if s.passed { "PASS" } else { "FAIL" },
                s.file,
                mark(&s.c1),
                mark(&s.c2),
                mark(&s.c3)
            ));
            if let Some(e) = &s.error {
                out.push_str(&format!(" ({e})"));
            }
            out.push('\n');
            for c in [&s.c1, &s.c2, &s.c3].into_iter().flatten() {
                for d in &c.diagnostics {
                    out.push_str(&format!("    {d}\n"));
                }
            }
        }
        out.push_str(&format!("{}/{} pass\n", self.passed, self.total));
        out
    }
}

/// Validates every `*.swc` file in `dir`. A sibling `<stem>.labels` file is
/// used as label overrides. Per-file failures are recorded, never raised;
/// only an unreadable directory is an error.
pub fn validate_batch(dir: &Path, settings: &Settings) -> io::Result<BatchReport> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "swc"))
        .collect();
    files.sort();
    let mut scans: Vec<ScanResult> = files
        .par_iter()
        .map(|p| validate_file(p, settings))
        .collect();
    scans.sort_by(|a, b| a.file.cmp(&b.file));
    let passed = scans.iter().filter(|s| s.passed).count();
    Ok(BatchReport {
        total: scans.len(),
        passed,
        scans,
    })
}

fn failed(file: String, error: String) -> ScanResult {
    ScanResult {
        file,
        passed: false,
        error: Some(error),
        c1: None,
        c2: None,
        c3: None,
    }
}

fn validate_file(path: &Path, settings: &Settings) -> ScanResult {
    let file = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) => return failed(file, e.to_string()),
    };
    let forest = match load_forest(&bytes, settings) {
        Ok(f) => f,
        Err(e) => return failed(file, e.to_string()),
    };
    let overrides = match fs::read_to_string(path.with_extension("labels")) {
        Ok(text) => match load_overrides(&text) {
            Ok(o) => o,
            Err(e) => return failed(file, e.to_string()),
        },
        Err(_) => Overrides::new(),
    };
    validate_scan(&forest, &file, settings, &overrides)
}

/// Runs the pipeline on one parsed scan and checks C1 to C3.
pub fn validate_scan(
    forest: &SegmentForest,
    scan_id: &str,
    settings: &Settings,
    overrides: &Overrides,
) -> ScanResult {
    let (net, scene) = match build_scene(forest, scan_id, settings, overrides) {
        Ok(x) => x,
        Err(e) => return failed(scan_id.to_string(), e.to_string()),
    };
    let c1 = check_ring(&net, &scene, settings.ring_extent_tolerance);
    let c2 = CriterionResult::from_diagnostics(
        check_layout(&scene, &net)
            .into_iter()
            .map(|v| format!("{:?}: {}", v.kind, v.detail))
            .collect(),
    );
    let c3 = check_linkage(&net, &scene);
    ScanResult {
        file: scan_id.to_string(),
        passed: c1.passed && c2.passed && c3.passed,
        error: None,
        c1: Some(c1),
        c2: Some(c2),
        c3: Some(c3),
    }
}

/// C1.
pub fn check_ring(net: &LabeledNetwork, scene: &LayoutScene, tolerance: f64) -> CriterionResult {
    let mut d = Vec::new();
    let g = net.graph();
    let cycle = net.cow_cycle();
    if cycle.len() < 3 {
        d.push("ring has fewer than three members".to_string());
        return CriterionResult::from_diagnostics(d);
    }

    // topological and drawn closure: consecutive members share a node and
    // their drawn ends meet there
    for i in 0..cycle.len() {
        let (a, b) = (g.edge(cycle[i]), g.edge(cycle[(i + 1) % cycle.len()]));
        let shared = [a.start, a.end]
            .into_iter()
            .find(|n| *n == b.start || *n == b.end);
        let Some(n) = shared else {
            d.push(format!("ring edges {} and {} share no node", a.id, b.id));
            continue;
        };
        let Some(pos) = scene.node(n).map(|n| n.position) else {
            d.push(format!("ring node {n} not placed"));
            continue;
        };
        for e in [a.id, b.id] {
            let Some(p) = scene.edge_path(e) else {
                d.push(format!("ring edge {e} has no path"));
                continue;
            };
            let (s, t) = (
                p.path.first().unwrap().start(),
                p.path.last().unwrap().end(),
            );
            if s.distance(pos).min(t.distance(pos)) > 1e-9 {
                d.push(format!("ring edge {e} path does not reach node {n}"));
            }
        }
    }

    let baseline = scene.config.cow_baseline_y;
    let ys = |label: ArteryLabel| -> Vec<Vec<f64>> {
        cycle
            .iter()
            .filter(|e| net.label(**e) == Some(label))
            .filter_map(|e| scene.edge_path(*e))
            .map(|p| {
                p.path
                    .iter()
                    .flat_map(|c| c.flatten(SAMPLES))
                    .map(|q| q.y)
                    .collect()
            })
            .collect()
    };
    let acomm = ys(ArteryLabel::AComm);
    if acomm.is_empty()
        || !acomm
            .iter()
            .all(|v| v.iter().copied().fold(f64::INFINITY, f64::min) < baseline)
    {
        d.push("A. Comm. does not arc above the ring baseline".into());
    }
    for side in [Side::Left, Side::Right] {
        let pcomm = ys(ArteryLabel::PComm(side));
        if pcomm.is_empty()
            || !pcomm
                .iter()
                .all(|v| v.iter().copied().fold(f64::NEG_INFINITY, f64::max) > baseline)
        {
            d.push(format!(
                "P. Comm. {} does not dip below the ring baseline",
                side.suffix()
            ));
        }
    }

    let mid = scene.midline_x();
    let (mut left, mut right) = (0.0f64, 0.0f64);
    for &e in cycle {
        let edge = g.edge(e);
        for n in [edge.start, edge.end] {
            if let Some(p) = scene.node(n) {
                left = left.max(mid - p.position.x);
                right = right.max(p.position.x - mid);
            }
        }
    }
    let widest = left.max(right);
    if widest <= 0.0 || (left - right).abs() / widest > tolerance {
        d.push(format!(
            "ring extents differ: left {left:.3}, right {right:.3}, tolerance {tolerance}"
        ));
    }
    CriterionResult::from_diagnostics(d)
}

/// C3. The expected polyline is rebuilt from the forest records directly.
pub fn check_linkage(net: &LabeledNetwork, scene: &LayoutScene) -> CriterionResult {
    let mut d = Vec::new();
    let forest = net.graph().forest();
    let views: [(
        &str,
        &[crate::layout::ProjectedEdge],
        fn([f64; 3]) -> [f64; 2],
    ); 3] = [
        ("front", &scene.projections.front, |p| [p[0], p[1]]),
        ("top", &scene.projections.top, |p| [p[0], p[2]]),
        ("side", &scene.projections.side, |p| [p[2], p[1]]),
    ];
    for e in &scene.edge_paths {
        let expected: Option<Vec<[f64; 3]>> = e.segment_ids.first().map(|&first| {
            let start = forest
                .record(first)
                .parent()
                .map(|p| forest.position(p))
                .unwrap_or(forest.position(first));
            std::iter::once(start)
                .chain(e.segment_ids.iter().map(|&s| forest.position(s)))
                .map(|v| v.to_array())
                .collect()
        });
        for (name, polylines, f) in &views {
            let matches: Vec<_> = polylines
                .iter()
                .filter(|p| p.edge_id == e.edge_id)
                .collect();
            match (&expected, matches.as_slice()) {
                (None, []) if e.dashed => {}
                (Some(pts), [one]) => {
                    let want: Vec<[f64; 2]> = pts.iter().map(|p| f(*p)).collect();
                    if one.polyline != want {
                        d.push(format!(
                            "edge {} {name} polyline does not match its segments",
                            e.edge_id
                        ));
                    }
                }
                (_, m) => d.push(format!(
                    "edge {} has {} {name} polylines (dashed: {})",
                    e.edge_id,
                    m.len(),
                    e.dashed
                )),
            }
        }
    }
    for (name, polylines, _) in &views {
        for p in polylines.iter() {
            if scene.edge_path(p.edge_id).is_none() {
                d.push(format!("{name} polyline for unknown edge {}", p.edge_id));
            }
        }
    }
    CriterionResult::from_diagnostics(d)
}
