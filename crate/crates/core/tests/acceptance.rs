//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cerebro_core::analysis::{
    detect_width_outliers, generate_synthetic_scan, inject_stenosis, mirror_lateral,
    validate_batch, SynthParams,
};
use cerebro_core::config::Settings;
use cerebro_core::flow::{compute_flow, FlowAssignment, HeightMode};
use cerebro_core::geom::{Point2, Vec3};
use cerebro_core::layout::{check_layout, order_subtrees, LayoutScene};
use cerebro_core::pipeline::{build_network, build_scene, Overrides};
use cerebro_core::render::{
    export_scene_json, import_scene_json, render_svg, ColorScheme, SvgOptions,
};
use cerebro_core::swc::{parse_swc, serialize_swc, SegmentForest, SwcRecord};
use cerebro_core::vessel::{
    contract_chains, count_bends, CerebralTree, EdgeId, LabeledNetwork, NodeId, Side, TreeKind,
    VesselGraph,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn scene_for(forest: &SegmentForest, id: &str) -> (LabeledNetwork, LayoutScene) {
    build_scene(forest, id, &Settings::default(), &Overrides::new())
        .expect("synthetic scans lay out")
}

fn flatten(scene: &LayoutScene, e: EdgeId, n: usize) -> Vec<Point2> {
    let mut pts = Vec::new();
    for c in &scene.edge_path(e).unwrap().path {
        let f = c.flatten(n);
        let skip = usize::from(!pts.is_empty());
        pts.extend_from_slice(&f[skip..]);
    }
    pts
}

// 1. Robustness suite over seeds 0..24.
fn robustness() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..25u64 {
        let scan = generate_synthetic_scan(seed, &SynthParams::default());
        fs::write(
            dir.path().join(format!("scan_{seed:03}.swc")),
            serialize_swc(&scan.forest),
        )
        .unwrap();
    }
    let t = Instant::now();
    let report = validate_batch(dir.path(), &Settings::default()).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let ok = report.passed == 25 && report.total == 25 && secs < 10.0;
    let mut detail = format!(
        "{}/{} scans pass C1-C3 in {secs:.2}s (limit 10s)",
        report.passed, report.total
    );
    if !ok {
        detail.push('\n');
        detail.push_str(&report.summary());
    }
    outcome(ok, detail)
}

fn random_params(rng: &mut ChaCha8Rng) -> SynthParams {
    let max_depth = rng.gen_range(2..=6);
    SynthParams {
        min_depth: rng.gen_range(2..=max_depth),
        max_depth,
        branch_prob: rng.gen_range(0.3..0.95),
        asymmetry: rng.gen_range(0.0..0.6),
        noise: rng.gen_range(0.0..0.05),
        taper: rng.gen_range(0.75..0.95),
        ..SynthParams::default()
    }
}

fn seg_cross(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool {
    let c = |o: Point2, a: Point2, b: Point2| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let (d1, d2, d3, d4) = (c(q1, q2, p1), c(q1, q2, p2), c(p1, p2, q1), c(p1, p2, q2));
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn bbox(pts: &[Point2]) -> [f64; 4] {
    pts.iter().fold(
        [
            f64::INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::NEG_INFINITY,
        ],
        |b, p| [b[0].min(p.x), b[1].min(p.y), b[2].max(p.x), b[3].max(p.y)],
    )
}

fn boxes_meet(a: [f64; 4], b: [f64; 4]) -> bool {
    a[0] <= b[2] && b[0] <= a[2] && a[1] <= b[3] && b[1] <= a[3]
}

/// Independent recomputation of the five tree-layout invariants.
fn layout_oracle(net: &LabeledNetwork, scene: &LayoutScene) -> Vec<String> {
    let mut bad = Vec::new();
    let g = net.graph();
    let mid = scene.midline_x();

    let mut by_depth: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for n in &scene.nodes {
        if let Some(d) = n.depth {
            by_depth.entry(d).or_default().push(n.position.y);
        }
    }
    for (d, ys) in by_depth {
        let spread = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - ys.iter().cloned().fold(f64::INFINITY, f64::min);
        if spread >= 1e-9 {
            bad.push(format!("layer {d} spread {spread}"));
        }
    }

    let trees = net.cerebral_trees();
    for side in [Side::Left, Side::Right] {
        let mut ranges: Vec<(f64, f64)> = Vec::new();
        let mut polys: Vec<(EdgeId, [NodeId; 2], Vec<Point2>)> = Vec::new();
        for kind in TreeKind::OUTWARD {
            let Some(tree) = trees.get(&(kind, side)) else {
                continue;
            };
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &e in &tree.edges {
                let pts = flatten(scene, e, 48);
                for p in &pts {
                    let off = (p.x - mid) * side.sign();
                    if off <= 0.0 {
                        bad.push(format!("{} edge {e} crosses the midline", kind.label(side)));
                    }
                    lo = lo.min(off);
                    hi = hi.max(off);
                }
                // upward, never turning back
                if pts.windows(2).any(|w| w[1].y > w[0].y + 1e-12) {
                    bad.push(format!("edge {e} is not vertically monotone"));
                }
                let edge = g.edge(e);
                polys.push((e, [edge.start, edge.end], pts));
            }
            if lo.is_finite() {
                ranges.push((lo, hi));
            }
        }
        if ranges.windows(2).any(|w| w[0].1 >= w[1].0) {
            bad.push(format!("{side:?} slot order {ranges:?}"));
        }
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                let (a, b) = (&polys[i], &polys[j]);
                if !boxes_meet(bbox(&a.2), bbox(&b.2)) {
                    continue;
                }
                let shares = a.1.iter().any(|n| b.1.contains(n));
                // adjacent edges may touch at their shared node: skip the
                // sample spans that end there
                let span = |p: &Vec<Point2>, k: usize| shares && (k == 0 || k + 2 == p.len());
                'pairs: for ka in 0..a.2.len() - 1 {
                    if span(&a.2, ka) {
                        continue;
                    }
                    for kb in 0..b.2.len() - 1 {
                        if span(&b.2, kb) {
                            continue;
                        }
                        if boxes_meet(bbox(&a.2[ka..ka + 2]), bbox(&b.2[kb..kb + 2]))
                            && seg_cross(a.2[ka], a.2[ka + 1], b.2[kb], b.2[kb + 1])
                        {
                            bad.push(format!("edges {} and {} cross", a.0, b.0));
                            break 'pairs;
                        }
                    }
                }
            }
        }
    }
    // inflow arteries are directed too: monotone one way or the other
    if let Some(cow) = net.cow() {
        let inflow: Vec<EdgeId> = std::iter::once(cow.ba)
            .chain(cow.sides.iter().filter_map(|s| s.ic_descent))
            .collect();
        for e in inflow {
            let ys: Vec<f64> = flatten(scene, e, 48).iter().map(|p| p.y).collect();
            let up = ys.windows(2).all(|w| w[1] <= w[0] + 1e-12);
            let down = ys.windows(2).all(|w| w[1] >= w[0] - 1e-12);
            if !(up || down) {
                bad.push(format!("inflow edge {e} is not vertically monotone"));
            }
        }
    }
    bad
}

// 2. Layout invariants over 200 randomized scans.
fn layout_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = Vec::new();
    for i in 0..200u64 {
        let params = random_params(&mut rng);
        let seed = rng.gen::<u64>();
        let scan = generate_synthetic_scan(seed, &params);
        let (net, scene) =
            match build_scene(&scan.forest, "r", &Settings::default(), &Overrides::new()) {
                Ok(x) => x,
                Err(e) => {
                    failures.push(format!("scan {i} (seed {seed}): {e}"));
                    continue;
                }
            };
        let mut bad = layout_oracle(&net, &scene);
        bad.extend(
            check_layout(&scene, &net)
                .into_iter()
                .map(|v| v.to_string()),
        );
        if !bad.is_empty() {
            failures.push(format!(
                "scan {i} (seed {seed}, {params:?}): {}",
                bad.join("; ")
            ));
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            "200 scans, 0 violations".to_string()
        } else {
            format!(
                "{} scans with violations\n  {}",
                failures.len(),
                failures.join("\n  ")
            )
        },
    )
}

/// Random binary tree as SWC: a root chain, then bifurcations with random
/// lateral spread, at most `max_leaves` leaves.
fn random_tree(rng: &mut ChaCha8Rng, max_leaves: usize) -> SegmentForest {
    let mut records = Vec::new();
    let mut next = 1u64;
    let mut push = |records: &mut Vec<SwcRecord>, p: Vec3, parent: i64| {
        let id = next;
        next += 1;
        records.push(SwcRecord {
            id,
            type_code: 0,
            position: p,
            radius: 1.0,
            parent_id: parent,
        });
        id
    };
    let root = push(&mut records, Vec3::new(0.0, 0.0, 0.0), -1);
    let mut tip = root;
    for k in 1..3 {
        tip = push(&mut records, Vec3::new(0.0, k as f64, 0.0), tip as i64);
    }
    let target = rng.gen_range(1..=max_leaves);
    let mut open = vec![(tip, Vec3::new(0.0, 2.0, 0.0))];
    let mut leaves = 1;
    while leaves < target {
        let i = rng.gen_range(0..open.len());
        let (at, pos) = open.swap_remove(i);
        for _ in 0..2 {
            let mut p = pos;
            let mut parent = at;
            for _ in 0..rng.gen_range(1..4) {
                p = p + Vec3::new(
                    rng.gen_range(-3.0..3.0),
                    rng.gen_range(0.5..2.0),
                    rng.gen_range(-1.0..1.0),
                );
                parent = push(&mut records, p, parent as i64);
            }
            open.push((parent, p));
        }
        leaves += 1;
    }
    SegmentForest::from_records(records).unwrap()
}

/// Brute force: mean lateral coordinate of every segment at or below the
/// first segment of `edge`, walking the forest directly.
fn brute_mean_x(forest: &SegmentForest, graph: &VesselGraph, edge: EdgeId) -> f64 {
    let first = graph.edge(edge).segment_ids[0];
    let (mut sum, mut n) = (0.0, 0usize);
    let mut stack = vec![first];
    while let Some(s) = stack.pop() {
        sum += forest.position(s).x;
        n += 1;
        stack.extend_from_slice(forest.children(s));
    }
    sum / n as f64
}

fn brute_leaves(forest: &SegmentForest, graph: &VesselGraph, edge: EdgeId) -> usize {
    let mut stack = vec![graph.edge(edge).segment_ids[0]];
    let mut leaves = 0;
    while let Some(s) = stack.pop() {
        if forest.children(s).is_empty() {
            leaves += 1;
        }
        stack.extend_from_slice(forest.children(s));
    }
    leaves
}

// 3. Ordering oracle.
fn ordering() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = Vec::new();
    let mut internal = 0;
    for t in 0..100 {
        let forest = random_tree(&mut rng, 64);
        let graph = contract_chains(&forest);
        let tree = CerebralTree::below(&graph, TreeKind::Mca, Side::Right, graph.root());
        let order = order_subtrees(&tree, &graph);
        for (&node, kids) in &order {
            internal += 1;
            let mut want: Vec<(usize, EdgeId)> =
                tree.children(node).iter().copied().enumerate().collect();
            want.sort_by(|a, b| {
                brute_mean_x(&forest, &graph, a.1)
                    .total_cmp(&brute_mean_x(&forest, &graph, b.1))
                    .then(
                        brute_leaves(&forest, &graph, b.1).cmp(&brute_leaves(&forest, &graph, a.1)),
                    )
                    .then(a.0.cmp(&b.0))
            });
            let want: Vec<EdgeId> = want.into_iter().map(|w| w.1).collect();
            if *kids != want {
                mismatches.push(format!("tree {t} node {node}: got {kids:?}, want {want:?}"));
            }
        }
    }
    outcome(
        mismatches.is_empty(),
        format!(
            "100 trees, {internal} internal nodes, {} mismatches {}",
            mismatches.len(),
            mismatches.join("; ")
        ),
    )
}

fn descendants(graph: &VesselGraph, e: EdgeId) -> Vec<EdgeId> {
    graph.subtree(e)
}

fn check_flow(
    net: &LabeledNetwork,
    base: &FlowAssignment,
    blocked: &BTreeSet<EdgeId>,
) -> Result<(), String> {
    let g = net.graph();
    let f = compute_flow(net, blocked, HeightMode::Depth).map_err(|e| e.to_string())?;
    let mut shadowed: BTreeSet<EdgeId> = BTreeSet::new();
    for &b in blocked {
        shadowed.extend(descendants(g, b));
    }
    // locality: bit-identical outside blocked subtrees, zero inside
    for (&e, &v) in &f.flows {
        let want = if shadowed.contains(&e) {
            0.0
        } else {
            base.flows[&e]
        };
        if v.to_bits() != want.to_bits() {
            return Err(format!("edge {e}: flow {v}, expected {want}"));
        }
    }
    // conservation: a parent's flow equals its children's, counting a
    // blocked child at the share it would have received
    for edge in g.edges().iter().filter(|e| !e.dashed) {
        let kids = g.child_edges(edge.id);
        if kids.is_empty() || shadowed.contains(&edge.id) {
            continue;
        }
        let into: f64 = kids
            .iter()
            .map(|k| {
                if blocked.contains(k) {
                    base.flows[k]
                } else {
                    f.flows[k]
                }
            })
            .sum();
        if (into - f.flows[&edge.id]).abs() > 1e-12 {
            return Err(format!(
                "bifurcation at edge {}: {} in, {} out",
                edge.id, f.flows[&edge.id], into
            ));
        }
    }
    // budget: leaf outflow plus what the blocks removed is the inflow
    let leaves: f64 = g
        .edges()
        .iter()
        .filter(|e| !e.dashed && g.child_edges(e.id).is_empty())
        .map(|e| f.flows[&e.id])
        .sum();
    let lost: f64 = blocked
        .iter()
        .filter(|b| {
            !blocked
                .iter()
                .any(|o| o != *b && descendants(g, *o).contains(b))
        })
        .map(|b| base.flows[b])
        .sum();
    if (leaves + lost - 1.0).abs() > 1e-9 {
        return Err(format!("budget {leaves} + {lost} != 1"));
    }
    Ok(())
}

fn symmetric_split() -> bool {
    let text = "1 0 0 0 0 2 -1\n2 0 0 1 0 2 1\n3 0 0 2 0 2 2\n\
                4 0 -1 3 0 1.3 3\n5 0 -2 4 0 1.3 4\n\
                6 0 1 3 0 1.3 3\n7 0 2 4 0 1.3 6\n";
    let forest = parse_swc(text.as_bytes()).unwrap();
    let net = LabeledNetwork::new(contract_chains(&forest), BTreeMap::new());
    let f = compute_flow(&net, &BTreeSet::new(), HeightMode::Depth).unwrap();
    let g = net.graph();
    let trunk = g.node(g.root()).child_edges[0];
    let kids = g.child_edges(trunk);
    kids.len() == 2 && kids.iter().all(|k| f.flows[k] == 0.5) && f.flows[&trunk] == 1.0
}

// 4. Flow properties.
fn flow_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    for s in 0..100u64 {
        let scan = generate_synthetic_scan(1000 + s, &SynthParams::default());
        let net = build_network(&scan.forest, &Settings::default(), &Overrides::new()).unwrap();
        let base = compute_flow(&net, &BTreeSet::new(), HeightMode::Depth).unwrap();
        let solid: Vec<EdgeId> = net
            .edges()
            .iter()
            .filter(|e| !e.dashed)
            .map(|e| e.id)
            .collect();
        for _ in 0..100 {
            let k = rng.gen_range(1..=3);
            let blocked: BTreeSet<EdgeId> = (0..k)
                .map(|_| solid[rng.gen_range(0..solid.len())])
                .collect();
            if let Err(e) = check_flow(&net, &base, &blocked) {
                failures.push(format!("scan {s} blocked {blocked:?}: {e}"));
                break;
            }
        }
    }
    let sym = symmetric_split();
    outcome(
        failures.is_empty() && sym,
        format!(
            "100 scans x 100 blockages, {} failing scans; symmetric split 0.5/0.5: {} {}",
            failures.len(),
            if sym { "exact" } else { "NOT exact" },
            failures.join("; ")
        ),
    )
}

// 5. Stenosis closed loop.
fn stenosis_loop() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let settings = Settings::default();
    let mut hits = 0;
    let mut misses = Vec::new();
    for s in 0..50u64 {
        let scan = generate_synthetic_scan(2000 + s, &SynthParams::default());
        let net = build_network(&scan.forest, &settings, &Overrides::new()).unwrap();
        let cerebral: Vec<EdgeId> = net
            .cerebral_trees()
            .values()
            .flat_map(|t| t.edges.clone())
            .collect();
        let target = cerebral[rng.gen_range(0..cerebral.len())];
        let narrowed = inject_stenosis(&scan.forest, target, 0.7).unwrap();
        let after = build_network(&narrowed, &settings, &Overrides::new()).unwrap();
        let report = detect_width_outliers(
            &after,
            settings.narrowing_threshold,
            settings.widening_threshold,
        );
        match report.narrowings().next() {
            Some(o) if o.edge_id == target => hits += 1,
            other => misses.push(format!(
                "scan {s} target {target}: top {:?}",
                other.map(|o| o.edge_id)
            )),
        };
    }
    outcome(
        hits == 50,
        format!(
            "{hits}/50 injected edges ranked first {}",
            misses.join("; ")
        ),
    )
}

fn chain_bends(points: &[(f64, f64)]) -> u32 {
    let text: String = points
        .iter()
        .enumerate()
        .map(|(i, (x, y))| {
            format!(
                "{} 0 {x} {y} 0 1 {}\n",
                i + 1,
                if i == 0 { -1 } else { i as i64 }
            )
        })
        .collect();
    let forest = parse_swc(text.as_bytes()).unwrap();
    let graph = contract_chains(&forest);
    count_bends(&graph.edges()[0], &forest, 0.05).unwrap()
}

/// `k` equal runs alternating vertical and horizontal, four steps each.
fn alternating(k: usize) -> Vec<(f64, f64)> {
    let mut pts = vec![(0.0, 0.0)];
    let (mut x, mut y) = (0.0, 0.0);
    for run in 0..k {
        for _ in 0..4 {
            if run % 2 == 0 {
                y -= 1.0;
            } else {
                x += 1.0;
            }
            pts.push((x, y));
        }
    }
    pts
}

// 6. Bend counts.
fn bend_counts() -> Outcome {
    // vertical, horizontal, vertical as in a descending carotid
    let fig = [
        (0.0, 0.0),
        (0.0, -6.0),
        (0.0, -12.0),
        (5.0, -13.0),
        (10.0, -13.5),
        (10.0, -20.0),
        (10.0, -30.0),
    ];
    let fig_n = chain_bends(&fig);
    let straight: Vec<(f64, f64)> = (0..10).map(|i| (0.0, -(i as f64))).collect();
    let straight_n = chain_bends(&straight);
    let mut wrong = Vec::new();
    for k in 1..=10 {
        let n = chain_bends(&alternating(k));
        if n != k as u32 {
            wrong.push(format!("k={k} gives {n}"));
        }
    }
    let ok = fig_n == 3 && straight_n == 0 && wrong.is_empty();
    outcome(
        ok,
        format!(
            "carotid pattern {fig_n} (want 3), straight {straight_n} (want 0), alternations {}",
            if wrong.is_empty() {
                "all k".to_string()
            } else {
                wrong.join(", ")
            }
        ),
    )
}

// 7. Determinism and round trips.
fn determinism() -> Outcome {
    let mut problems = Vec::new();
    let scheme = ColorScheme::default();
    for seed in 0..10u64 {
        let a = generate_synthetic_scan(seed, &SynthParams::default());
        let b = generate_synthetic_scan(seed, &SynthParams::default());
        let swc = serialize_swc(&a.forest);
        if swc != serialize_swc(&b.forest) {
            problems.push(format!("seed {seed}: generator not deterministic"));
        }
        if parse_swc(swc.as_bytes()).unwrap() != a.forest {
            problems.push(format!("seed {seed}: SWC round trip"));
        }
        let (_, sa) = scene_for(&a.forest, "d");
        let (_, sb) = scene_for(&parse_swc(swc.as_bytes()).unwrap(), "d");
        let (ja, jb) = (export_scene_json(&sa), export_scene_json(&sb));
        if ja != jb {
            problems.push(format!("seed {seed}: scene JSON differs across runs"));
        }
        match import_scene_json(&ja) {
            Ok(back) if back == sa && export_scene_json(&back) == ja => {}
            _ => problems.push(format!("seed {seed}: scene JSON round trip")),
        }
        let opts = SvgOptions::default();
        if render_svg(&sa, &scheme, &opts) != render_svg(&sb, &scheme, &opts) {
            problems.push(format!("seed {seed}: SVG differs"));
        }
    }
    outcome(
        problems.is_empty(),
        format!(
            "10 seeds, {} problems {}",
            problems.len(),
            problems.join("; ")
        ),
    )
}

// 8. Mirror symmetry.
fn mirror() -> Outcome {
    let mut problems = Vec::new();
    for seed in 0..25u64 {
        let scan = generate_synthetic_scan(seed, &SynthParams::default());
        let (na, sa) = scene_for(&scan.forest, "m");
        let (nb, sb) = scene_for(&mirror_lateral(&scan.forest), "m");
        for (e, l) in na.labels() {
            if nb.label(*e) != Some(l.mirrored()) {
                problems.push(format!(
                    "seed {seed}: edge {e} {l} became {:?}",
                    nb.label(*e)
                ));
            }
        }
        let mid = sa.midline_x();
        let mut worst = 0.0f64;
        for pa in &sa.edge_paths {
            let Some(pb) = sb.edge_path(pa.edge_id) else {
                problems.push(format!("seed {seed}: edge {} missing", pa.edge_id));
                continue;
            };
            if pa.path.len() != pb.path.len() {
                problems.push(format!(
                    "seed {seed}: edge {} path length differs",
                    pa.edge_id
                ));
                continue;
            }
            // a curve and its reversal are the same drawn artery
            let forward: Vec<Point2> = pa
                .path
                .iter()
                .flat_map(|c| c.mirrored_x(mid).points)
                .collect();
            let other: Vec<Point2> = pb.path.iter().flat_map(|c| c.points).collect();
            let dev = |a: &mut dyn Iterator<Item = &Point2>| {
                a.zip(&other)
                    .map(|(p, q)| p.distance(*q))
                    .fold(0.0, f64::max)
            };
            worst = worst.max(dev(&mut forward.iter()).min(dev(&mut forward.iter().rev())));
        }
        for n in &sa.nodes {
            if let Some(m) = sb.node(n.id) {
                worst = worst.max(
                    (2.0 * mid - n.position.x - m.position.x)
                        .abs()
                        .max((n.position.y - m.position.y).abs()),
                );
            }
        }
        if worst > 1e-9 {
            problems.push(format!("seed {seed}: mirror deviation {worst:e}"));
        }
    }
    outcome(
        problems.is_empty(),
        format!(
            "25 seeds, {} problems {}",
            problems.len(),
            problems.join("; ")
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("robustness suite", robustness),
        ("layout invariants", layout_invariants),
        ("ordering oracle", ordering),
        ("flow properties", flow_properties),
        ("stenosis loop", stenosis_loop),
        ("bend counts", bend_counts),
        ("determinism and round trips", determinism),
        ("mirror symmetry", mirror),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!(
            "criterion {} {name}: {} ({:.2}s) {}",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail.trim_end()
        );
    }
    println!(
        "acceptance: {}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
