//! Machine checks of the layout invariants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::geom::Point2;
use crate::vessel::{EdgeId, LabeledNetwork, NodeId, Side, TreeKind};

use super::LayoutScene;

const EPS: f64 = 1e-9;
/// Samples per Bezier when flattening for geometric checks.
const FLATTEN: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    LayerAlignment,
    HemisphereSeparation,
    SlotOrder,
    Planarity,
    Monotonicity,
    RingBaseline,
    Continuity,
    MissingPath,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutViolation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for LayoutViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.detail)
    }
}

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Intersection point of two closed segments, if they meet at one point;
/// overlapping collinear segments report their first shared point.
fn segment_hit(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> Option<Point2> {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    let on = |a: Point2, b: Point2, c: Point2| {
        c.x >= a.x.min(b.x) - EPS
            && c.x <= a.x.max(b.x) + EPS
            && c.y >= a.y.min(b.y) - EPS
            && c.y <= a.y.max(b.y) + EPS
    };
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        let t = d1 / (d1 - d2);
        return Some(p1.lerp(p2, t));
    }
    for (d, c, a, b) in [
        (d1, p1, q1, q2),
        (d2, p2, q1, q2),
        (d3, q1, p1, p2),
        (d4, q2, p1, p2),
    ] {
        if d.abs() <= EPS && on(a, b, c) {
            return Some(c);
        }
    }
    None
}

fn bbox(pts: &[Point2]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (lo, hi)
}

fn boxes_meet(a: &(Point2, Point2), b: &(Point2, Point2)) -> bool {
    a.0.x <= b.1.x + EPS && b.0.x <= a.1.x + EPS && a.0.y <= b.1.y + EPS && b.0.y <= a.1.y + EPS
}

struct Flat {
    edge: EdgeId,
    ends: [NodeId; 2],
    pts: Vec<Point2>,
    bbox: (Point2, Point2),
}

/// Returns every violated layout invariant; empty means the scene is sound.
///
/// Checked: equal-depth nodes share a y; tree geometry stays on its side of
/// the midline beyond half a gutter; PCA, ACA and MCA geometry are ordered
/// outward; tree edges in one hemisphere meet only at shared nodes; tree
/// and inflow paths are vertically monotone; ring edges end on the
/// baseline; every path is continuous and joins its edge's nodes.
pub fn check_layout(scene: &LayoutScene, network: &LabeledNetwork) -> Vec<LayoutViolation> {
    let mut out = Vec::new();
    let mut push = |kind: ViolationKind, detail: String| out.push(LayoutViolation { kind, detail });
    let g = network.graph();
    let cfg = &scene.config;
    let mid = scene.midline_x();
    let node_pos: BTreeMap<NodeId, Point2> =
        scene.nodes.iter().map(|n| (n.id, n.position)).collect();
    let paths: BTreeMap<EdgeId, &super::EdgePath> =
        scene.edge_paths.iter().map(|p| (p.edge_id, p)).collect();

    for e in g.edges() {
        let Some(p) = paths.get(&e.id) else {
            push(
                ViolationKind::MissingPath,
                format!("edge {} has no path", e.id),
            );
            continue;
        };
        if p.path.is_empty() {
            push(
                ViolationKind::MissingPath,
                format!("edge {} has an empty path", e.id),
            );
            continue;
        }
        for w in p.path.windows(2) {
            if w[0].end().distance(w[1].start()) > EPS {
                push(
                    ViolationKind::Continuity,
                    format!("edge {} path breaks", e.id),
                );
            }
        }
        for (node, at) in [
            (e.start, p.path[0].start()),
            (e.end, p.path[p.path.len() - 1].end()),
        ] {
            match node_pos.get(&node) {
                Some(q) if q.distance(at) <= EPS => {}
                _ => push(
                    ViolationKind::Continuity,
                    format!("edge {} does not meet node {node}", e.id),
                ),
            }
        }
    }

    let mut by_depth: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
    for n in &scene.nodes {
        if let Some(d) = n.depth {
            let r = by_depth
                .entry(d)
                .or_insert((f64::INFINITY, f64::NEG_INFINITY));
            *r = (r.0.min(n.position.y), r.1.max(n.position.y));
        }
    }
    for (d, (lo, hi)) in by_depth {
        if hi - lo >= EPS {
            push(
                ViolationKind::LayerAlignment,
                format!("depth {d} spans y {lo}..{hi}"),
            );
        }
    }

    let flatten = |e: EdgeId| -> Vec<Point2> {
        let mut pts = Vec::new();
        for c in &paths[&e].path {
            let f = c.flatten(FLATTEN);
            let skip = usize::from(!pts.is_empty());
            pts.extend_from_slice(&f[skip..]);
        }
        pts
    };

    let trees = network.cerebral_trees();
    for side in [Side::Left, Side::Right] {
        let sign = side.sign();
        let mut flats: Vec<Flat> = Vec::new();
        let mut extent: BTreeMap<TreeKind, (f64, f64)> = BTreeMap::new();
        for kind in TreeKind::OUTWARD {
            let Some(tree) = trees.get(&(kind, side)) else {
                continue;
            };
            for &e in &tree.edges {
                if !paths.contains_key(&e) {
                    continue;
                }
                let pts = flatten(e);
                for q in &pts {
                    let off = (q.x - mid) * sign;
                    if off <= 0.5 * cfg.band_gutter {
                        push(
                            ViolationKind::HemisphereSeparation,
                            format!("{} edge {e} reaches x = {}", kind.label(side), q.x),
                        );
                        break;
                    }
                }
                let r = extent
                    .entry(kind)
                    .or_insert((f64::INFINITY, f64::NEG_INFINITY));
                for q in &pts {
                    let off = (q.x - mid).abs();
                    *r = (r.0.min(off), r.1.max(off));
                }
                let edge = g.edge(e);
                flats.push(Flat {
                    edge: e,
                    ends: [edge.start, edge.end],
                    bbox: bbox(&pts),
                    pts,
                });
            }
        }
        let kinds: Vec<(TreeKind, (f64, f64))> = extent.into_iter().collect();
        for w in kinds.windows(2) {
            if w[0].1 .1 >= w[1].1 .0 {
                push(
                    ViolationKind::SlotOrder,
                    format!(
                        "{} reaches {} beyond {} at {}",
                        w[0].0.label(side),
                        w[0].1 .1,
                        w[1].0.label(side),
                        w[1].1 .0
                    ),
                );
            }
        }
        for i in 0..flats.len() {
            for j in i + 1..flats.len() {
                let (a, b) = (&flats[i], &flats[j]);
                if !boxes_meet(&a.bbox, &b.bbox) {
                    continue;
                }
                let shared: Vec<Point2> = a
                    .ends
                    .iter()
                    .filter(|n| b.ends.contains(n))
                    .filter_map(|n| node_pos.get(n).copied())
                    .collect();
                'pairs: for sa in a.pts.windows(2) {
                    let ba = bbox(sa);
                    for sb in b.pts.windows(2) {
                        if !boxes_meet(&ba, &bbox(sb)) {
                            continue;
                        }
                        if let Some(hit) = segment_hit(sa[0], sa[1], sb[0], sb[1]) {
                            if shared.iter().all(|s| s.distance(hit) > 1e-6) {
                                push(
                                    ViolationKind::Planarity,
                                    format!(
                                        "edges {} and {} cross near ({:.3}, {:.3})",
                                        a.edge, b.edge, hit.x, hit.y
                                    ),
                                );
                                break 'pairs;
                            }
                        }
                    }
                }
            }
        }
    }

    let ring: BTreeSet<EdgeId> = network.cow_cycle().iter().copied().collect();
    let mut directed: BTreeSet<EdgeId> = trees
        .values()
        .flat_map(|t| t.edges.iter().copied())
        .collect();
    if let Some(c) = network.cow() {
        directed.insert(c.ba);
        directed.extend(c.sides.iter().filter_map(|s| s.ic_descent));
    }
    for &e in &directed {
        if !paths.contains_key(&e) {
            continue;
        }
        let ys: Vec<f64> = flatten(e).iter().map(|p| p.y).collect();
        let up = ys.windows(2).all(|w| w[1] <= w[0] + EPS);
        let down = ys.windows(2).all(|w| w[1] >= w[0] - EPS);
        if !(up || down) {
            push(
                ViolationKind::Monotonicity,
                format!("edge {e} is not vertically monotone"),
            );
        }
    }
    for &e in &ring {
        let Some(p) = paths.get(&e) else { continue };
        for q in [p.path[0].start(), p.path[p.path.len() - 1].end()] {
            if (q.y - cfg.cow_baseline_y).abs() >= EPS {
                push(
                    ViolationKind::RingBaseline,
                    format!("ring edge {e} ends at y = {}", q.y),
                );
            }
        }
    }
    out
}
