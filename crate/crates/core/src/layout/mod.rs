//! Spatially constrained 2D layout.
//!
//! Scene coordinates are SVG pixels: x grows to the right, y grows down.
//! The Circle of Willis sits on the horizontal line `cow_baseline_y`; the
//! six cerebral trees grow upward from it in fixed hemisphere bands (PCA,
//! ACA, MCA from the midline outward) and the BA and carotid chains hang
//! below it as Bezier half-waves.

mod check;
mod inflow;
mod order;
mod ring;
mod slots;
mod trees;
mod widths;

pub use check::{check_layout, LayoutViolation, ViolationKind};
pub use inflow::{abstract_inflow, inflow_path};
pub use order::{order_subtrees, ChildOrder};
pub use ring::layout_cow;
pub use slots::{assign_slots, Band, Slots};
pub use trees::{layout_trees, TreeLayout};
pub use widths::{radius_range, scale_widths};

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{CubicBezier, Point2};
use crate::render::{ColorScheme, Rgb};
use crate::swc::SegmentId;
use crate::vessel::{
    reconstruct_cow, ArteryLabel, EdgeId, LabeledNetwork, NodeId, Side, TreeKind, VesselError,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LayoutConfig {
    /// Vertical distance between tree depth layers.
    pub layer_height: f64,
    pub cow_baseline_y: f64,
    pub band_gutter: f64,
    pub canvas_width: f64,
    pub stroke_min: f64,
    pub stroke_max: f64,
    /// Height of the region below the ring that the longest inflow chain
    /// spans.
    pub carotid_band_height: f64,
    /// Lateral amplitude of each inflow half-wave.
    pub carotid_amplitude: f64,
    pub acomm_arc_rise: f64,
    pub pcomm_arc_drop: f64,
    /// Runs shorter than this fraction of a chain are ignored when counting
    /// bends.
    pub bend_noise_fraction: f64,
    /// Fixed radius range for cross-scan width comparison; per-scan
    /// min/max when unset.
    pub corpus_radius_range: Option<[f64; 2]>,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        Self {
            layer_height: 40.0,
            cow_baseline_y: 480.0,
            band_gutter: 16.0,
            canvas_width: 1200.0,
            stroke_min: 1.0,
            stroke_max: 12.0,
            carotid_band_height: 260.0,
            carotid_amplitude: 14.0,
            acomm_arc_rise: 36.0,
            pcomm_arc_drop: 28.0,
            bend_noise_fraction: 0.05,
            corpus_radius_range: None,
        }
    }
}

impl LayoutConfig {
    pub fn validate(&self) -> Result<(), LayoutError> {
        let positive = [
            ("layer_height", self.layer_height),
            ("cow_baseline_y", self.cow_baseline_y),
            ("band_gutter", self.band_gutter),
            ("canvas_width", self.canvas_width),
            ("stroke_min", self.stroke_min),
            ("stroke_max", self.stroke_max),
            ("carotid_band_height", self.carotid_band_height),
            ("carotid_amplitude", self.carotid_amplitude),
            ("acomm_arc_rise", self.acomm_arc_rise),
            ("pcomm_arc_drop", self.pcomm_arc_drop),
            ("bend_noise_fraction", self.bend_noise_fraction),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(LayoutError::InvalidConfig(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.stroke_min >= self.stroke_max {
            return Err(LayoutError::InvalidConfig(
                "stroke_min must be below stroke_max".into(),
            ));
        }
        if let Some([lo, hi]) = self.corpus_radius_range {
            if !(lo > 0.0 && lo <= hi) {
                return Err(LayoutError::InvalidConfig(format!(
                    "bad corpus radius range {lo}..{hi}"
                )));
            }
        }
        if 3.5 * self.band_gutter >= self.canvas_width / 2.0 {
            return Err(LayoutError::InvalidConfig(
                "canvas too narrow for the gutters".into(),
            ));
        }
        Ok(())
    }

    pub fn midline_x(&self) -> f64 {
        self.canvas_width / 2.0
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayoutError {
    #[error("invalid layout config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Vessel(#[from] VesselError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SceneNode {
    pub id: NodeId,
    pub position: Point2,
    /// Tree depth; 0 on the ring, `None` for inflow ends and unplaced nodes.
    pub depth: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgePath {
    pub edge_id: EdgeId,
    /// Continuous poly-Bezier from the edge's start node to its end node.
    pub path: Vec<CubicBezier>,
    pub stroke_width: f64,
    pub dashed: bool,
    pub label: ArteryLabel,
    pub flow: Option<f64>,
    pub color: Rgb,
    pub segment_ids: Vec<SegmentId>,
    pub mean_radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedEdge {
    pub edge_id: EdgeId,
    pub polyline: Vec<[f64; 2]>,
}

/// Orthographic projections of the raw segment positions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Projections {
    /// (lateral, vertical)
    pub front: Vec<ProjectedEdge>,
    /// (lateral, depth)
    pub top: Vec<ProjectedEdge>,
    /// (depth, vertical)
    pub side: Vec<ProjectedEdge>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutScene {
    pub scan_id: String,
    pub config: LayoutConfig,
    /// Radius range the stroke widths were scaled against.
    pub radius_range: [f64; 2],
    pub nodes: Vec<SceneNode>,
    pub edge_paths: Vec<EdgePath>,
    pub projections: Projections,
}

impl LayoutScene {
    pub fn midline_x(&self) -> f64 {
        self.config.midline_x()
    }

    pub fn edge_path(&self, id: EdgeId) -> Option<&EdgePath> {
        self.edge_paths.iter().find(|p| p.edge_id == id)
    }

    pub fn node(&self, id: NodeId) -> Option<&SceneNode> {
        self.nodes.iter().find(|n| n.id == id)
    }
}

/// Node positions and depths assembled from the partial layouts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NodePlacement {
    pub positions: BTreeMap<NodeId, Point2>,
    pub depths: BTreeMap<NodeId, Option<u32>>,
}

impl NodePlacement {
    /// Keeps the first placement of a node.
    pub fn place(&mut self, id: NodeId, p: Point2, depth: Option<u32>) {
        self.positions.entry(id).or_insert(p);
        self.depths.entry(id).or_insert(depth);
    }

    pub fn get(&self, id: NodeId) -> Option<Point2> {
        self.positions.get(&id).copied()
    }
}

/// Side of the scene an edge belongs to, for fallback drawing.
fn side_sign(label: ArteryLabel) -> f64 {
    match label.side() {
        Side::Left => -1.0,
        Side::Right => 1.0,
        Side::Center => 1.0,
    }
}

/// Draws edges no other step placed (unlabeled branches and stray pieces)
/// as short straight fans below their start node.
fn layout_fallback(
    network: &LabeledNetwork,
    config: &LayoutConfig,
    placement: &mut NodePlacement,
    paths: &mut HashMap<EdgeId, Vec<CubicBezier>>,
) {
    let g = network.graph();
    let mut pending: Vec<EdgeId> = g
        .edges()
        .iter()
        .map(|e| e.id)
        .filter(|e| !paths.contains_key(e))
        .collect();
    // data-tree edges come in preorder, so a start node is placed before its
    // children; dashed leftovers are handled last
    while !pending.is_empty() {
        let before = pending.len();
        pending.retain(|&id| {
            let e = g.edge(id);
            let Some(a) = placement.get(e.start) else {
                return true;
            };
            let b = placement.get(e.end).unwrap_or_else(|| {
                let label = network
                    .label(id)
                    .unwrap_or(ArteryLabel::Unlabeled(Side::Center, 0));
                let siblings: Vec<EdgeId> = g.node(e.start).child_edges.clone();
                let k = siblings.iter().position(|s| *s == id).unwrap_or(0) as f64;
                let dx = side_sign(label) * config.band_gutter * (1.0 + k);
                let p = Point2::new(a.x + dx, a.y + config.layer_height / 2.0);
                placement.place(e.end, p, None);
                p
            });
            paths.insert(id, vec![CubicBezier::line(a, b)]);
            false
        });
        if pending.len() == before {
            // unreachable pieces: anchor at the root
            let id = pending[0];
            let root = placement
                .get(g.root())
                .unwrap_or(Point2::new(config.midline_x(), config.cow_baseline_y));
            placement.place(g.edge(id).start, root, None);
        }
    }
}

/// Runs the full layout: slots, child orders, trees, ring, inflow, widths.
/// Reconstructs the ring first when the network has none.
pub fn compose_scene(
    network: &LabeledNetwork,
    config: &LayoutConfig,
    scan_id: &str,
) -> Result<LayoutScene, LayoutError> {
    config.validate()?;
    let owned;
    let network = if network.cow().is_some() {
        network
    } else {
        owned = reconstruct_cow(network)?;
        &owned
    };
    let g = network.graph();
    let trees = network.cerebral_trees();
    let slots = assign_slots(&trees, config);
    let orders: BTreeMap<(TreeKind, Side), ChildOrder> = trees
        .iter()
        .map(|(k, t)| (*k, order_subtrees(t, g)))
        .collect();

    let mut placement = NodePlacement::default();
    let mut paths: HashMap<EdgeId, Vec<CubicBezier>> = HashMap::new();

    let tree_layout = layout_trees(network, &trees, &slots, &orders, config);
    for (n, (p, d)) in &tree_layout.nodes {
        placement.place(*n, *p, Some(*d));
    }
    paths.extend(tree_layout.paths);

    let ring = layout_cow(network, &slots, config)?;
    for (n, p) in &ring.nodes {
        placement.place(*n, *p, Some(0));
    }
    paths.extend(ring.paths);

    let cow = network.cow().expect("ring reconstructed above");
    let mut inflow = vec![cow.ba];
    inflow.extend(cow.sides.iter().filter_map(|s| s.ic_descent));
    let longest = inflow
        .iter()
        .map(|&e| g.edge(e).chain_length)
        .fold(0.0, f64::max);
    for &e in &inflow {
        let edge = g.edge(e);
        // the BA meets the ring at its far end, an IC descent at its start
        let at_end = e == cow.ba;
        let (attach_node, far) = if at_end {
            (edge.end, edge.start)
        } else {
            (edge.start, edge.end)
        };
        let Some(attach) = placement.get(attach_node) else {
            continue;
        };
        let label = network.label(e).unwrap_or(ArteryLabel::Ba);
        let path = abstract_inflow(network, e, label, attach, at_end, longest, config);
        let far_point = if at_end {
            path[0].start()
        } else {
            path[path.len() - 1].end()
        };
        placement.place(far, far_point, None);
        paths.insert(e, path);
    }

    layout_fallback(network, config, &mut placement, &mut paths);

    let (radius_range, strokes) = scale_widths(network, config);
    let scheme = ColorScheme::default();
    let mut edge_paths = Vec::with_capacity(g.edges().len());
    for e in g.edges() {
        let label = network
            .label(e.id)
            .unwrap_or(ArteryLabel::Unlabeled(Side::Center, 0));
        edge_paths.push(EdgePath {
            edge_id: e.id,
            path: paths.remove(&e.id).expect("every edge is drawn"),
            stroke_width: strokes[&e.id],
            dashed: e.dashed,
            label,
            flow: None,
            color: scheme.categorical(label),
            segment_ids: e.segment_ids.clone(),
            mean_radius: e.mean_radius,
        });
    }

    let nodes = placement
        .positions
        .iter()
        .map(|(id, p)| SceneNode {
            id: *id,
            position: *p,
            depth: placement.depths[id],
        })
        .collect();

    Ok(LayoutScene {
        scan_id: scan_id.to_string(),
        config: *config,
        radius_range,
        nodes,
        edge_paths,
        projections: project(network),
    })
}

/// Raw-coordinate polylines (start node, then every segment) per view.
pub fn project(network: &LabeledNetwork) -> Projections {
    let g = network.graph();
    let mut out = Projections::default();
    for e in g.edges().iter().filter(|e| !e.dashed) {
        let pts = g.chain_points(e.id);
        let view = |f: fn(&crate::geom::Vec3) -> [f64; 2]| ProjectedEdge {
            edge_id: e.id,
            polyline: pts.iter().map(f).collect(),
        };
        out.front.push(view(|p| [p.x, p.y]));
        out.top.push(view(|p| [p.x, p.z]));
        out.side.push(view(|p| [p.z, p.y]));
    }
    out
}
