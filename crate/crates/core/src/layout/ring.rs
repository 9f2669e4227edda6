use std::collections::{BTreeMap, HashMap};

use crate::geom::{CubicBezier, Point2};
use crate::vessel::{EdgeId, LabeledNetwork, NodeId, Side, TreeKind, VesselError};

use super::{LayoutConfig, Slots};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RingLayout {
    pub nodes: BTreeMap<NodeId, Point2>,
    pub paths: HashMap<EdgeId, Vec<CubicBezier>>,
}

/// Cubic from `a` to `b` whose apex sits `offset` px off the chord (positive
/// is downward).
fn arc(a: Point2, b: Point2, offset: f64) -> CubicBezier {
    let k = offset * 4.0 / 3.0;
    CubicBezier::new(
        a,
        Point2::new(a.x + (b.x - a.x) / 3.0, a.y + k),
        Point2::new(a.x + (b.x - a.x) * 2.0 / 3.0, b.y + k),
        b,
    )
}

/// Draws the ring on the baseline.
///
/// Junctions sit at the centre of the band their tree occupies (the
/// IC junction halfway between the PCA and ACA junctions, the basilar tip
/// on the midline). P1 and A1 run straight along the baseline, each P.
/// Comm. and IC terminal dips below it and the A. Comm. arcs above it.
pub fn layout_cow(
    network: &LabeledNetwork,
    slots: &Slots,
    config: &LayoutConfig,
) -> Result<RingLayout, VesselError> {
    let cow = network
        .cow()
        .ok_or_else(|| VesselError::CannotClose(vec!["ring not reconstructed".into()]))?;
    let g = network.graph();
    let y = config.cow_baseline_y;
    let mut out = RingLayout::default();
    let mut place = |n: NodeId, x: f64| *out.nodes.entry(n).or_insert(Point2::new(x, y));

    for side in [Side::Left, Side::Right] {
        let r = cow.side(side);
        let c = |k: TreeKind| slots.band(k, side).center();
        let p = r.pca_junction.map(|n| place(n, c(TreeKind::Pca)));
        let a = r.aca_junction.map(|n| place(n, c(TreeKind::Aca)));
        if let Some(n) = r.terminus {
            place(n, c(TreeKind::Mca));
        }
        if let Some(n) = r.ic_junction {
            let px = p.map(|p| p.x).unwrap_or(c(TreeKind::Pca));
            let ax = a.map(|a| a.x).unwrap_or(c(TreeKind::Aca));
            place(n, 0.5 * (px + ax));
        }
    }
    place(cow.ba_tip, slots.midline);

    let ends = |e: EdgeId| {
        let edge = g.edge(e);
        (out.nodes[&edge.start], out.nodes[&edge.end])
    };
    let mut paths = HashMap::new();
    for side in [Side::Left, Side::Right] {
        let r = cow.side(side);
        for (member, drop) in [
            (r.p1, 0.0),
            (r.pcomm, config.pcomm_arc_drop),
            (r.ic_terminal, 0.5 * config.pcomm_arc_drop),
            (r.a1, 0.0),
        ] {
            if let Some(e) = member {
                let (a, b) = ends(e);
                let curve = if drop == 0.0 {
                    CubicBezier::line(a, b)
                } else {
                    arc(a, b, drop)
                };
                paths.insert(e, vec![curve]);
            }
        }
    }
    let (a, b) = ends(cow.acomm);
    paths.insert(cow.acomm, vec![arc(a, b, -config.acomm_arc_rise)]);
    out.paths = paths;
    Ok(out)
}
