use std::collections::{BTreeMap, HashMap};

use crate::geom::{CubicBezier, Point2};
use crate::vessel::{CerebralTree, EdgeId, LabeledNetwork, NodeId, Side, TreeKind};

use super::{ChildOrder, LayoutConfig, Slots};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TreeLayout {
    /// Position and depth of every tree node, attachments included.
    pub nodes: BTreeMap<NodeId, (Point2, u32)>,
    pub paths: HashMap<EdgeId, Vec<CubicBezier>>,
}

/// Arced edge from a parent to a child node: the control points sit at a
/// third and two thirds of the vertical span, pushed a quarter of the
/// horizontal span toward the child. y is then linear in the curve
/// parameter, so the edge is vertically monotone.
pub fn tree_edge(parent: Point2, child: Point2) -> CubicBezier {
    let (dx, dy) = (child.x - parent.x, child.y - parent.y);
    CubicBezier::new(
        parent,
        Point2::new(parent.x + dx * (7.0 / 12.0), parent.y + dy / 3.0),
        Point2::new(parent.x + dx * (11.0 / 12.0), parent.y + dy * (2.0 / 3.0)),
        child,
    )
}

/// Layered upward drawing of each tree inside its band. A node at depth d
/// sits at `cow_baseline_y - d * layer_height`; its horizontal interval is
/// split among its children by leaf count in the computed order, and each
/// node takes the midpoint of its interval.
pub fn layout_trees(
    network: &LabeledNetwork,
    trees: &BTreeMap<(TreeKind, Side), CerebralTree>,
    slots: &Slots,
    orders: &BTreeMap<(TreeKind, Side), ChildOrder>,
    config: &LayoutConfig,
) -> TreeLayout {
    let g = network.graph();
    let mut out = TreeLayout::default();
    for (key, tree) in trees {
        let band = slots.band(key.0, key.1);
        let order = &orders[key];
        let y_of = |d: u32| config.cow_baseline_y - d as f64 * config.layer_height;
        // leaves below each node, following the computed order
        let mut leaves: BTreeMap<NodeId, usize> = BTreeMap::new();
        fn count(
            n: NodeId,
            order: &ChildOrder,
            g: &crate::vessel::VesselGraph,
            memo: &mut BTreeMap<NodeId, usize>,
        ) -> usize {
            let c = match order.get(&n) {
                Some(kids) if !kids.is_empty() => kids
                    .iter()
                    .map(|&k| count(g.edge(k).end, order, g, memo))
                    .sum(),
                _ => 1,
            };
            memo.insert(n, c);
            c
        }
        count(tree.attachment, order, g, &mut leaves);

        let mut stack = vec![(tree.attachment, band.x0, band.x1)];
        while let Some((n, x0, x1)) = stack.pop() {
            let d = tree.node_depth[&n];
            let p = Point2::new(0.5 * (x0 + x1), y_of(d));
            out.nodes.insert(n, (p, d));
            let Some(kids) = order.get(&n) else { continue };
            let total = leaves[&n] as f64;
            let mut cursor = x0;
            for &k in kids {
                let child = g.edge(k).end;
                let w = (x1 - x0) * leaves[&child] as f64 / total;
                let (c0, c1) = (cursor, cursor + w);
                cursor = c1;
                let cp = Point2::new(0.5 * (c0 + c1), y_of(tree.node_depth[&child]));
                out.paths.insert(k, vec![tree_edge(p, cp)]);
                stack.push((child, c0, c1));
            }
        }
    }
    out
}
