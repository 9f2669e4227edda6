use std::collections::BTreeMap;

use crate::vessel::{CerebralTree, EdgeId, NodeId, VesselGraph};

/// Left-to-right child edges per tree node.
pub type ChildOrder = BTreeMap<NodeId, Vec<EdgeId>>;

struct SubtreeStats {
    sum_x: f64,
    count: usize,
    leaves: usize,
}

fn stats(
    tree: &CerebralTree,
    graph: &VesselGraph,
    edge: EdgeId,
    memo: &mut BTreeMap<EdgeId, (f64, usize, usize)>,
) -> SubtreeStats {
    if let Some(&(sum_x, count, leaves)) = memo.get(&edge) {
        return SubtreeStats {
            sum_x,
            count,
            leaves,
        };
    }
    let e = graph.edge(edge);
    let mut sum_x: f64 = e
        .segment_ids
        .iter()
        .map(|&s| graph.forest().position(s).x)
        .sum();
    let mut count = e.segment_ids.len();
    let kids = tree.children(e.end);
    let mut leaves = if kids.is_empty() { 1 } else { 0 };
    for &k in kids {
        let s = stats(tree, graph, k, memo);
        sum_x += s.sum_x;
        count += s.count;
        leaves += s.leaves;
    }
    memo.insert(edge, (sum_x, count, leaves));
    SubtreeStats {
        sum_x,
        count,
        leaves,
    }
}

/// Orders children at every node of `tree` by the mean lateral coordinate of
/// all segment positions below them, ascending. Ties go to the subtree with
/// more leaves, then to the earlier child in file order.
pub fn order_subtrees(tree: &CerebralTree, graph: &VesselGraph) -> ChildOrder {
    let mut memo = BTreeMap::new();
    let mut out = ChildOrder::new();
    for &node in tree.node_depth.keys() {
        let kids = tree.children(node);
        if kids.is_empty() {
            continue;
        }
        let mut keyed: Vec<(f64, usize, usize, EdgeId)> = kids
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let s = stats(tree, graph, k, &mut memo);
                let mean = if s.count == 0 {
                    graph.edge(k).centroid.x
                } else {
                    s.sum_x / s.count as f64
                };
                (mean, s.leaves, i, k)
            })
            .collect();
        keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)).then(a.2.cmp(&b.2)));
        out.insert(node, keyed.into_iter().map(|k| k.3).collect());
    }
    out
}
