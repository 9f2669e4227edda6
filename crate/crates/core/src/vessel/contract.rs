use std::collections::BTreeMap;
use std::sync::Arc;

use crate::geom::Vec3;
use crate::swc::{SegmentForest, SegmentId};

use super::{
    ArteryEdge, Directedness, EdgeId, GraphNode, NodeId, NonBinaryBifurcation, VesselGraph,
};

/// Collapses runs of single-child records into artery edges.
///
/// Graph nodes are the root, every leaf and every record with two or more
/// children. Edge ids follow a preorder walk with children in file order.
/// Nodes with more than two children are kept and reported as warnings.
pub fn contract_chains(forest: &SegmentForest) -> VesselGraph {
    let is_node = |id: SegmentId| id == forest.root_id() || forest.children(id).len() != 1;

    let mut nodes: BTreeMap<NodeId, GraphNode> = BTreeMap::new();
    let mut warnings = Vec::new();
    for r in forest.records() {
        if is_node(r.id) {
            nodes.insert(
                NodeId(r.id),
                GraphNode {
                    id: NodeId(r.id),
                    position: r.position,
                    synthetic: false,
                    parent_edge: None,
                    child_edges: Vec::new(),
                },
            );
            let degree = forest.children(r.id).len();
            if degree > 2 {
                warnings.push(NonBinaryBifurcation {
                    node_id: NodeId(r.id),
                    degree,
                });
            }
        }
    }

    let mut edges: Vec<ArteryEdge> = Vec::new();
    let mut stack = vec![forest.root_id()];
    while let Some(node) = stack.pop() {
        let mut ends = Vec::new();
        for &first in forest.children(node) {
            let mut segment_ids = vec![first];
            let mut cur = first;
            while !is_node(cur) {
                cur = forest.children(cur)[0];
                segment_ids.push(cur);
            }
            let id = EdgeId(edges.len() as u32);
            edges.push(chain_edge(
                forest,
                id,
                NodeId(node),
                NodeId(cur),
                segment_ids,
            ));
            nodes.get_mut(&NodeId(node)).unwrap().child_edges.push(id);
            nodes.get_mut(&NodeId(cur)).unwrap().parent_edge = Some(id);
            ends.push(cur);
        }
        // sibling chains get adjacent ids here; renumbered to preorder below
        stack.extend(ends.into_iter().rev());
    }

    let graph = VesselGraph {
        forest: Arc::new(forest.clone()),
        nodes,
        edges,
        warnings,
    };
    renumber_preorder(graph)
}

fn renumber_preorder(mut g: VesselGraph) -> VesselGraph {
    let mut order = Vec::with_capacity(g.edges.len());
    let root = g.root();
    let mut stack: Vec<EdgeId> = g.nodes[&root].child_edges.iter().rev().copied().collect();
    while let Some(e) = stack.pop() {
        order.push(e);
        let end = g.edges[e.0 as usize].end;
        stack.extend(g.nodes[&end].child_edges.iter().rev());
    }
    let mut remap = vec![EdgeId(0); g.edges.len()];
    for (new, old) in order.iter().enumerate() {
        remap[old.0 as usize] = EdgeId(new as u32);
    }
    let mut edges: Vec<Option<ArteryEdge>> = g.edges.drain(..).map(Some).collect();
    g.edges = order
        .iter()
        .map(|old| {
            let mut e = edges[old.0 as usize].take().unwrap();
            e.id = remap[old.0 as usize];
            e
        })
        .collect();
    for n in g.nodes.values_mut() {
        n.parent_edge = n.parent_edge.map(|e| remap[e.0 as usize]);
        for c in &mut n.child_edges {
            *c = remap[c.0 as usize];
        }
    }
    g
}

fn chain_edge(
    forest: &SegmentForest,
    id: EdgeId,
    start: NodeId,
    end: NodeId,
    segment_ids: Vec<SegmentId>,
) -> ArteryEdge {
    let mut prev = forest.position(start.0);
    let mut length = 0.0;
    let mut weighted_radius = 0.0;
    let mut weighted_mid = Vec3::ZERO;
    for &s in &segment_ids {
        let r = forest.record(s);
        let l = r.position.distance(prev);
        length += l;
        weighted_radius += l * r.radius;
        weighted_mid = weighted_mid + (r.position + prev) * (0.5 * l);
        prev = r.position;
    }
    let (mean_radius, centroid) = if length > 0.0 {
        (weighted_radius / length, weighted_mid * (1.0 / length))
    } else {
        let n = segment_ids.len() as f64;
        let r = segment_ids
            .iter()
            .map(|&s| forest.record(s).radius)
            .sum::<f64>()
            / n;
        let c = segment_ids
            .iter()
            .fold(Vec3::ZERO, |acc, &s| acc + forest.position(s))
            * (1.0 / n);
        (r, c)
    };
    ArteryEdge {
        id,
        start,
        end,
        segment_ids,
        mean_radius,
        chain_length: length,
        centroid,
        bend_count: None,
        directedness: Directedness::TowardBrain,
        dashed: false,
    }
}
