use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::cow::{derive_roles, CowRing};
use super::{ArteryEdge, ArteryLabel, EdgeId, NodeId, Side, TreeKind, VesselError, VesselGraph};

/// Vessel graph plus anatomical labels and, once reconstructed, the ring.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledNetwork {
    pub(crate) graph: VesselGraph,
    pub(crate) labels: BTreeMap<EdgeId, ArteryLabel>,
    pub(crate) cow: Option<CowRing>,
}

/// One of the six directed cerebral trees, rooted at its ring attachment.
#[derive(Debug, Clone, PartialEq)]
pub struct CerebralTree {
    pub kind: TreeKind,
    pub side: Side,
    pub attachment: NodeId,
    /// Tree edges in preorder (children in file order).
    pub edges: Vec<EdgeId>,
    /// Depth of every tree node; the attachment is depth 0.
    pub node_depth: BTreeMap<NodeId, u32>,
    children: BTreeMap<NodeId, Vec<EdgeId>>,
}

impl CerebralTree {
    /// Every data-tree edge below `attachment`, as one tree. Lets a bare
    /// vessel graph be laid out or ordered without classification.
    pub fn below(graph: &VesselGraph, kind: TreeKind, side: Side, attachment: NodeId) -> Self {
        let members: BTreeSet<EdgeId> = graph
            .edges()
            .iter()
            .filter(|e| !e.dashed)
            .map(|e| e.id)
            .collect();
        build_tree(graph, kind, side, attachment, &members)
    }

    pub fn label(&self) -> ArteryLabel {
        self.kind.label(self.side)
    }

    /// Tree edges leaving `node`, in file order.
    pub fn children(&self, node: NodeId) -> &[EdgeId] {
        self.children.get(&node).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn max_depth(&self) -> u32 {
        self.node_depth.values().copied().max().unwrap_or(0)
    }

    /// Tree nodes without children; an edgeless tree has none.
    pub fn leaves(&self) -> Vec<NodeId> {
        if self.edges.is_empty() {
            return Vec::new();
        }
        self.node_depth
            .keys()
            .copied()
            .filter(|n| self.children(*n).is_empty())
            .collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().len()
    }

    /// Leaves below `node` (a leaf counts itself).
    pub fn leaves_below(&self, graph: &VesselGraph, node: NodeId) -> usize {
        let kids = self.children(node);
        if kids.is_empty() {
            return 1;
        }
        kids.iter()
            .map(|&e| self.leaves_below(graph, graph.edge(e).end))
            .sum()
    }
}

impl LabeledNetwork {
    pub fn new(graph: VesselGraph, labels: BTreeMap<EdgeId, ArteryLabel>) -> Self {
        Self {
            graph,
            labels,
            cow: None,
        }
    }

    pub fn graph(&self) -> &VesselGraph {
        &self.graph
    }

    pub fn edges(&self) -> &[ArteryEdge] {
        self.graph.edges()
    }

    pub fn edge(&self, id: EdgeId) -> &ArteryEdge {
        self.graph.edge(id)
    }

    pub fn labels(&self) -> &BTreeMap<EdgeId, ArteryLabel> {
        &self.labels
    }

    pub fn label(&self, id: EdgeId) -> Option<ArteryLabel> {
        self.labels.get(&id).copied()
    }

    pub fn cow(&self) -> Option<&CowRing> {
        self.cow.as_ref()
    }

    pub fn cow_cycle(&self) -> &[EdgeId] {
        self.cow.as_ref().map(|c| c.cycle.as_slice()).unwrap_or(&[])
    }

    pub fn edges_with_label(&self, label: ArteryLabel) -> Vec<EdgeId> {
        self.labels
            .iter()
            .filter(|(_, l)| **l == label)
            .map(|(e, _)| *e)
            .collect()
    }

    /// Mean lateral coordinate of the basilar chain, the left/right divide.
    pub fn midline_lateral(&self) -> f64 {
        let ba = self.edges_with_label(ArteryLabel::Ba);
        let pts: Vec<f64> = ba
            .iter()
            .flat_map(|&e| self.graph.edge(e).segment_ids.iter())
            .map(|&s| self.graph.forest.position(s).x)
            .collect();
        if pts.is_empty() {
            self.graph.forest.position(self.graph.forest.root_id()).x
        } else {
            pts.iter().sum::<f64>() / pts.len() as f64
        }
    }

    /// The six cerebral trees. Trees whose attachment cannot be determined
    /// (before ring reconstruction, with the artery absent) are omitted.
    pub fn cerebral_trees(&self) -> BTreeMap<(TreeKind, Side), CerebralTree> {
        let roles = match &self.cow {
            Some(c) => c.sides,
            None => derive_roles(self).sides,
        };
        let mut out = BTreeMap::new();
        for (slot, side) in [Side::Left, Side::Right].into_iter().enumerate() {
            let r = roles[slot];
            for kind in TreeKind::OUTWARD {
                let (attachment, ring_member) = match kind {
                    TreeKind::Pca => (r.pca_junction, r.p1),
                    TreeKind::Aca => (r.aca_junction, r.a1),
                    TreeKind::Mca => (r.terminus, None),
                };
                let Some(attachment) = attachment else {
                    continue;
                };
                let members: BTreeSet<EdgeId> = self
                    .edges_with_label(kind.label(side))
                    .into_iter()
                    .filter(|&e| Some(e) != ring_member && !self.graph.edge(e).dashed)
                    .collect();
                out.insert(
                    (kind, side),
                    build_tree(&self.graph, kind, side, attachment, &members),
                );
            }
        }
        out
    }

    /// Tree depth of every edge: the depth of its end node inside a
    /// cerebral tree, 0 for ring, inflow and other edges.
    pub fn edge_tree_depths(&self) -> HashMap<EdgeId, u32> {
        let mut out: HashMap<EdgeId, u32> = self.graph.edges.iter().map(|e| (e.id, 0)).collect();
        for tree in self.cerebral_trees().values() {
            for &e in &tree.edges {
                out.insert(e, tree.node_depth[&self.graph.edge(e).end]);
            }
        }
        out
    }

    /// Checks that every named label covers one connected edge set and
    /// every cerebral tree is rooted at its attachment.
    pub fn check_invariants(&self) -> Result<(), VesselError> {
        for label in ArteryLabel::NAMED {
            let set = self.edges_with_label(label);
            if set.len() > 1 && !self.connected(&set) {
                return Err(VesselError::InvariantViolation(format!(
                    "{label} is assigned to disconnected edges {set:?}"
                )));
            }
        }
        let roles = match &self.cow {
            Some(c) => c.sides,
            None => derive_roles(self).sides,
        };
        for tree in self.cerebral_trees().values() {
            let ring_member = match tree.kind {
                TreeKind::Pca => roles[tree.side as usize].p1,
                TreeKind::Aca => roles[tree.side as usize].a1,
                TreeKind::Mca => None,
            };
            let stray: Vec<EdgeId> = self
                .edges_with_label(tree.label())
                .into_iter()
                .filter(|e| {
                    Some(*e) != ring_member
                        && !self.graph.edge(*e).dashed
                        && !tree.edges.contains(e)
                })
                .collect();
            if !stray.is_empty() {
                return Err(VesselError::InvariantViolation(format!(
                    "{} edges {stray:?} are not reachable from its attachment {}",
                    tree.label(),
                    tree.attachment
                )));
            }
        }
        Ok(())
    }

    fn connected(&self, set: &[EdgeId]) -> bool {
        let ends: Vec<(NodeId, NodeId)> = set
            .iter()
            .map(|&e| {
                let edge = self.graph.edge(e);
                (edge.start, edge.end)
            })
            .collect();
        let mut reached = vec![false; set.len()];
        reached[0] = true;
        let mut nodes: BTreeSet<NodeId> = [ends[0].0, ends[0].1].into();
        let mut grew = true;
        while grew {
            grew = false;
            for (i, (a, b)) in ends.iter().enumerate() {
                if !reached[i] && (nodes.contains(a) || nodes.contains(b)) {
                    reached[i] = true;
                    nodes.insert(*a);
                    nodes.insert(*b);
                    grew = true;
                }
            }
        }
        reached.iter().all(|r| *r)
    }
}

fn build_tree(
    graph: &VesselGraph,
    kind: TreeKind,
    side: Side,
    attachment: NodeId,
    members: &BTreeSet<EdgeId>,
) -> CerebralTree {
    let mut node_depth = BTreeMap::new();
    let mut children: BTreeMap<NodeId, Vec<EdgeId>> = BTreeMap::new();
    let mut edges = Vec::new();
    node_depth.insert(attachment, 0);
    let mut stack = vec![attachment];
    while let Some(n) = stack.pop() {
        let kids: Vec<EdgeId> = graph
            .nodes
            .get(&n)
            .map(|node| {
                node.child_edges
                    .iter()
                    .copied()
                    .filter(|e| members.contains(e))
                    .collect()
            })
            .unwrap_or_default();
        let d = node_depth[&n];
        for &e in kids.iter().rev() {
            let end = graph.edge(e).end;
            node_depth.insert(end, d + 1);
            stack.push(end);
        }
        for &e in &kids {
            edges.push(e);
        }
        children.insert(n, kids);
    }
    // preorder edge list
    let mut pre = Vec::with_capacity(edges.len());
    let mut st: Vec<EdgeId> = children[&attachment].iter().rev().copied().collect();
    while let Some(e) = st.pop() {
        pre.push(e);
        let end = graph.edge(e).end;
        if let Some(k) = children.get(&end) {
            st.extend(k.iter().rev());
        }
    }
    CerebralTree {
        kind,
        side,
        attachment,
        edges: pre,
        node_depth,
        children,
    }
}
