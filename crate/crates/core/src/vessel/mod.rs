//! Artery-level model of a scan.
//!
//! Segment chains are contracted into [`ArteryEdge`]s between bifurcations
//! ([`contract_chains`]), labeled anatomically ([`classify_arteries`]) and
//! closed into the Circle of Willis ring ([`reconstruct_cow`]).

mod bends;
mod classify;
mod contract;
mod cow;
mod labels;
mod network;
mod overrides;

pub use bends::count_bends;
pub use classify::{
    classify_arteries, classify_arteries_partial, ClassificationFailure, ClassifyConfig,
};
pub use contract::contract_chains;
pub use cow::{reconstruct_cow, CowRing, SideRing};
pub use labels::{ArteryLabel, LabelParseError, Side, TreeKind};
pub use network::{CerebralTree, LabeledNetwork};
pub use overrides::{
    apply_label_overrides, parse_label_overrides, OverrideKey, OverrideParseError,
};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Vec3;
use crate::swc::{SegmentForest, SegmentId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Graph node id. Nodes backed by an SWC record reuse the record id;
/// synthetic ring junctions get ids above every record id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Directedness {
    TowardBrain,
    Bidirectional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArteryEdge {
    pub id: EdgeId,
    pub start: NodeId,
    pub end: NodeId,
    /// Records after `start` down to and including `end`; empty when dashed.
    pub segment_ids: Vec<SegmentId>,
    /// Chain-length-weighted mean of segment radii.
    pub mean_radius: f64,
    pub chain_length: f64,
    /// Length-weighted mean of step midpoints.
    pub centroid: Vec3,
    pub bend_count: Option<u32>,
    pub directedness: Directedness,
    /// Synthetic edge standing in for an artery missing from the data.
    pub dashed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphNode {
    pub id: NodeId,
    pub position: Vec3,
    pub synthetic: bool,
    /// Data-tree edge ending here (None for the root and synthetic nodes).
    pub parent_edge: Option<EdgeId>,
    /// Data-tree edges starting here, in SWC file order.
    pub child_edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonBinaryBifurcation {
    pub node_id: NodeId,
    pub degree: usize,
}

/// Contracted, unlabeled artery graph plus the forest it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct VesselGraph {
    pub(crate) forest: Arc<SegmentForest>,
    pub(crate) nodes: BTreeMap<NodeId, GraphNode>,
    pub(crate) edges: Vec<ArteryEdge>,
    pub(crate) warnings: Vec<NonBinaryBifurcation>,
}

impl VesselGraph {
    pub fn forest(&self) -> &SegmentForest {
        &self.forest
    }

    pub fn edges(&self) -> &[ArteryEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &ArteryEdge {
        &self.edges[id.0 as usize]
    }

    pub fn get_edge(&self, id: EdgeId) -> Option<&ArteryEdge> {
        self.edges.get(id.0 as usize)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &GraphNode> {
        self.nodes.values()
    }

    pub fn node(&self, id: NodeId) -> &GraphNode {
        &self.nodes[&id]
    }

    pub fn root(&self) -> NodeId {
        NodeId(self.forest.root_id())
    }

    pub fn warnings(&self) -> &[NonBinaryBifurcation] {
        &self.warnings
    }

    /// Data-tree children of an edge (edges starting at its end node).
    pub fn child_edges(&self, id: EdgeId) -> &[EdgeId] {
        let e = self.edge(id);
        if e.dashed {
            return &[];
        }
        &self.nodes[&e.end].child_edges
    }

    /// Data-tree parent of an edge.
    pub fn parent_edge(&self, id: EdgeId) -> Option<EdgeId> {
        let e = self.edge(id);
        if e.dashed {
            return None;
        }
        self.nodes[&e.start].parent_edge
    }

    /// Preorder list of `id` and all data-tree descendants.
    pub fn subtree(&self, id: EdgeId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(e) = stack.pop() {
            out.push(e);
            stack.extend(self.child_edges(e).iter().rev());
        }
        out
    }

    /// Unweighted mean of every segment position in the subtree below (and
    /// including) `id`.
    pub fn subtree_centroid(&self, id: EdgeId) -> Vec3 {
        let mut sum = Vec3::ZERO;
        let mut n = 0usize;
        for e in self.subtree(id) {
            for &s in &self.edge(e).segment_ids {
                sum = sum + self.forest.position(s);
                n += 1;
            }
        }
        if n == 0 {
            self.edge(id).centroid
        } else {
            sum * (1.0 / n as f64)
        }
    }

    /// Positions along the chain, starting at the start node.
    pub fn chain_points(&self, id: EdgeId) -> Vec<Vec3> {
        let e = self.edge(id);
        if e.dashed {
            return vec![self.nodes[&e.start].position, self.nodes[&e.end].position];
        }
        std::iter::once(self.nodes[&e.start].position)
            .chain(e.segment_ids.iter().map(|&s| self.forest.position(s)))
            .collect()
    }

    /// Number of data-tree edges between the root and `id` (root chains are 0).
    /// Dashed edges report `u32::MAX`.
    pub fn data_depth(&self, id: EdgeId) -> u32 {
        if self.edge(id).dashed {
            return u32::MAX;
        }
        let mut d = 0;
        let mut cur = id;
        while let Some(p) = self.parent_edge(cur) {
            d += 1;
            cur = p;
        }
        d
    }

    /// Edges starting at `node`, including dashed ring links.
    pub fn out_edges(&self, node: NodeId) -> impl Iterator<Item = &ArteryEdge> {
        self.edges.iter().filter(move |e| e.start == node)
    }

    pub(crate) fn next_node_id(&self) -> NodeId {
        let max_node = self.nodes.keys().next_back().map(|n| n.0).unwrap_or(0);
        let max_rec = self
            .forest
            .records()
            .iter()
            .map(|r| r.id)
            .max()
            .unwrap_or(0);
        NodeId(max_node.max(max_rec) + 1)
    }

    pub(crate) fn add_synthetic_node(&mut self, position: Vec3) -> NodeId {
        let id = self.next_node_id();
        self.nodes.insert(
            id,
            GraphNode {
                id,
                position,
                synthetic: true,
                parent_edge: None,
                child_edges: Vec::new(),
            },
        );
        id
    }

    pub(crate) fn add_dashed_edge(
        &mut self,
        start: NodeId,
        end: NodeId,
        mean_radius: f64,
    ) -> EdgeId {
        let id = EdgeId(self.edges.len() as u32);
        let (a, b) = (self.nodes[&start].position, self.nodes[&end].position);
        self.edges.push(ArteryEdge {
            id,
            start,
            end,
            segment_ids: Vec::new(),
            mean_radius,
            chain_length: 0.0,
            centroid: (a + b) * 0.5,
            bend_count: None,
            directedness: Directedness::Bidirectional,
            dashed: true,
        });
        id
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VesselError {
    #[error("chain of edge {0} has fewer than two distinct positions")]
    DegenerateChain(EdgeId),
    #[error("classification failed at stage {stage} near node {node_id}")]
    ClassificationFailed { stage: u8, node_id: NodeId },
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("label invariant violated: {0}")]
    InvariantViolation(String),
    #[error("cannot close the Circle of Willis; missing {0:?}")]
    CannotClose(Vec<String>),
}
