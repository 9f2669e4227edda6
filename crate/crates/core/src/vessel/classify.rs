//! Heuristic anatomical labeling of a contracted scan.
//!
//! Stages, each keyed to the data tree rooted at the basilar origin:
//!
//! 1. The root chain up to the first bifurcation is the BA.
//! 2. Each BA branch (side from its subtree centroid) is walked to its next
//!    bifurcation, which splits into the PCA (more posterior subtree) and the
//!    P. Comm. (more anterior).
//! 3. The P. Comm. ends at the IC junction; the IC is the child chain whose
//!    far end is lowest and drops more than `ic_min_drop`.
//! 4. The other IC-junction child leads to the carotid terminus, which splits
//!    into ACA (medial) and MCA (lateral).
//!
//! Everything not reached is `Unlabeled(side, index)`.

use std::collections::BTreeMap;

use super::{ArteryLabel, EdgeId, LabeledNetwork, NodeId, Side, VesselError, VesselGraph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyConfig {
    /// IC detection threshold as a fraction of the scan's vertical extent.
    pub ic_min_drop_fraction: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            ic_min_drop_fraction: 0.3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassificationFailure {
    pub stage: u8,
    pub node_id: NodeId,
    pub side: Option<Side>,
}

impl From<ClassificationFailure> for VesselError {
    fn from(f: ClassificationFailure) -> Self {
        VesselError::ClassificationFailed {
            stage: f.stage,
            node_id: f.node_id,
        }
    }
}

/// Labels the graph, failing on the first stage that cannot complete.
pub fn classify_arteries(
    graph: &VesselGraph,
    config: &ClassifyConfig,
) -> Result<LabeledNetwork, VesselError> {
    let (net, failures) = classify_arteries_partial(graph, config);
    match failures.first() {
        Some(f) => Err((*f).into()),
        None => Ok(net),
    }
}

struct Labeler<'a> {
    graph: &'a VesselGraph,
    labels: BTreeMap<EdgeId, ArteryLabel>,
    failures: Vec<ClassificationFailure>,
    midline: f64,
}

impl Labeler<'_> {
    fn label_subtree(&mut self, root: EdgeId, label: ArteryLabel) {
        for e in self.graph.subtree(root) {
            self.labels.insert(e, label);
        }
    }

    fn side_of(&self, e: EdgeId) -> Side {
        if self.graph.subtree_centroid(e).x < self.midline {
            Side::Left
        } else {
            Side::Right
        }
    }

    fn fail(&mut self, stage: u8, node_id: NodeId, side: Option<Side>) {
        self.failures.push(ClassificationFailure {
            stage,
            node_id,
            side,
        });
    }

    /// Stages 2-4 for one BA branch.
    fn label_side(&mut self, p1: EdgeId, side: Side, ic_min_drop: f64) {
        let g = self.graph;
        self.labels.insert(p1, ArteryLabel::Pca(side));
        let junction = g.edge(p1).end;
        let kids = g.child_edges(p1).to_vec();
        if kids.len() < 2 {
            self.fail(2, junction, Some(side));
            return;
        }
        let depth = |e: EdgeId| g.subtree_centroid(e).z;
        let pca = *kids
            .iter()
            .min_by(|a, b| depth(**a).total_cmp(&depth(**b)))
            .unwrap();
        let pcomm = *kids
            .iter()
            .filter(|e| **e != pca)
            .max_by(|a, b| depth(**a).total_cmp(&depth(**b)))
            .unwrap();
        self.label_subtree(pca, ArteryLabel::Pca(side));

        // stage 3
        let ic_junction = g.edge(pcomm).end;
        let junction_y = g.node(ic_junction).position.y;
        let ic = g
            .child_edges(pcomm)
            .iter()
            .copied()
            .min_by(|a, b| {
                let ya = g.node(g.edge(*a).end).position.y;
                let yb = g.node(g.edge(*b).end).position.y;
                ya.total_cmp(&yb)
            })
            .filter(|&e| junction_y - g.node(g.edge(e).end).position.y > ic_min_drop);
        let Some(ic) = ic else {
            self.fail(3, ic_junction, Some(side));
            return;
        };
        self.labels.insert(pcomm, ArteryLabel::PComm(side));
        self.label_subtree(ic, ArteryLabel::Ic(side));

        // stage 4
        let rest: Vec<EdgeId> = g
            .child_edges(pcomm)
            .iter()
            .copied()
            .filter(|e| *e != ic)
            .collect();
        let (terminus, branches) = match rest.as_slice() {
            [] => {
                self.fail(4, ic_junction, Some(side));
                return;
            }
            [terminal] => {
                self.labels.insert(*terminal, ArteryLabel::Ic(side));
                (g.edge(*terminal).end, g.child_edges(*terminal).to_vec())
            }
            // terminus directly at the IC junction
            _ => (ic_junction, rest.clone()),
        };
        if branches.len() < 2 {
            self.fail(4, terminus, Some(side));
            return;
        }
        let spread = |e: EdgeId| (g.subtree_centroid(e).x - self.midline).abs();
        let aca = *branches
            .iter()
            .min_by(|a, b| spread(**a).total_cmp(&spread(**b)))
            .unwrap();
        let mca = *branches
            .iter()
            .filter(|e| **e != aca)
            .max_by(|a, b| spread(**a).total_cmp(&spread(**b)))
            .unwrap();
        self.label_subtree(aca, ArteryLabel::Aca(side));
        self.label_subtree(mca, ArteryLabel::Mca(side));
    }
}

/// Labels as much of the graph as the heuristic can reach and reports every
/// stage that failed. Unreached subtrees are `Unlabeled`.
pub fn classify_arteries_partial(
    graph: &VesselGraph,
    config: &ClassifyConfig,
) -> (LabeledNetwork, Vec<ClassificationFailure>) {
    let forest = graph.forest();
    let (lo, hi) = forest
        .records()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.position.y), hi.max(r.position.y))
        });
    let ic_min_drop = config.ic_min_drop_fraction * (hi - lo);

    let root = graph.root();
    let root_kids = graph.node(root).child_edges.clone();
    let mut lab = Labeler {
        graph,
        labels: BTreeMap::new(),
        failures: Vec::new(),
        midline: forest.position(root.0).x,
    };

    'stages: {
        let [ba] = root_kids.as_slice() else {
            lab.fail(1, root, None);
            break 'stages;
        };
        let ba = *ba;
        let tip = graph.edge(ba).end;
        let branches = graph.child_edges(ba).to_vec();
        if branches.len() < 2 {
            lab.fail(1, tip, None);
            break 'stages;
        }
        lab.labels.insert(ba, ArteryLabel::Ba);
        let ba_edge = graph.edge(ba);
        lab.midline = ba_edge
            .segment_ids
            .iter()
            .map(|&s| forest.position(s).x)
            .sum::<f64>()
            / ba_edge.segment_ids.len() as f64;

        let mut by_lateral = branches.clone();
        by_lateral.sort_by(|a, b| {
            graph
                .subtree_centroid(*a)
                .x
                .total_cmp(&graph.subtree_centroid(*b).x)
        });
        // extreme branches by lateral order; any middle ones stay unlabeled
        let (left, right) = (by_lateral[0], by_lateral[by_lateral.len() - 1]);
        lab.label_side(left, Side::Left, ic_min_drop);
        lab.label_side(right, Side::Right, ic_min_drop);
    }

    // Unreached subtrees.
    let mut counters: BTreeMap<Side, u32> = BTreeMap::new();
    for e in graph.edges() {
        if lab.labels.contains_key(&e.id) {
            continue;
        }
        let parent_label = graph
            .parent_edge(e.id)
            .and_then(|p| lab.labels.get(&p).copied());
        let label = match parent_label {
            Some(l @ ArteryLabel::Unlabeled(..)) => l,
            _ => {
                let side = if lab.labels.is_empty() {
                    Side::Center
                } else {
                    lab.side_of(e.id)
                };
                let idx = counters.entry(side).or_insert(0);
                let l = ArteryLabel::Unlabeled(side, *idx);
                *idx += 1;
                l
            }
        };
        lab.labels.insert(e.id, label);
    }

    let failures = lab.failures;
    (LabeledNetwork::new(graph.clone(), lab.labels), failures)
}
