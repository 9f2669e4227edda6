//! Linear blood-flow model.
//!
//! The BA origin receives a flow of 1. Flow is constant along an artery and
//! divides at every bifurcation in proportion to
//! `mean_radius / (1 + depth)`, where `depth` is how far the child sits
//! above the Circle of Willis (0 for ring and inflow arteries). Blocked
//! arteries and everything downstream carry 0; the blocked share is lost,
//! not redistributed.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::render::Rgb;
use crate::vessel::{EdgeId, LabeledNetwork, VesselError};

/// What `depth` means in the child share.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeightMode {
    /// Tree depth of the child's far node.
    #[default]
    Depth,
    /// Height of the child's far node above the ring, in scan units.
    Metric,
}

impl std::fmt::Display for HeightMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HeightMode::Depth => "depth",
            HeightMode::Metric => "metric",
        })
    }
}

impl std::str::FromStr for HeightMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "depth" => Ok(HeightMode::Depth),
            "metric" => Ok(HeightMode::Metric),
            _ => Err(format!("unknown flow height mode {s:?} (depth, metric)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FlowAssignment {
    /// Every non-dashed edge.
    pub flows: BTreeMap<EdgeId, f64>,
    pub total_inflow: f64,
    pub blocked_edges: BTreeSet<EdgeId>,
}

impl FlowAssignment {
    pub fn flow(&self, e: EdgeId) -> Option<f64> {
        self.flows.get(&e).copied()
    }

    pub fn max_flow(&self) -> f64 {
        self.flows.values().copied().fold(0.0, f64::max)
    }
}

fn heights(network: &LabeledNetwork, mode: HeightMode) -> HashMap<EdgeId, f64> {
    match mode {
        HeightMode::Depth => network
            .edge_tree_depths()
            .into_iter()
            .map(|(e, d)| (e, d as f64))
            .collect(),
        HeightMode::Metric => {
            let g = network.graph();
            let ring_y = match network.cow() {
                Some(c) => g.node(c.ba_tip).position.y,
                None => g.node(g.root()).position.y,
            };
            let depths = network.edge_tree_depths();
            g.edges()
                .iter()
                .map(|e| {
                    let h = if depths[&e.id] == 0 {
                        0.0
                    } else {
                        (g.node(e.end).position.y - ring_y).max(0.0)
                    };
                    (e.id, h)
                })
                .collect()
        }
    }
}

pub fn compute_flow(
    network: &LabeledNetwork,
    blocked: &BTreeSet<EdgeId>,
    mode: HeightMode,
) -> Result<FlowAssignment, VesselError> {
    let g = network.graph();
    for b in blocked {
        if g.get_edge(*b).is_none() {
            return Err(VesselError::UnknownEdge(format!("e{}", b.0)));
        }
    }
    let height = heights(network, mode);
    let share = |e: EdgeId| g.edge(e).mean_radius / (1.0 + height[&e]);
    let mut flows = BTreeMap::new();
    let roots = g.node(g.root()).child_edges.clone();
    let mut stack: Vec<(EdgeId, f64)> = Vec::new();
    let split = |kids: &[EdgeId], parent_flow: f64, stack: &mut Vec<(EdgeId, f64)>| {
        let total: f64 = kids.iter().map(|&k| share(k)).sum();
        for &k in kids.iter().rev() {
            let f = if total > 0.0 {
                parent_flow * share(k) / total
            } else {
                parent_flow / kids.len() as f64
            };
            stack.push((k, f));
        }
    };
    split(&roots, 1.0, &mut stack);
    while let Some((e, incoming)) = stack.pop() {
        let f = if blocked.contains(&e) { 0.0 } else { incoming };
        flows.insert(e, f);
        split(g.child_edges(e), f, &mut stack);
    }
    Ok(FlowAssignment {
        flows,
        total_inflow: 1.0,
        blocked_edges: blocked.clone(),
    })
}

/// Linear ramp from white at zero flow to `base` at `scan_max_flow`.
pub fn flow_color(flow_value: f64, scan_max_flow: f64, base: Rgb) -> Rgb {
    let t = if scan_max_flow > 0.0 {
        (flow_value / scan_max_flow).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mix = |c: u8| (255.0 + (c as f64 - 255.0) * t).round() as u8;
    Rgb(mix(base.0), mix(base.1), mix(base.2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swc::parse_swc;
    use crate::vessel::{classify_arteries_partial, contract_chains, ClassifyConfig};

    fn net(text: &str) -> LabeledNetwork {
        let g = contract_chains(&parse_swc(text.as_bytes()).unwrap());
        classify_arteries_partial(&g, &ClassifyConfig::default()).0
    }

    #[test]
    fn chain_carries_everything() {
        let n = net("1 0 0 0 0 1 -1\n2 0 0 1 0 1 1\n3 0 0 2 0 1 2\n");
        let f = compute_flow(&n, &BTreeSet::new(), HeightMode::Depth).unwrap();
        assert_eq!(f.flows.values().copied().collect::<Vec<_>>(), vec![1.0]);
    }

    #[test]
    fn split_by_radius() {
        // stem 1-2, branches of radius 2 and 1
        let n = net("1 0 0 0 0 3 -1\n2 0 0 1 0 3 1\n3 0 -1 2 0 2 2\n4 0 1 2 0 1 2\n");
        let f = compute_flow(&n, &BTreeSet::new(), HeightMode::Depth).unwrap();
        assert_eq!(f.flow(EdgeId(0)), Some(1.0));
        assert!((f.flow(EdgeId(1)).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((f.flow(EdgeId(2)).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_split_is_half() {
        let n = net("1 0 0 0 0 3 -1\n2 0 0 1 0 3 1\n3 0 -1 2 0 1 2\n4 0 1 2 0 1 2\n");
        let f = compute_flow(&n, &BTreeSet::new(), HeightMode::Depth).unwrap();
        assert_eq!(f.flow(EdgeId(1)), Some(0.5));
        assert_eq!(f.flow(EdgeId(2)), Some(0.5));
    }

    #[test]
    fn blocked_branch_loses_its_share() {
        let n = net("1 0 0 0 0 3 -1\n2 0 0 1 0 3 1\n3 0 -1 2 0 1 2\n4 0 1 2 0 1 2\n");
        let f = compute_flow(&n, &[EdgeId(1)].into(), HeightMode::Depth).unwrap();
        assert_eq!(f.flow(EdgeId(1)), Some(0.0));
        assert_eq!(f.flow(EdgeId(2)), Some(0.5));
        assert!(compute_flow(&n, &[EdgeId(7)].into(), HeightMode::Depth).is_err());
    }

    #[test]
    fn ramp_endpoints_and_midpoint() {
        let base = Rgb(0x20, 0x60, 0xa0);
        assert_eq!(flow_color(0.0, 0.8, base), Rgb::WHITE);
        assert_eq!(flow_color(0.8, 0.8, base), base);
        let mid = flow_color(0.4, 0.8, base);
        let expect = |c: u8| ((255.0 + c as f64) / 2.0).round() as u8;
        assert_eq!(mid, Rgb(expect(0x20), expect(0x60), expect(0xa0)));
    }
}
