//! Circle of Willis ring roles and reconstruction.
//!
//! Per side the ring visits five junctions, from the basilar tip outward and
//! back toward the midline:
//!
//! ```text
//! BA tip -P1(PCA)- PCA junction -PComm- IC junction -IC terminal- carotid terminus -A1(ACA)- ACA junction
//! ```
//!
//! and the two ACA junctions are joined by the A. Comm. Missing members are
//! inserted as dashed edges so the ring always closes.

use std::collections::BTreeSet;

use super::{
    ArteryLabel, Directedness, EdgeId, LabeledNetwork, NodeId, Side, VesselError, VesselGraph,
};

/// Ring members for one hemisphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SideRing {
    /// Basilar tip to PCA junction (labeled PCA).
    pub p1: Option<EdgeId>,
    pub pcomm: Option<EdgeId>,
    /// IC junction to carotid terminus (labeled IC).
    pub ic_terminal: Option<EdgeId>,
    /// Descending carotid chain below the IC junction.
    pub ic_descent: Option<EdgeId>,
    /// Carotid terminus to ACA junction (labeled ACA).
    pub a1: Option<EdgeId>,
    pub pca_junction: Option<NodeId>,
    pub ic_junction: Option<NodeId>,
    pub terminus: Option<NodeId>,
    pub aca_junction: Option<NodeId>,
}

/// Reconstructed ring: every junction known, members present or dashed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CowRing {
    pub ba: EdgeId,
    pub ba_tip: NodeId,
    pub acomm: EdgeId,
    /// Indexed `[left, right]`.
    pub sides: [SideRing; 2],
    /// Closed cycle: P1_L, PComm_L, IC-terminal_L, A1_L, AComm, A1_R,
    /// IC-terminal_R, PComm_R, P1_R (absent zero-length links skipped).
    pub cycle: Vec<EdgeId>,
}

impl CowRing {
    pub fn side(&self, side: Side) -> &SideRing {
        match side {
            Side::Right => &self.sides[1],
            _ => &self.sides[0],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct RingRoles {
    pub ba: Option<EdgeId>,
    pub ba_tip: Option<NodeId>,
    pub acomm: Option<EdgeId>,
    pub sides: [SideRing; 2],
}

fn shallowest(graph: &VesselGraph, edges: &[EdgeId]) -> Option<EdgeId> {
    edges
        .iter()
        .copied()
        .min_by_key(|&e| (graph.data_depth(e), e))
}

/// Derives ring roles from labels and data-tree structure.
pub(crate) fn derive_roles(net: &LabeledNetwork) -> RingRoles {
    let g = &net.graph;
    let with = |l: ArteryLabel| net.edges_with_label(l);
    let mut roles = RingRoles::default();

    let ba_edges = with(ArteryLabel::Ba);
    roles.ba = ba_edges
        .iter()
        .copied()
        .find(|&e| {
            !g.child_edges(e)
                .iter()
                .any(|c| net.label(*c) == Some(ArteryLabel::Ba))
        })
        .or_else(|| ba_edges.first().copied());
    roles.ba_tip = roles.ba.map(|e| g.edge(e).end);
    roles.acomm = with(ArteryLabel::AComm).first().copied();

    for (slot, side) in [Side::Left, Side::Right].into_iter().enumerate() {
        let mut r = SideRing::default();
        let pca = with(ArteryLabel::Pca(side));
        let pcomm = with(ArteryLabel::PComm(side));
        let ic = with(ArteryLabel::Ic(side));
        let mca = with(ArteryLabel::Mca(side));
        let aca = with(ArteryLabel::Aca(side));

        if let Some(tip) = roles.ba_tip {
            r.p1 = pca.iter().copied().find(|&e| g.edge(e).start == tip);
        }
        r.pca_junction =
            r.p1.map(|e| g.edge(e).end)
                .or_else(|| shallowest(g, &pca).map(|e| g.edge(e).start));

        r.pcomm = r
            .pca_junction
            .and_then(|p| pcomm.iter().copied().find(|&e| g.edge(e).start == p))
            .or_else(|| shallowest(g, &pcomm));
        if let Some(pc) = r.pcomm {
            if r.pca_junction.is_none() {
                r.pca_junction = Some(g.edge(pc).start);
            }
            r.ic_junction = Some(g.edge(pc).end);
        }
        if r.ic_junction.is_none() {
            r.ic_junction = shallowest(g, &ic).map(|e| g.edge(e).start);
        }

        if let Some(icn) = r.ic_junction {
            let at_junction: Vec<EdgeId> = ic
                .iter()
                .copied()
                .filter(|&e| g.edge(e).start == icn)
                .collect();
            let feeds_brain = |e: EdgeId| {
                let edge = g.edge(e);
                edge.dashed
                    || g.out_edges(edge.end).any(|o| {
                        matches!(
                            net.label(o.id),
                            Some(ArteryLabel::Mca(_) | ArteryLabel::Aca(_))
                        )
                    })
            };
            r.ic_terminal = at_junction.iter().copied().find(|&e| feeds_brain(e));
            r.ic_descent = at_junction
                .iter()
                .copied()
                .find(|&e| Some(e) != r.ic_terminal && !g.edge(e).dashed);
        }

        r.terminus = r
            .ic_terminal
            .map(|e| g.edge(e).end)
            .or_else(|| shallowest(g, &mca).map(|e| g.edge(e).start));
        r.a1 = r
            .terminus
            .and_then(|t| aca.iter().copied().find(|&e| g.edge(e).start == t));
        r.aca_junction =
            r.a1.map(|e| g.edge(e).end)
                .or_else(|| shallowest(g, &aca).map(|e| g.edge(e).start));

        roles.sides[slot] = r;
    }
    roles
}

fn ring_label(member: usize, side: Side) -> ArteryLabel {
    match member {
        0 => ArteryLabel::Pca(side),
        1 => ArteryLabel::PComm(side),
        2 => ArteryLabel::Ic(side),
        _ => ArteryLabel::Aca(side),
    }
}

/// Closes the Circle of Willis.
///
/// A dashed bidirectional A. Comm. is inserted between the two ACA
/// junctions, and every other expected ring member absent from the data is
/// inserted dashed as well (junctions missing entirely become synthetic
/// nodes). Existing ring members become bidirectional. Idempotent.
pub fn reconstruct_cow(network: &LabeledNetwork) -> Result<LabeledNetwork, VesselError> {
    let mut net = network.clone();
    let roles = derive_roles(&net);
    let (Some(ba), Some(ba_tip)) = (roles.ba, roles.ba_tip) else {
        return Err(VesselError::CannotClose(vec!["BA".into()]));
    };

    let mut sides = roles.sides;
    let mut inserted: Vec<EdgeId> = Vec::new();
    for (slot, side) in [Side::Left, Side::Right].into_iter().enumerate() {
        let r = &mut sides[slot];
        // fill missing junctions, anchored on the nearest known one
        let mut known = ba_tip;
        let mut slots = [
            &mut r.pca_junction,
            &mut r.ic_junction,
            &mut r.terminus,
            &mut r.aca_junction,
        ];
        for j in slots.iter_mut() {
            match **j {
                Some(n) => known = n,
                None => {
                    let pos = net.graph.node(known).position;
                    let n = net.graph.add_synthetic_node(pos);
                    **j = Some(n);
                    known = n;
                }
            }
        }
        let junctions = [
            ba_tip,
            r.pca_junction.unwrap(),
            r.ic_junction.unwrap(),
            r.terminus.unwrap(),
            r.aca_junction.unwrap(),
        ];
        let members = [&mut r.p1, &mut r.pcomm, &mut r.ic_terminal, &mut r.a1];
        for (i, member) in members.into_iter().enumerate() {
            if member.is_none() && junctions[i] != junctions[i + 1] {
                let e = net
                    .graph
                    .add_dashed_edge(junctions[i], junctions[i + 1], 0.0);
                net.labels.insert(e, ring_label(i, side));
                inserted.push(e);
                *member = Some(e);
            }
        }
    }

    let acomm = match roles.acomm {
        Some(e) => e,
        None => {
            let (a_l, a_r) = (
                sides[0].aca_junction.unwrap(),
                sides[1].aca_junction.unwrap(),
            );
            let e = net.graph.add_dashed_edge(a_l, a_r, 0.0);
            net.labels.insert(e, ArteryLabel::AComm);
            inserted.push(e);
            e
        }
    };

    let [l, r] = sides;
    let cycle: Vec<EdgeId> = [
        l.p1,
        l.pcomm,
        l.ic_terminal,
        l.a1,
        Some(acomm),
        r.a1,
        r.ic_terminal,
        r.pcomm,
        r.p1,
    ]
    .into_iter()
    .flatten()
    .collect();

    check_closed(&net.graph, &cycle).map_err(|_| {
        let missing = ArteryLabel::NAMED
            .iter()
            .filter(|l| net.edges_with_label(**l).is_empty())
            .map(ToString::to_string)
            .collect();
        VesselError::CannotClose(missing)
    })?;

    // Dashed widths: mean of the ring neighbours that carry data.
    let fallback = {
        let solid: Vec<f64> = net
            .graph
            .edges
            .iter()
            .filter(|e| !e.dashed)
            .map(|e| e.mean_radius)
            .collect();
        if solid.is_empty() {
            1.0
        } else {
            solid.iter().sum::<f64>() / solid.len() as f64
        }
    };
    for &e in &inserted {
        let pos = cycle.iter().position(|&c| c == e).unwrap();
        let n = cycle.len();
        let neighbours = [cycle[(pos + n - 1) % n], cycle[(pos + 1) % n]];
        let solid: Vec<f64> = neighbours
            .iter()
            .map(|&c| net.graph.edge(c))
            .filter(|c| !c.dashed)
            .map(|c| c.mean_radius)
            .collect();
        net.graph.edges[e.0 as usize].mean_radius = if solid.is_empty() {
            fallback
        } else {
            solid.iter().sum::<f64>() / solid.len() as f64
        };
    }
    for &e in &cycle {
        net.graph.edges[e.0 as usize].directedness = Directedness::Bidirectional;
    }

    net.cow = Some(CowRing {
        ba,
        ba_tip,
        acomm,
        sides,
        cycle,
    });
    Ok(net)
}

/// Consecutive cycle edges must share a node and the walk must return to
/// its start.
fn check_closed(graph: &VesselGraph, cycle: &[EdgeId]) -> Result<(), ()> {
    if cycle.len() < 2 {
        return Err(());
    }
    let ends = |e: EdgeId| {
        let edge = graph.edge(e);
        (edge.start, edge.end)
    };
    let (s0, e0) = ends(cycle[0]);
    for start in [s0, e0] {
        let mut at = start;
        let mut ok = true;
        let mut visited = BTreeSet::new();
        for &c in cycle {
            let (a, b) = ends(c);
            at = if a == at {
                b
            } else if b == at {
                a
            } else {
                ok = false;
                break;
            };
            if !visited.insert(at) {
                ok = at == start && c == *cycle.last().unwrap();
                if !ok {
                    break;
                }
            }
        }
        if ok && at == start {
            return Ok(());
        }
    }
    Err(())
}
