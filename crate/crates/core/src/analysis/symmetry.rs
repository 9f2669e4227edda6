//! Left/right comparison of the paired cerebral trees.

use serde::Serialize;

use crate::vessel::{ArteryLabel, LabeledNetwork, Side, TreeKind};

/// One left/right pair. Counts are `None` for a tree absent from the scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairSymmetry {
    pub pair: &'static str,
    pub depth_l: Option<u32>,
    pub depth_r: Option<u32>,
    pub leaves_l: Option<u32>,
    pub leaves_r: Option<u32>,
    pub depth_delta: Option<u32>,
    pub leaf_delta: Option<u32>,
    /// `leaf_delta / max(1, leaves_l + leaves_r)`.
    pub asymmetry_index: Option<f64>,
    /// Labels of the absent trees.
    pub missing: Vec<ArteryLabel>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    /// PCA, ACA, MCA.
    pub pairs: Vec<PairSymmetry>,
}

impl SymmetryReport {
    pub fn pair(&self, kind: TreeKind) -> &PairSymmetry {
        &self.pairs[kind as usize]
    }
}

pub fn symmetry_metrics(network: &LabeledNetwork) -> SymmetryReport {
    let trees = network.cerebral_trees();
    let pairs = TreeKind::OUTWARD
        .iter()
        .map(|&kind| {
            let stats = |side: Side| {
                trees
                    .get(&(kind, side))
                    .filter(|t| !t.edges.is_empty())
                    .map(|t| (t.max_depth(), t.leaf_count() as u32))
            };
            let (l, r) = (stats(Side::Left), stats(Side::Right));
            let missing = [(Side::Left, l), (Side::Right, r)]
                .into_iter()
                .filter(|(_, s)| s.is_none())
                .map(|(side, _)| kind.label(side))
                .collect();
            let both = l.zip(r);
            PairSymmetry {
                pair: kind.name(),
                depth_l: l.map(|s| s.0),
                depth_r: r.map(|s| s.0),
                leaves_l: l.map(|s| s.1),
                leaves_r: r.map(|s| s.1),
                depth_delta: both.map(|(a, b)| a.0.abs_diff(b.0)),
                leaf_delta: both.map(|(a, b)| a.1.abs_diff(b.1)),
                asymmetry_index: both
                    .map(|(a, b)| a.1.abs_diff(b.1) as f64 / (a.1 + b.1).max(1) as f64),
                missing,
            }
        })
        .collect();
    SymmetryReport { pairs }
}
