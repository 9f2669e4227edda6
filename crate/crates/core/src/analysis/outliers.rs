//! Width outliers relative to the parent artery.

use serde::Serialize;

use crate::vessel::{EdgeId, LabeledNetwork};

/// Shortest window, as a fraction of the chain length, over which a local
/// narrowing or widening is averaged.
pub const WINDOW_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutlierKind {
    Narrowing,
    Widening,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Outlier {
    pub edge_id: EdgeId,
    pub kind: OutlierKind,
    pub taper_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct OutlierReport {
    /// Most deviant first.
    pub outliers: Vec<Outlier>,
}

impl OutlierReport {
    pub fn narrowings(&self) -> impl Iterator<Item = &Outlier> {
        self.outliers
            .iter()
            .filter(|o| o.kind == OutlierKind::Narrowing)
    }
}

/// Length-weighted mean radius of the narrowest and widest contiguous
/// windows spanning at least `WINDOW_FRACTION` of the chain.
fn window_extremes(steps: &[(f64, f64)]) -> Option<(f64, f64)> {
    let total: f64 = steps.iter().map(|s| s.0).sum();
    if total <= 0.0 {
        return None;
    }
    let need = WINDOW_FRACTION * total;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..steps.len() {
        let (mut len, mut area) = (0.0, 0.0);
        for &(l, r) in &steps[i..] {
            len += l;
            area += l * r;
            if len >= need {
                let mean = area / len;
                lo = lo.min(mean);
                hi = hi.max(mean);
                break;
            }
        }
    }
    lo.is_finite().then_some((lo, hi))
}

/// Flags arteries that are abruptly narrower or wider than their parent.
///
/// For every non-root, non-dashed edge the narrowest (widest) window mean
/// is divided by the parent's mean radius; ratios below
/// `narrowing_threshold` (above `widening_threshold`) are reported. A focal
/// lesion covering part of an edge barely moves the whole-edge mean, so the
/// window is what makes a central stenosis stand out.
pub fn detect_width_outliers(
    network: &LabeledNetwork,
    narrowing_threshold: f64,
    widening_threshold: f64,
) -> OutlierReport {
    let g = network.graph();
    let forest = g.forest();
    let mut outliers = Vec::new();
    for e in g.edges() {
        if e.dashed {
            continue;
        }
        let Some(parent) = g.parent_edge(e.id) else {
            continue;
        };
        let parent_r = g.edge(parent).mean_radius;
        let mut prev = g.node(e.start).position;
        let steps: Vec<(f64, f64)> = e
            .segment_ids
            .iter()
            .map(|&s| {
                let r = forest.record(s);
                let l = r.position.distance(prev);
                prev = r.position;
                (l, r.radius)
            })
            .collect();
        let Some((lo, hi)) = window_extremes(&steps) else {
            continue;
        };
        let (narrow, wide) = (lo / parent_r, hi / parent_r);
        if narrow < narrowing_threshold {
            outliers.push(Outlier {
                edge_id: e.id,
                kind: OutlierKind::Narrowing,
                taper_ratio: narrow,
            });
        }
        if wide > widening_threshold {
            outliers.push(Outlier {
                edge_id: e.id,
                kind: OutlierKind::Widening,
                taper_ratio: wide,
            });
        }
    }
    outliers.sort_by(|a, b| {
        b.taper_ratio
            .ln()
            .abs()
            .total_cmp(&a.taper_ratio.ln().abs())
            .then(a.edge_id.cmp(&b.edge_id))
    });
    OutlierReport { outliers }
}
