use std::collections::HashMap;

use crate::vessel::{EdgeId, LabeledNetwork};

use super::LayoutConfig;

/// Radius range for width scaling: the corpus range when configured,
/// otherwise min and max over the scan's non-dashed edges.
pub fn radius_range(network: &LabeledNetwork, config: &LayoutConfig) -> [f64; 2] {
    if let Some(r) = config.corpus_radius_range {
        return r;
    }
    let (lo, hi) = network
        .edges()
        .iter()
        .filter(|e| !e.dashed)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| {
            (lo.min(e.mean_radius), hi.max(e.mean_radius))
        });
    if lo.is_finite() {
        [lo, hi]
    } else {
        [1.0, 1.0]
    }
}

/// Linear map from mean radius to stroke width. A degenerate range maps
/// every edge to the middle stroke; values outside a corpus range clamp.
pub fn scale_widths(
    network: &LabeledNetwork,
    config: &LayoutConfig,
) -> ([f64; 2], HashMap<EdgeId, f64>) {
    let [lo, hi] = radius_range(network, config);
    let (smin, smax) = (config.stroke_min, config.stroke_max);
    let widths = network
        .edges()
        .iter()
        .map(|e| {
            let w = if hi > lo {
                smin + (e.mean_radius - lo) / (hi - lo) * (smax - smin)
            } else {
                0.5 * (smin + smax)
            };
            (e.id, w.clamp(smin, smax))
        })
        .collect();
    ([lo, hi], widths)
}
