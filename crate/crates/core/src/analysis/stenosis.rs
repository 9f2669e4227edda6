//! Stenosis injection.

use std::collections::BTreeSet;

use crate::swc::{SegmentForest, SegmentId};
use crate::vessel::{contract_chains, EdgeId};

use super::AnalysisError;

/// Records of `edge` whose arc-length position lies in the central half of
/// the chain. Falls back to the record nearest the midpoint for chains too
/// coarse to have one there.
pub fn central_segments(
    forest: &SegmentForest,
    start: SegmentId,
    segment_ids: &[SegmentId],
) -> Vec<SegmentId> {
    let mut prev = forest.position(start);
    let mut arc = Vec::with_capacity(segment_ids.len());
    let mut s = 0.0;
    for &id in segment_ids {
        let p = forest.position(id);
        s += p.distance(prev);
        arc.push(s);
        prev = p;
    }
    let total = s;
    let inside: Vec<SegmentId> = segment_ids
        .iter()
        .zip(&arc)
        .filter(|(_, &a)| a >= 0.25 * total && a <= 0.75 * total)
        .map(|(id, _)| *id)
        .collect();
    if !inside.is_empty() {
        return inside;
    }
    let nearest = segment_ids
        .iter()
        .zip(&arc)
        .min_by(|a, b| {
            (a.1 - 0.5 * total)
                .abs()
                .total_cmp(&(b.1 - 0.5 * total).abs())
        })
        .map(|(id, _)| *id);
    nearest.into_iter().collect()
}

/// Narrows the middle of an artery: radii over the central 50% of the
/// chain's length are multiplied by `1 - severity`. Edge ids refer to the
/// contracted forest. Positions and topology are untouched.
pub fn inject_stenosis(
    forest: &SegmentForest,
    target: EdgeId,
    severity: f64,
) -> Result<SegmentForest, AnalysisError> {
    if !(severity > 0.0 && severity < 1.0) {
        return Err(AnalysisError::SeverityOutOfRange(severity));
    }
    let graph = contract_chains(forest);
    let edge = graph
        .get_edge(target)
        .ok_or(AnalysisError::UnknownEdge(target))?;
    let hit: BTreeSet<SegmentId> = central_segments(forest, edge.start.0, &edge.segment_ids)
        .into_iter()
        .collect();
    let keep = 1.0 - severity;
    Ok(forest.map_records(|r| {
        let mut r = r.clone();
        if hit.contains(&r.id) {
            r.radius *= keep;
        }
        r
    }))
}
