//! Manual label overrides.
//!
//! Override files are flat `key = LABEL` text. A key is an edge id (`12` or
//! `e12`) or a segment id (`s345`), which resolves to the edge containing
//! that SWC record. `#` starts a comment line.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::swc::SegmentId;

use super::{ArteryLabel, EdgeId, LabeledNetwork, VesselError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OverrideKey {
    Edge(EdgeId),
    Segment(SegmentId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("label overrides line {line_no}: {reason}")]
pub struct OverrideParseError {
    pub line_no: usize,
    pub reason: String,
}

pub fn parse_label_overrides(
    text: &str,
) -> Result<BTreeMap<OverrideKey, ArteryLabel>, OverrideParseError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |reason: String| OverrideParseError { line_no, reason };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err("expected `key = LABEL`".into()))?;
        let key = key.trim();
        let parse_id = |raw: &str| -> Result<u64, OverrideParseError> {
            raw.parse().map_err(|_| err(format!("bad id {key:?}")))
        };
        let key = if let Some(rest) = key.strip_prefix('s') {
            OverrideKey::Segment(parse_id(rest)?)
        } else {
            let raw = key.strip_prefix('e').unwrap_or(key);
            let id = parse_id(raw)?;
            OverrideKey::Edge(EdgeId(
                u32::try_from(id).map_err(|_| err(format!("edge id {id} out of range")))?,
            ))
        };
        let label: ArteryLabel = value.trim().parse().map_err(|e| err(format!("{e}")))?;
        out.insert(key, label);
    }
    Ok(out)
}

/// Applies overrides on top of heuristic labels and re-validates.
///
/// Changing labels invalidates any reconstructed ring; run
/// [`super::reconstruct_cow`] again afterwards.
pub fn apply_label_overrides(
    network: &LabeledNetwork,
    overrides: &BTreeMap<OverrideKey, ArteryLabel>,
) -> Result<LabeledNetwork, VesselError> {
    if overrides.is_empty() {
        return Ok(network.clone());
    }
    let g = network.graph();
    let mut segment_edge: BTreeMap<SegmentId, EdgeId> = BTreeMap::new();
    for e in g.edges() {
        for &s in &e.segment_ids {
            segment_edge.insert(s, e.id);
        }
    }
    let mut net = network.clone();
    for (key, label) in overrides {
        let edge = match *key {
            OverrideKey::Edge(e) => g
                .get_edge(e)
                .map(|edge| edge.id)
                .ok_or_else(|| VesselError::UnknownEdge(format!("e{}", e.0)))?,
            OverrideKey::Segment(s) => *segment_edge
                .get(&s)
                .ok_or_else(|| VesselError::UnknownEdge(format!("s{s}")))?,
        };
        net.labels.insert(edge, *label);
    }
    if net.labels != network.labels {
        net.cow = None;
    }
    net.check_invariants()?;
    Ok(net)
}
