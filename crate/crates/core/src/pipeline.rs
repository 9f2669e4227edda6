//! End-to-end helpers: scan text to labeled network to scene.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::config::Settings;
use crate::flow::FlowAssignment;
use crate::layout::{compose_scene, LayoutError, LayoutScene};
use crate::render::{color_for_edge, ColorMode, ColorScheme};
use crate::swc::{apply_axis_map, parse_swc, SegmentForest, SwcError};
use crate::vessel::{
    apply_label_overrides, classify_arteries, classify_arteries_partial, contract_chains,
    parse_label_overrides, reconstruct_cow, ArteryLabel, LabeledNetwork, OverrideKey,
    OverrideParseError, VesselError,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Parse(#[from] SwcError),
    #[error(transparent)]
    Overrides(#[from] OverrideParseError),
    #[error(transparent)]
    Vessel(#[from] VesselError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

impl PipelineError {
    /// True when the scan parsed but could not be labeled or closed.
    pub fn is_classification_failure(&self) -> bool {
        matches!(
            self,
            PipelineError::Vessel(
                VesselError::ClassificationFailed { .. }
                    | VesselError::CannotClose(_)
                    | VesselError::InvariantViolation(_)
            ) | PipelineError::Layout(LayoutError::Vessel(
                VesselError::ClassificationFailed { .. }
                    | VesselError::CannotClose(_)
                    | VesselError::InvariantViolation(_)
            ))
        )
    }
}

pub type Overrides = BTreeMap<OverrideKey, ArteryLabel>;

pub fn load_forest(text: &[u8], settings: &Settings) -> Result<SegmentForest, SwcError> {
    Ok(apply_axis_map(&parse_swc(text)?, &settings.axis_convention))
}

pub fn load_overrides(text: &str) -> Result<Overrides, OverrideParseError> {
    parse_label_overrides(text)
}

/// Contracts, labels and closes the ring. With overrides, stages the
/// heuristic cannot finish are left to the overrides.
pub fn build_network(
    forest: &SegmentForest,
    settings: &Settings,
    overrides: &Overrides,
) -> Result<LabeledNetwork, VesselError> {
    let graph = contract_chains(forest);
    let labeled = if overrides.is_empty() {
        classify_arteries(&graph, &settings.classify)?
    } else {
        let (partial, _) = classify_arteries_partial(&graph, &settings.classify);
        apply_label_overrides(&partial, overrides)?
    };
    reconstruct_cow(&labeled)
}

pub fn build_scene(
    forest: &SegmentForest,
    scan_id: &str,
    settings: &Settings,
    overrides: &Overrides,
) -> Result<(LabeledNetwork, LayoutScene), PipelineError> {
    let net = build_network(forest, settings, overrides)?;
    let scene = compose_scene(&net, &settings.layout, scan_id)?;
    Ok((net, scene))
}

/// Copies flow values into the scene and recolors edges with the flow
/// ramp. Edges without a value (dashed ring members) get zero flow.
pub fn apply_flow(scene: &mut LayoutScene, flow: &FlowAssignment, scheme: &ColorScheme) {
    let max = flow.max_flow();
    let scheme = ColorScheme {
        mode: ColorMode::Flow,
        ..scheme.clone()
    };
    for e in &mut scene.edge_paths {
        let f = flow.flow(e.edge_id).unwrap_or(0.0);
        e.flow = Some(f);
        e.color = color_for_edge(e.label, &scheme, Some((f, max)));
    }
}

/// Resolves `e12`, `12` or a label such as `MCA_R` to an edge. A label
/// names its shallowest edge in the data tree, the root of that artery.
pub fn resolve_edge(
    network: &LabeledNetwork,
    reference: &str,
) -> Result<crate::vessel::EdgeId, VesselError> {
    let r = reference.trim();
    let g = network.graph();
    let digits = r.strip_prefix('e').unwrap_or(r);
    if let Ok(n) = digits.parse::<u32>() {
        let id = crate::vessel::EdgeId(n);
        return g
            .get_edge(id)
            .map(|e| e.id)
            .ok_or_else(|| VesselError::UnknownEdge(r.to_string()));
    }
    let label: ArteryLabel = r
        .parse()
        .map_err(|_| VesselError::UnknownEdge(r.to_string()))?;
    network
        .edges_with_label(label)
        .into_iter()
        .filter(|&e| !g.edge(e).dashed)
        .min_by_key(|&e| (g.data_depth(e), e))
        .ok_or_else(|| VesselError::UnknownEdge(r.to_string()))
}
