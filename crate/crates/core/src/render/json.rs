//! The versioned JSON scene document consumed by the dashboard.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{CubicBezier, Point2};
use crate::layout::{EdgePath, LayoutConfig, LayoutScene, ProjectedEdge, Projections, SceneNode};
use crate::swc::SegmentId;
use crate::vessel::{ArteryLabel, EdgeId, NodeId};

use super::Rgb;

pub const SCENE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("scene schema version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u64, expected: u32 },
    #[error("malformed scene document: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct ConfigDoc {
    #[serde(flatten)]
    layout: LayoutConfig,
    radius_range: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct NodeDoc {
    id: NodeId,
    x: f64,
    y: f64,
    depth: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct EdgeDoc {
    id: EdgeId,
    label: ArteryLabel,
    side: String,
    dashed: bool,
    stroke_width: f64,
    color: Rgb,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    flow: Option<f64>,
    /// Four points per cubic segment.
    control_points: Vec<[f64; 2]>,
    segment_ids: Vec<SegmentId>,
    mean_radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct ProjectionDoc {
    edge_id: EdgeId,
    polyline: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ProjectionsDoc {
    front: Vec<ProjectionDoc>,
    top: Vec<ProjectionDoc>,
    side: Vec<ProjectionDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SceneDoc {
    version: u32,
    scan_id: String,
    config: ConfigDoc,
    nodes: Vec<NodeDoc>,
    edges: Vec<EdgeDoc>,
    projections: ProjectionsDoc,
}

fn projections_doc(v: &[ProjectedEdge]) -> Vec<ProjectionDoc> {
    v.iter()
        .map(|p| ProjectionDoc {
            edge_id: p.edge_id,
            polyline: p.polyline.clone(),
        })
        .collect()
}

fn projections_scene(v: Vec<ProjectionDoc>) -> Vec<ProjectedEdge> {
    v.into_iter()
        .map(|p| ProjectedEdge {
            edge_id: p.edge_id,
            polyline: p.polyline,
        })
        .collect()
}

fn to_doc(scene: &LayoutScene) -> SceneDoc {
    SceneDoc {
        version: SCENE_VERSION,
        scan_id: scene.scan_id.clone(),
        config: ConfigDoc {
            layout: scene.config,
            radius_range: scene.radius_range,
        },
        nodes: scene
            .nodes
            .iter()
            .map(|n| NodeDoc {
                id: n.id,
                x: n.position.x,
                y: n.position.y,
                depth: n.depth,
            })
            .collect(),
        edges: scene
            .edge_paths
            .iter()
            .map(|e| EdgeDoc {
                id: e.edge_id,
                label: e.label,
                side: e.label.side().suffix().to_string(),
                dashed: e.dashed,
                stroke_width: e.stroke_width,
                color: e.color,
                flow: e.flow,
                control_points: e
                    .path
                    .iter()
                    .flat_map(|c| c.points.map(|p| [p.x, p.y]))
                    .collect(),
                segment_ids: e.segment_ids.clone(),
                mean_radius: e.mean_radius,
            })
            .collect(),
        projections: ProjectionsDoc {
            front: projections_doc(&scene.projections.front),
            top: projections_doc(&scene.projections.top),
            side: projections_doc(&scene.projections.side),
        },
    }
}

/// Serializes a scene. Keys keep a fixed order and numbers are written in
/// their shortest exact form, so a parse returns the same values.
pub fn export_scene_json(scene: &LayoutScene) -> String {
    let mut s =
        serde_json::to_string_pretty(&to_doc(scene)).expect("scene documents always serialize");
    s.push('\n');
    s
}

pub fn import_scene_json(text: &str) -> Result<LayoutScene, SceneError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| SceneError::Malformed(e.to_string()))?;
    let version = value
        .get("version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| SceneError::Malformed("missing version".into()))?;
    if version != SCENE_VERSION as u64 {
        return Err(SceneError::VersionMismatch {
            found: version,
            expected: SCENE_VERSION,
        });
    }
    let doc: SceneDoc =
        serde_json::from_value(value).map_err(|e| SceneError::Malformed(e.to_string()))?;
    let mut edge_paths = Vec::with_capacity(doc.edges.len());
    for e in doc.edges {
        if e.control_points.is_empty() || e.control_points.len() % 4 != 0 {
            return Err(SceneError::Malformed(format!(
                "edge {} has {} control points, expected a positive multiple of 4",
                e.id,
                e.control_points.len()
            )));
        }
        let p = |q: [f64; 2]| Point2::new(q[0], q[1]);
        let path = e
            .control_points
            .chunks(4)
            .map(|c| CubicBezier::new(p(c[0]), p(c[1]), p(c[2]), p(c[3])))
            .collect();
        edge_paths.push(EdgePath {
            edge_id: e.id,
            path,
            stroke_width: e.stroke_width,
            dashed: e.dashed,
            label: e.label,
            flow: e.flow,
            color: e.color,
            segment_ids: e.segment_ids,
            mean_radius: e.mean_radius,
        });
    }
    Ok(LayoutScene {
        scan_id: doc.scan_id,
        config: doc.config.layout,
        radius_range: doc.config.radius_range,
        nodes: doc
            .nodes
            .into_iter()
            .map(|n| SceneNode {
                id: n.id,
                position: Point2::new(n.x, n.y),
                depth: n.depth,
            })
            .collect(),
        edge_paths,
        projections: Projections {
            front: projections_scene(doc.projections.front),
            top: projections_scene(doc.projections.top),
            side: projections_scene(doc.projections.side),
        },
    })
}
