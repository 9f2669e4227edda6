use crate::swc::SegmentForest;

use super::{ArteryEdge, EdgeId, VesselError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Course {
    Vertical,
    Horizontal,
}

/// Counts direction runs along a chain in the (lateral, vertical) plane.
///
/// Each step is classed vertical when its vertical change is at least its
/// lateral change. Same-class steps merge into runs; runs shorter than
/// `noise_fraction` of the chain length are dropped and neighbours re-merged.
/// The result is the number of surviving runs when there are two or more,
/// and 0 for a single run (a V, H, V carotid counts 3).
pub fn count_bends(
    edge: &ArteryEdge,
    forest: &SegmentForest,
    noise_fraction: f64,
) -> Result<u32, VesselError> {
    let degenerate = || VesselError::DegenerateChain(edge.id);
    let start = forest.get(edge.start.0).ok_or_else(degenerate)?.position;
    let mut points = vec![start];
    for &s in &edge.segment_ids {
        points.push(forest.get(s).ok_or_else(degenerate)?.position);
    }
    count_bends_in_points(edge.id, &points, noise_fraction)
}

pub(crate) fn count_bends_in_points(
    id: EdgeId,
    points: &[crate::geom::Vec3],
    noise_fraction: f64,
) -> Result<u32, VesselError> {
    let mut runs: Vec<(Course, f64)> = Vec::new();
    let mut total = 0.0;
    for w in points.windows(2) {
        let d = w[1] - w[0];
        let len = d.norm();
        if len == 0.0 {
            continue;
        }
        total += len;
        let course = if d.y.abs() >= d.x.abs() {
            Course::Vertical
        } else {
            Course::Horizontal
        };
        push_run(&mut runs, course, len);
    }
    if runs.is_empty() {
        return Err(VesselError::DegenerateChain(id));
    }
    let threshold = noise_fraction * total;
    let mut kept: Vec<(Course, f64)> = Vec::new();
    for (course, len) in runs {
        if len >= threshold {
            push_run(&mut kept, course, len);
        }
    }
    Ok(if kept.len() >= 2 {
        kept.len() as u32
    } else {
        0
    })
}

fn push_run(runs: &mut Vec<(Course, f64)>, course: Course, len: f64) {
    match runs.last_mut() {
        Some((c, l)) if *c == course => *l += len,
        _ => runs.push((course, len)),
    }
}
