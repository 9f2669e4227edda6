use std::collections::BTreeMap;

use crate::vessel::{CerebralTree, Side, TreeKind};

use super::LayoutConfig;

/// Horizontal extent reserved for one cerebral tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub x0: f64,
    pub x1: f64,
}

impl Band {
    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.x0 + self.x1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Slots {
    pub midline: f64,
    /// Pixels per leaf, shared by every band.
    pub unit: f64,
    pub bands: BTreeMap<(TreeKind, Side), Band>,
}

impl Slots {
    pub fn band(&self, kind: TreeKind, side: Side) -> Band {
        self.bands[&(kind, side)]
    }
}

/// Splits each half of the canvas into PCA, ACA and MCA bands, from the
/// midline outward.
///
/// A band's width is proportional to the larger leaf count of its left and
/// right trees (an empty or missing tree counts as one leaf), so paired
/// trees sit at mirrored positions and the ring drawn on the band centres
/// is symmetric. One pixels-per-leaf unit is shared by the whole scene.
/// Half a gutter separates the PCA band from the midline, a gutter
/// separates adjacent bands, and a gutter is kept at the canvas edge.
pub fn assign_slots(
    trees: &BTreeMap<(TreeKind, Side), CerebralTree>,
    config: &LayoutConfig,
) -> Slots {
    let g = config.band_gutter;
    let mid = config.midline_x();
    let leaves = |kind: TreeKind| {
        [Side::Left, Side::Right]
            .iter()
            .map(|&s| trees.get(&(kind, s)).map(|t| t.leaf_count()).unwrap_or(0))
            .max()
            .unwrap_or(0)
            .max(1) as f64
    };
    let avail = mid - 0.5 * g - 2.0 * g - g;
    let unit = avail / TreeKind::OUTWARD.iter().map(|&k| leaves(k)).sum::<f64>();
    let mut bands = BTreeMap::new();
    for side in [Side::Left, Side::Right] {
        let mut offset = 0.5 * g;
        for kind in TreeKind::OUTWARD {
            let w = unit * leaves(kind);
            let (inner, outer) = (offset, offset + w);
            let band = match side {
                Side::Left => Band {
                    x0: mid - outer,
                    x1: mid - inner,
                },
                _ => Band {
                    x0: mid + inner,
                    x1: mid + outer,
                },
            };
            bands.insert((kind, side), band);
            offset = outer + g;
        }
    }
    Slots {
        midline: mid,
        unit,
        bands,
    }
}
