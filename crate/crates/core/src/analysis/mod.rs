//! Synthetic scans, stenosis injection and scan-level analytics.

mod batch;
mod outliers;
mod stenosis;
mod symmetry;
mod synth;

pub use batch::{
    check_linkage, check_ring, validate_batch, validate_scan, BatchReport, CriterionResult,
    ScanResult,
};
pub use outliers::{detect_width_outliers, Outlier, OutlierKind, OutlierReport, WINDOW_FRACTION};
pub use stenosis::{central_segments, inject_stenosis};
pub use symmetry::{symmetry_metrics, PairSymmetry, SymmetryReport};
pub use synth::{generate_synthetic_scan, mirror_lateral, GroundTruth, SynthParams, SyntheticScan};

use thiserror::Error;

use crate::vessel::EdgeId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("stenosis severity {0} outside (0, 1)")]
    SeverityOutOfRange(f64),
}
