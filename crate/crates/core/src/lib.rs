//! Layout engine for cerebral artery networks.
//!
//! The pipeline turns a segmented SWC scan into a 2D network drawing:
//!
//! 1. [`swc`] parses and validates the scan and maps it into the canonical
//!    frame (x lateral, y vertical, z depth).
//! 2. [`vessel`] contracts segment chains into arteries, labels them and
//!    closes the Circle of Willis ring.
//! 3. [`layout`] places the six cerebral trees in fixed hemisphere slots as
//!    layered upward drawings, abstracts the inflow arteries into Bezier
//!    half-waves and draws the ring.
//! 4. [`render`] writes the versioned scene JSON and SVG.
//!
//! [`flow`] and [`analysis`] provide the linear flow model, synthetic
//! scans, stenosis injection and batch validation.

pub mod analysis;
pub mod config;
pub mod flow;
pub mod geom;
pub mod layout;
pub mod pipeline;
pub mod render;
pub mod swc;
pub mod vessel;
