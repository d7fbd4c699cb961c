//! Greening defect simulation.
//!
//! A layout of spot and large-area defects is sampled, each defect is
//! rasterized as an irregular ellipse with quadratic falloff, the merged
//! intensity is split into corruption rings, and each ring scales the color
//! channels by its (per-image jittered) multipliers before smoothing.

mod config;
mod corrupt;
mod layout;
mod rings;
mod shape;

pub use config::{
    BoundaryConfig, CorruptionConfig, LargeConfig, MixConfig, RingBands, SpotConfig, SynthConfig,
};
pub use corrupt::{apply_corruption, synthesize_pair, SyntheticPair};
pub use layout::{
    footprint, rasterize_defect, rasterize_defect_with, rasterize_layout, sample_layout,
    DefectKind, DefectLayout, DefectSpec, MixClass, MIN_SIDE,
};
pub use rings::{
    assign_rings, band_label, perturb_table, ChannelMultipliers, CorruptionTable, RingField,
    RingLabel,
};
pub use shape::{falloff, BoundaryProfile, CoreShape, PeriodicNoise, BOUNDARY_STEPS};
