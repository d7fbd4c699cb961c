//! Synthetic greening defects for digitized autochrome plates.
//!
//! The crate covers the whole data side of a restoration experiment:
//!
//! * [`image`] holds the planar RGB raster, PNG/JPEG I/O and the separable
//!   Gaussian filter.
//! * [`synth`] samples defect layouts, rasterizes irregular ellipses,
//!   assigns corruption rings and applies the per-ring channel multipliers.
//! * [`loss`] evaluates the weighted spatial L1, the FFT frequency loss and
//!   their combination, with analytic subgradients.
//! * [`metrics`] provides PSNR, SSIM, MS-SSIM and cropout SSIM.
//! * [`baseline`] is the classical histogram-matching comparator.

pub mod baseline;
pub mod components;
pub mod error;
pub mod fixtures;
pub mod image;
pub mod loss;
pub mod metrics;
pub mod synth;

pub use crate::error::{Error, Result};
pub use crate::image::{Channel, GrayField, RasterImage};
