//! Sampling of defect layouts and their rasterization into an intensity
//! field.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::SynthConfig;
use super::shape::{CoreShape, ShapeEvaluator};
use crate::error::{Error, Result};
use crate::image::GrayField;

/// Smallest accepted image side for layout sampling.
pub const MIN_SIDE: usize = 64;

const RESAMPLE_ATTEMPTS: usize = 10;
const SHRINK_FACTOR: f64 = 0.8;
const MAX_SHRINKS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefectKind {
    /// Point-shaped origin inside the image.
    Spot,
    /// Liquid ingress from outside the frame.
    Large,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixClass {
    SpotsOnly,
    LargeOnly,
    Both,
}

impl MixClass {
    pub fn name(self) -> &'static str {
        match self {
            MixClass::SpotsOnly => "spots_only",
            MixClass::LargeOnly => "large_only",
            MixClass::Both => "both",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectSpec {
    pub kind: DefectKind,
    /// Pixel coordinates; outside the image for [`DefectKind::Large`].
    pub center: (f64, f64),
    /// Semi-axes `(a, b)` along x and y, in pixels.
    pub semi_axes: (f64, f64),
    pub boundary_noise_seed: u64,
    pub boundary_noise_amplitude: f64,
    pub core: CoreShape,
}

impl DefectSpec {
    /// Nominal diameter `max(2a, 2b)` of the unperturbed ellipse.
    pub fn nominal_diameter(&self) -> f64 {
        2.0 * self.semi_axes.0.max(self.semi_axes.1)
    }

    pub fn center_inside(&self, width: usize, height: usize) -> bool {
        let (x, y) = self.center;
        (0.0..=(width - 1) as f64).contains(&x) && (0.0..=(height - 1) as f64).contains(&y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectLayout {
    pub mix_class: MixClass,
    pub specs: Vec<DefectSpec>,
}

impl DefectLayout {
    pub fn count(&self, kind: DefectKind) -> usize {
        self.specs.iter().filter(|s| s.kind == kind).count()
    }
}

/// Draws a complete layout for a `width`x`height` image.
///
/// The class is chosen first, then the counts, then each spec in order.
/// Large defects whose in-image footprint exceeds the configured area
/// fraction are redrawn up to ten times, after which the last draw is
/// shrunk by 0.8 until it fits.
pub fn sample_layout<R: Rng + ?Sized>(
    rng: &mut R,
    width: usize,
    height: usize,
    config: &SynthConfig,
) -> Result<DefectLayout> {
    if width < MIN_SIDE || height < MIN_SIDE {
        return Err(Error::domain(format!(
            "layout sampling needs at least {MIN_SIDE}x{MIN_SIDE} pixels, got {width}x{height}"
        )));
    }
    let mix = &config.mix;
    let u: f64 = rng.random();
    let mix_class = if u < mix.spots_only {
        MixClass::SpotsOnly
    } else if u < mix.spots_only + mix.large_only {
        MixClass::LargeOnly
    } else {
        MixClass::Both
    };

    let (spots, larges) = match mix_class {
        MixClass::SpotsOnly => (spot_count(rng, config), 0),
        MixClass::LargeOnly => (0, large_count(rng, config)),
        MixClass::Both => {
            let s = spot_count(rng, config);
            (s, large_count(rng, config))
        }
    };

    let mut specs = Vec::with_capacity((spots + larges) as usize);
    for _ in 0..spots {
        specs.push(sample_spot(rng, width, height, config));
    }
    for _ in 0..larges {
        specs.push(sample_large(rng, width, height, config));
    }
    Ok(DefectLayout { mix_class, specs })
}

fn spot_count<R: Rng + ?Sized>(rng: &mut R, config: &SynthConfig) -> u32 {
    rng.random_range(config.spots.count_min..=config.spots.count_max)
}

fn large_count<R: Rng + ?Sized>(rng: &mut R, config: &SynthConfig) -> u32 {
    rng.random_range(config.large.count_min..=config.large.count_max)
}

fn sample_spot<R: Rng + ?Sized>(
    rng: &mut R,
    width: usize,
    height: usize,
    config: &SynthConfig,
) -> DefectSpec {
    let s = &config.spots;
    let w = width as f64;
    let diameter = rng.random_range(s.diameter_min * w..=s.diameter_max * w);
    let major = diameter / 2.0;
    let minor = major * rng.random_range(s.aspect_min..=1.0);
    let semi_axes = if rng.random_bool(0.5) {
        (major, minor)
    } else {
        (minor, major)
    };
    let center = (
        rng.random_range(0.0..=(width - 1) as f64),
        rng.random_range(0.0..=(height - 1) as f64),
    );
    DefectSpec {
        kind: DefectKind::Spot,
        center,
        semi_axes,
        boundary_noise_seed: rng.random(),
        boundary_noise_amplitude: config.boundary.noise_amplitude,
        core: CoreShape::Point,
    }
}

/// Placement of a large defect relative to the frame: which edge it
/// enters from, where along that edge, and how far outside its origin is
/// (as a fraction of the perpendicular semi-axis).
struct Entry {
    edge: u8,
    along: f64,
    offset_fraction: f64,
}

fn place(entry: &Entry, semi_axes: (f64, f64), width: usize, height: usize) -> (f64, f64) {
    let (a, b) = semi_axes;
    let (wm, hm) = ((width - 1) as f64, (height - 1) as f64);
    match entry.edge {
        0 => (entry.along * wm, -(entry.offset_fraction * b).max(1.0)),
        1 => (entry.along * wm, hm + (entry.offset_fraction * b).max(1.0)),
        2 => (-(entry.offset_fraction * a).max(1.0), entry.along * hm),
        _ => (wm + (entry.offset_fraction * a).max(1.0), entry.along * hm),
    }
}

fn sample_large<R: Rng + ?Sized>(
    rng: &mut R,
    width: usize,
    height: usize,
    config: &SynthConfig,
) -> DefectSpec {
    let l = &config.large;
    let limit = l.max_area_fraction * (width * height) as f64;
    let lattice = config.boundary.noise_lattice as usize;
    let fits = |spec: &DefectSpec| {
        let area = ShapeEvaluator::new(spec, lattice).footprint(width, height);
        area > 0 && area as f64 <= limit
    };

    let mut last = None;
    for _ in 0..RESAMPLE_ATTEMPTS {
        let (spec, entry) = draw_large(rng, width, height, config);
        if fits(&spec) {
            return spec;
        }
        last = Some((spec, entry));
    }

    let (mut spec, entry) = last.expect("at least one attempt");
    for _ in 0..MAX_SHRINKS {
        spec.semi_axes = (
            spec.semi_axes.0 * SHRINK_FACTOR,
            spec.semi_axes.1 * SHRINK_FACTOR,
        );
        spec.center = place(&entry, spec.semi_axes, width, height);
        if fits(&spec) {
            return spec;
        }
    }
    // Unreachable with sane configs: the footprint shrinks geometrically.
    spec
}

fn draw_large<R: Rng + ?Sized>(
    rng: &mut R,
    width: usize,
    height: usize,
    config: &SynthConfig,
) -> (DefectSpec, Entry) {
    let l = &config.large;
    let a = rng.random_range(l.axis_min..=l.axis_max) * width as f64;
    let b = rng.random_range(l.axis_min..=l.axis_max) * height as f64;
    let entry = Entry {
        edge: rng.random_range(0..4u8),
        along: rng.random(),
        offset_fraction: rng.random_range(l.offset_min..=l.offset_max),
    };
    let core = if rng.random_bool(l.linear_core_probability) {
        CoreShape::Segment {
            half_length: rng.random_range(l.linear_core_min..=l.linear_core_max),
            angle: rng.random_range(0.0..PI),
        }
    } else {
        CoreShape::Point
    };
    let spec = DefectSpec {
        kind: DefectKind::Large,
        center: place(&entry, (a, b), width, height),
        semi_axes: (a, b),
        boundary_noise_seed: rng.random(),
        boundary_noise_amplitude: config.boundary.noise_amplitude,
        core,
    };
    (spec, entry)
}

/// Falloff intensity `max(0, 1 - d^2)` of a single defect over the image,
/// using the default noise lattice.
pub fn rasterize_defect(spec: &DefectSpec, width: usize, height: usize) -> GrayField {
    rasterize_defect_with(spec, width, height, SynthConfig::default().boundary.noise_lattice as usize)
}

pub fn rasterize_defect_with(spec: &DefectSpec, width: usize, height: usize, lattice: usize) -> GrayField {
    let mut field = GrayField::zeros(width, height);
    ShapeEvaluator::new(spec, lattice).accumulate_max(&mut field);
    field
}

/// Merges every defect of the layout by per-pixel maximum intensity.
pub fn rasterize_layout(layout: &DefectLayout, width: usize, height: usize, config: &SynthConfig) -> GrayField {
    let lattice = config.boundary.noise_lattice as usize;
    let mut field = GrayField::zeros(width, height);
    for spec in &layout.specs {
        ShapeEvaluator::new(spec, lattice).accumulate_max(&mut field);
    }
    field
}

/// Number of in-image pixels covered by `spec`.
pub fn footprint(spec: &DefectSpec, width: usize, height: usize, config: &SynthConfig) -> usize {
    ShapeEvaluator::new(spec, config.boundary.noise_lattice as usize).footprint(width, height)
}
