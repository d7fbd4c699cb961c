//! Irregular ellipse geometry and the quadratic intensity falloff.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::layout::DefectSpec;
use crate::image::GrayField;

/// Number of angular samples along the boundary.
pub const BOUNDARY_STEPS: usize = 360;

/// Where the damage originates inside the ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CoreShape {
    Point,
    /// Segment through the center in normalized ellipse coordinates.
    Segment { half_length: f64, angle: f64 },
}

/// Smooth periodic value noise in `[-1, 1]`: a base octave on `lattice`
/// points plus a half-amplitude octave on twice as many.
#[derive(Debug, Clone)]
pub struct PeriodicNoise {
    coarse: Vec<f64>,
    fine: Vec<f64>,
}

impl PeriodicNoise {
    pub fn new(seed: u64, lattice: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lattice = lattice.max(2);
        let coarse = (0..lattice).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let fine = (0..2 * lattice).map(|_| rng.random_range(-1.0..=1.0)).collect();
        Self { coarse, fine }
    }

    /// Noise at angle `t` (radians, any range).
    pub fn sample(&self, t: f64) -> f64 {
        let phase = (t / TAU).rem_euclid(1.0);
        (lerp_cyclic(&self.coarse, phase) + 0.5 * lerp_cyclic(&self.fine, phase)) / 1.5
    }
}

fn lerp_cyclic(points: &[f64], phase: f64) -> f64 {
    let n = points.len();
    let pos = phase * n as f64;
    let i = (pos.floor() as usize) % n;
    let f = pos - pos.floor();
    let s = f * f * (3.0 - 2.0 * f);
    points[i] * (1.0 - s) + points[(i + 1) % n] * s
}

/// Boundary radius factor `1 + amplitude * noise(t)` tabulated at
/// [`BOUNDARY_STEPS`] angles and linearly interpolated between them.
#[derive(Debug, Clone)]
pub struct BoundaryProfile {
    radii: Vec<f64>,
}

impl BoundaryProfile {
    pub fn new(seed: u64, amplitude: f64, lattice: usize) -> Self {
        let noise = PeriodicNoise::new(seed, lattice);
        let radii = (0..BOUNDARY_STEPS)
            .map(|k| {
                let n = if amplitude == 0.0 {
                    0.0
                } else {
                    noise.sample(TAU * k as f64 / BOUNDARY_STEPS as f64)
                };
                1.0 + amplitude * n
            })
            .collect();
        Self { radii }
    }

    pub fn radius(&self, t: f64) -> f64 {
        let pos = (t / TAU).rem_euclid(1.0) * BOUNDARY_STEPS as f64;
        let i = (pos.floor() as usize) % BOUNDARY_STEPS;
        let f = pos - pos.floor();
        self.radii[i] * (1.0 - f) + self.radii[(i + 1) % BOUNDARY_STEPS] * f
    }

    pub fn max_radius(&self) -> f64 {
        self.radii.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_radius(&self) -> f64 {
        self.radii.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Boundary polygon of `spec` in pixel coordinates.
    pub fn outline(&self, spec: &DefectSpec) -> Vec<(f64, f64)> {
        let (xc, yc) = spec.center;
        let (a, b) = spec.semi_axes;
        (0..BOUNDARY_STEPS)
            .map(|k| {
                let t = TAU * k as f64 / BOUNDARY_STEPS as f64;
                let r = self.radii[k];
                (xc + a * t.cos() * r, yc + b * t.sin() * r)
            })
            .collect()
    }
}

/// Precomputed evaluator for one defect.
pub(crate) struct ShapeEvaluator<'a> {
    spec: &'a DefectSpec,
    profile: BoundaryProfile,
    max_radius: f64,
    min_radius: f64,
}

impl<'a> ShapeEvaluator<'a> {
    pub fn new(spec: &'a DefectSpec, lattice: usize) -> Self {
        let profile = BoundaryProfile::new(
            spec.boundary_noise_seed,
            spec.boundary_noise_amplitude,
            lattice,
        );
        // A segment core reaches at most max(1, r_max) in normalized units.
        let max_radius = profile.max_radius().max(1.0);
        let min_radius = profile.min_radius();
        Self {
            spec,
            profile,
            max_radius,
            min_radius,
        }
    }

    /// Cheap outside test: beyond the largest boundary radius.
    fn surely_outside(&self, px: f64, py: f64) -> bool {
        let u = (px - self.spec.center.0) / self.spec.semi_axes.0;
        let v = (py - self.spec.center.1) / self.spec.semi_axes.1;
        u * u + v * v >= self.max_radius * self.max_radius
    }

    /// Cheap inside test: within the smallest boundary radius.
    fn surely_inside(&self, px: f64, py: f64) -> bool {
        let u = (px - self.spec.center.0) / self.spec.semi_axes.0;
        let v = (py - self.spec.center.1) / self.spec.semi_axes.1;
        match self.spec.core {
            CoreShape::Point => u * u + v * v < self.min_radius * self.min_radius,
            CoreShape::Segment { half_length, angle } => {
                let (dx, dy) = (angle.cos(), angle.sin());
                let s = (u * dx + v * dy).clamp(-half_length, half_length);
                let (qx, qy) = (u - s * dx, v - s * dy);
                let reach = (1.0 - half_length) * self.min_radius;
                qx * qx + qy * qy < reach * reach
            }
        }
    }

    /// Normalized distance: 0 on the core, 1 on the irregular boundary.
    pub fn normalized_distance(&self, px: f64, py: f64) -> f64 {
        let (xc, yc) = self.spec.center;
        let (a, b) = self.spec.semi_axes;
        let u = (px - xc) / a;
        let v = (py - yc) / b;
        let t = v.atan2(u);
        let r = self.profile.radius(t);
        match self.spec.core {
            CoreShape::Point => (u * u + v * v).sqrt() / r,
            CoreShape::Segment { half_length, angle } => {
                let (dx, dy) = (angle.cos(), angle.sin());
                let s = (u * dx + v * dy).clamp(-half_length, half_length);
                let (qx, qy) = (u - s * dx, v - s * dy);
                (qx * qx + qy * qy).sqrt() / ((1.0 - half_length) * r)
            }
        }
    }

    pub fn intensity(&self, px: f64, py: f64) -> f64 {
        falloff(self.normalized_distance(px, py))
    }

    /// Inclusive pixel bounds that can hold nonzero intensity, clipped to
    /// the image; `None` when the shape misses the image entirely.
    pub fn pixel_bounds(&self, width: usize, height: usize) -> Option<(usize, usize, usize, usize)> {
        let (xc, yc) = self.spec.center;
        let (a, b) = self.spec.semi_axes;
        let r = self.max_radius;
        let x0 = (xc - a * r).floor().max(0.0);
        let x1 = (xc + a * r).ceil().min(width as f64 - 1.0);
        let y0 = (yc - b * r).floor().max(0.0);
        let y1 = (yc + b * r).ceil().min(height as f64 - 1.0);
        if x0 > x1 || y0 > y1 {
            return None;
        }
        Some((x0 as usize, x1 as usize, y0 as usize, y1 as usize))
    }

    /// Folds this shape into `field` by per-pixel maximum.
    pub fn accumulate_max(&self, field: &mut GrayField) {
        let (w, h) = field.dims();
        let Some((x0, x1, y0, y1)) = self.pixel_bounds(w, h) else {
            return;
        };
        for y in y0..=y1 {
            for x in x0..=x1 {
                if self.surely_outside(x as f64, y as f64) {
                    continue;
                }
                let v = self.intensity(x as f64, y as f64);
                if v > field.get(x, y) {
                    field.set(x, y, v);
                }
            }
        }
    }

    /// In-image pixels with nonzero intensity.
    pub fn footprint(&self, width: usize, height: usize) -> usize {
        let Some((x0, x1, y0, y1)) = self.pixel_bounds(width, height) else {
            return 0;
        };
        let mut count = 0;
        for y in y0..=y1 {
            for x in x0..=x1 {
                let (px, py) = (x as f64, y as f64);
                if self.surely_inside(px, py)
                    || (!self.surely_outside(px, py) && self.normalized_distance(px, py) < 1.0)
                {
                    count += 1;
                }
            }
        }
        count
    }
}

/// `I = 1 - d^2` inside the boundary, zero outside.
pub fn falloff(d: f64) -> f64 {
    if d < 1.0 {
        1.0 - d * d
    } else {
        0.0
    }
}
