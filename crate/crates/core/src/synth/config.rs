use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every tunable of the defect simulator. Defaults reproduce the observed
/// statistics of real greening damage; the TOML form uses the same field
/// names, grouped into the sections below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub mix: MixConfig,
    pub spots: SpotConfig,
    pub large: LargeConfig,
    pub boundary: BoundaryConfig,
    pub rings: RingBands,
    pub corruption: CorruptionConfig,
}

/// Probabilities of the three layout classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MixConfig {
    pub spots_only: f64,
    pub large_only: f64,
    pub both: f64,
}

impl Default for MixConfig {
    fn default() -> Self {
        Self {
            spots_only: 0.60,
            large_only: 0.30,
            both: 0.10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpotConfig {
    pub count_min: u32,
    pub count_max: u32,
    /// Diameter bounds as fractions of the image width.
    pub diameter_min: f64,
    pub diameter_max: f64,
    /// Lower bound of the minor/major axis ratio.
    pub aspect_min: f64,
}

impl Default for SpotConfig {
    fn default() -> Self {
        Self {
            count_min: 1,
            count_max: 7,
            diameter_min: 0.01,
            diameter_max: 0.05,
            aspect_min: 0.6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LargeConfig {
    pub count_min: u32,
    pub count_max: u32,
    /// Semi-axis bounds as fractions of the image extent along that axis.
    pub axis_min: f64,
    pub axis_max: f64,
    /// Distance of the origin beyond the image edge, as a fraction of the
    /// semi-axis perpendicular to that edge.
    pub offset_min: f64,
    pub offset_max: f64,
    /// Upper bound of the in-image footprint as a fraction of image area.
    pub max_area_fraction: f64,
    /// Probability that the damage originates from a short segment rather
    /// than a single point.
    pub linear_core_probability: f64,
    /// Half-length bounds of a linear core, in normalized ellipse units.
    pub linear_core_min: f64,
    pub linear_core_max: f64,
}

impl Default for LargeConfig {
    fn default() -> Self {
        Self {
            count_min: 1,
            count_max: 2,
            axis_min: 0.15,
            axis_max: 0.6,
            offset_min: 0.05,
            offset_max: 0.5,
            max_area_fraction: 1.0 / 3.0,
            linear_core_probability: 0.2,
            linear_core_min: 0.1,
            linear_core_max: 0.4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundaryConfig {
    /// Relative radius perturbation of the irregular boundary.
    pub noise_amplitude: f64,
    /// Number of value-noise lattice points around the base octave.
    pub noise_lattice: u32,
}

impl Default for BoundaryConfig {
    fn default() -> Self {
        Self {
            noise_amplitude: 0.15,
            noise_lattice: 8,
        }
    }
}

/// Upper edges of the intensity bands, ordered from the outermost ring
/// (surface) to the innermost one (dark mid). Intensities above the last
/// edge belong to the core.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RingBands {
    pub edges: [f64; 6],
}

impl Default for RingBands {
    fn default() -> Self {
        Self {
            edges: [0.10, 0.25, 0.45, 0.60, 0.75, 0.92],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorruptionConfig {
    /// Half-width of the uniform relative jitter applied to each multiplier.
    pub perturbation: f64,
    /// Gaussian sigma as a fraction of the image width.
    pub sigma_factor: f64,
    /// Smoothed change magnitude above which a pixel belongs to the mask.
    pub mask_threshold: f64,
}

impl Default for CorruptionConfig {
    fn default() -> Self {
        Self {
            perturbation: 0.2,
            sigma_factor: 0.004,
            mask_threshold: 1e-4,
        }
    }
}

impl SynthConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: SynthConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn sigma_for_width(&self, width: usize) -> f64 {
        self.corruption.sigma_factor * width as f64
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        let m = &self.mix;
        for (name, p) in [("spots_only", m.spots_only), ("large_only", m.large_only), ("both", m.both)] {
            if !(0.0..=1.0).contains(&p) {
                return fail(format!("mix.{name} must lie in [0, 1], got {p}"));
            }
        }
        if ((m.spots_only + m.large_only + m.both) - 1.0).abs() > 1e-9 {
            return fail("mix probabilities must sum to 1".into());
        }
        let s = &self.spots;
        if s.count_min < 1 || s.count_min > s.count_max {
            return fail(format!("spots count range {}..={} invalid", s.count_min, s.count_max));
        }
        if !(0.0 < s.diameter_min && s.diameter_min <= s.diameter_max && s.diameter_max < 1.0) {
            return fail("spots diameter range must satisfy 0 < min <= max < 1".into());
        }
        if !(0.0 < s.aspect_min && s.aspect_min <= 1.0) {
            return fail("spots.aspect_min must lie in (0, 1]".into());
        }
        let l = &self.large;
        if l.count_min < 1 || l.count_min > l.count_max {
            return fail(format!("large count range {}..={} invalid", l.count_min, l.count_max));
        }
        if !(0.0 < l.axis_min && l.axis_min <= l.axis_max) {
            return fail("large axis range must satisfy 0 < min <= max".into());
        }
        if !(0.0 <= l.offset_min && l.offset_min <= l.offset_max && l.offset_max < 1.0) {
            return fail("large offset range must satisfy 0 <= min <= max < 1".into());
        }
        if !(0.0 < l.max_area_fraction && l.max_area_fraction <= 1.0) {
            return fail("large.max_area_fraction must lie in (0, 1]".into());
        }
        if !(0.0..=1.0).contains(&l.linear_core_probability) {
            return fail("large.linear_core_probability must lie in [0, 1]".into());
        }
        if !(0.0 <= l.linear_core_min && l.linear_core_min <= l.linear_core_max && l.linear_core_max < 1.0) {
            return fail("large linear core range must satisfy 0 <= min <= max < 1".into());
        }
        let b = &self.boundary;
        if !(0.0..1.0).contains(&b.noise_amplitude) {
            return fail("boundary.noise_amplitude must lie in [0, 1)".into());
        }
        if b.noise_lattice < 2 {
            return fail("boundary.noise_lattice must be at least 2".into());
        }
        let e = &self.rings.edges;
        if !(e[0] > 0.0 && e.windows(2).all(|w| w[0] < w[1]) && e[5] < 1.0) {
            return fail("ring edges must increase strictly inside (0, 1)".into());
        }
        let c = &self.corruption;
        if !(0.0..1.0).contains(&c.perturbation) {
            return fail("corruption.perturbation must lie in [0, 1)".into());
        }
        if !(c.sigma_factor > 0.0) {
            return fail("corruption.sigma_factor must be positive".into());
        }
        if !(c.mask_threshold > 0.0) {
            return fail("corruption.mask_threshold must be positive".into());
        }
        Ok(())
    }
}
