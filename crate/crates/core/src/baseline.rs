//! Classical comparator: per-component histogram matching of the damaged
//! region onto its clean surroundings.

use crate::components::{connected_components, dilate, BoundingBox, Component};
use crate::error::{ensure_same_dims, Error, Result};
use crate::image::{Channel, GrayField, RasterImage};

pub const BINS: usize = 256;
pub const MIN_REFERENCE_PIXELS: usize = 256;
pub const MIN_ANNULUS: usize = 4;
pub const FEATHER: usize = 3;
pub const DEFAULT_ANNULUS: usize = 16;

/// Piecewise-linear CDF over `BINS` equal bins of `[0, 1]`.
#[derive(Debug, Clone)]
pub struct Cdf {
    edges: Vec<f64>,
}

impl Cdf {
    pub fn from_samples(samples: impl IntoIterator<Item = f64>) -> Option<Self> {
        let mut hist = [0usize; BINS];
        let mut n = 0usize;
        for v in samples {
            hist[bin_of(v)] += 1;
            n += 1;
        }
        if n == 0 {
            return None;
        }
        let mut edges = Vec::with_capacity(BINS + 1);
        let mut acc = 0usize;
        edges.push(0.0);
        for h in hist {
            acc += h;
            edges.push(acc as f64 / n as f64);
        }
        Some(Self { edges })
    }

    pub fn eval(&self, v: f64) -> f64 {
        let v = v.clamp(0.0, 1.0);
        let i = bin_of(v);
        let frac = v * BINS as f64 - i as f64;
        self.edges[i] + frac * (self.edges[i + 1] - self.edges[i])
    }

    /// Smallest value whose CDF reaches `p`, interpolated inside its bin.
    pub fn inverse(&self, p: f64) -> f64 {
        // First bin j with edges[j + 1] >= p; nonempty whenever p > 0.
        let j = self.edges[1..].partition_point(|&e| e < p).min(BINS - 1);
        let (lo, hi) = (self.edges[j], self.edges[j + 1]);
        if hi <= lo {
            // p <= 0: lower edge of the first occupied bin.
            let first = self.edges[1..].partition_point(|&e| e <= 0.0).min(BINS - 1);
            return first as f64 / BINS as f64;
        }
        (j as f64 + ((p - lo) / (hi - lo)).clamp(0.0, 1.0)) / BINS as f64
    }
}

fn bin_of(v: f64) -> usize {
    ((v.clamp(0.0, 1.0) * BINS as f64) as usize).min(BINS - 1)
}

/// Monotone remapping of one distribution onto another.
#[derive(Debug, Clone)]
pub struct CdfMatcher {
    source: Cdf,
    reference: Cdf,
}

impl CdfMatcher {
    pub fn new(source: Cdf, reference: Cdf) -> Self {
        Self { source, reference }
    }

    pub fn map(&self, v: f64) -> f64 {
        self.reference.inverse(self.source.eval(v))
    }
}

/// Pixels of one defect component and the clean pixels used as its
/// reference, as row-major image indices.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionPair {
    pub defect_region: Vec<usize>,
    pub reference_region: Vec<usize>,
}

/// Window of the image around a component, for local raster work.
struct Local {
    bbox: BoundingBox,
    bits: Vec<bool>,
}

impl Local {
    fn new(comp: &Component, pad: usize, width: usize, height: usize) -> Self {
        let bbox = comp.bbox.padded(pad, width, height);
        let mut bits = vec![false; bbox.area()];
        for &i in &comp.pixels {
            let (x, y) = (i % width, i / width);
            bits[(y - bbox.y0) * bbox.width() + (x - bbox.x0)] = true;
        }
        Self { bbox, bits }
    }

    fn global(&self, local: usize, width: usize) -> usize {
        let (lx, ly) = (local % self.bbox.width(), local / self.bbox.width());
        (ly + self.bbox.y0) * width + lx + self.bbox.x0
    }

    fn dilated(&self, radius: usize) -> Vec<bool> {
        dilate(&self.bits, self.bbox.width(), self.bbox.height(), radius)
    }
}

/// Builds the reference annulus for a component, widening it (doubling)
/// until it holds at least [`MIN_REFERENCE_PIXELS`] clean pixels.
pub fn region_pair(comp: &Component, mask_bits: &[bool], width: usize, height: usize, annulus: usize) -> Result<RegionPair> {
    let mut radius = annulus;
    loop {
        let local = Local::new(comp, radius, width, height);
        let ring = local.dilated(radius);
        let reference: Vec<usize> = ring
            .iter()
            .enumerate()
            .filter(|(_, &on)| on)
            .map(|(i, _)| local.global(i, width))
            .filter(|&g| !mask_bits[g])
            .collect();
        let covers_image = local.bbox.width() == width && local.bbox.height() == height && radius >= width.max(height);
        if reference.len() >= MIN_REFERENCE_PIXELS {
            return Ok(RegionPair {
                defect_region: comp.pixels.clone(),
                reference_region: reference,
            });
        }
        if covers_image {
            return Err(Error::domain(if reference.is_empty() {
                "reference annulus lies entirely outside the image or inside the mask".to_string()
            } else {
                format!(
                    "only {} clean reference pixels around a defect, need {MIN_REFERENCE_PIXELS}",
                    reference.len()
                )
            }));
        }
        radius *= 2;
    }
}

/// Histogram-matches every mask component onto its surrounding annulus.
///
/// Pixels inside the mask take the remapped value; clean pixels within
/// three pixels of a component blend linearly from remapped to original;
/// everything else is copied unchanged.
pub fn histogram_match_region(img: &RasterImage, mask: &GrayField, annulus_width: usize) -> Result<RasterImage> {
    restore(img, mask, annulus_width, None)
}

/// As [`histogram_match_region`], but every component is matched onto
/// the same caller-supplied reference region.
pub fn histogram_match_with_reference(
    img: &RasterImage,
    mask: &GrayField,
    reference: &GrayField,
) -> Result<RasterImage> {
    ensure_same_dims("reference mask", img.dims(), reference.dims())?;
    restore(img, mask, MIN_ANNULUS, Some(reference))
}

fn restore(
    img: &RasterImage,
    mask: &GrayField,
    annulus_width: usize,
    manual_reference: Option<&GrayField>,
) -> Result<RasterImage> {
    ensure_same_dims("histogram matching mask", img.dims(), mask.dims())?;
    if annulus_width < MIN_ANNULUS {
        return Err(Error::domain(format!(
            "annulus width must be at least {MIN_ANNULUS}, got {annulus_width}"
        )));
    }
    let (w, h) = img.dims();
    let mask_bits = mask.to_bits();
    let components = connected_components(mask);
    if components.is_empty() {
        return Err(Error::domain("histogram matching needs a nonempty mask"));
    }

    let manual: Option<Vec<usize>> = manual_reference.map(|r| {
        r.to_bits()
            .iter()
            .enumerate()
            .filter(|(i, &on)| on && !mask_bits[*i])
            .map(|(i, _)| i)
            .collect()
    });
    if manual.as_ref().is_some_and(|m| m.is_empty()) {
        return Err(Error::domain("reference mask has no clean pixels"));
    }

    let mut out = img.clone();
    // Blend weight already written at each feather pixel; the nearest
    // component wins where feathers overlap.
    let mut feather_alpha = vec![0.0f64; w * h];

    for comp in &components {
        let pair = match &manual {
            Some(reference) => RegionPair {
                defect_region: comp.pixels.clone(),
                reference_region: reference.clone(),
            },
            None => region_pair(comp, &mask_bits, w, h, annulus_width)?,
        };
        let matchers: Vec<CdfMatcher> = Channel::ALL
            .iter()
            .map(|&c| {
                let plane = img.plane(c);
                let src = Cdf::from_samples(pair.defect_region.iter().map(|&i| plane[i])).expect("component nonempty");
                let rf = Cdf::from_samples(pair.reference_region.iter().map(|&i| plane[i])).expect("reference nonempty");
                CdfMatcher::new(src, rf)
            })
            .collect();

        for (ci, &c) in Channel::ALL.iter().enumerate() {
            let src = img.plane(c);
            out.map_plane(c, |i, v| if comp.pixels.binary_search(&i).is_ok() { matchers[ci].map(src[i]) } else { v });
        }

        let local = Local::new(comp, FEATHER, w, h);
        let rings: Vec<Vec<bool>> = (1..=FEATHER).map(|r| local.dilated(r)).collect();
        for li in 0..local.bits.len() {
            let g = local.global(li, w);
            if mask_bits[g] {
                continue;
            }
            let Some(k) = rings.iter().position(|d| d[li]) else {
                continue;
            };
            let alpha = 1.0 - (k + 1) as f64 / (FEATHER + 1) as f64;
            if alpha <= feather_alpha[g] {
                continue;
            }
            feather_alpha[g] = alpha;
            let (x, y) = (g % w, g / w);
            let orig = img.get(x, y);
            let mut rgb = [0.0; 3];
            for c in 0..3 {
                rgb[c] = alpha * matchers[c].map(orig[c]) + (1.0 - alpha) * orig[c];
            }
            out.set(x, y, rgb);
        }
    }
    Ok(out)
}

/// Mean over the mask of the green-versus-magenta chroma offset
/// `G - (R + B) / 2` of `img`, relative to the same quantity in `gt`.
/// Positive values mean the region is greener than ground truth.
pub fn green_excess(img: &RasterImage, gt: &RasterImage, mask: &GrayField) -> Result<f64> {
    ensure_same_dims("green_excess", img.dims(), gt.dims())?;
    ensure_same_dims("green_excess mask", img.dims(), mask.dims())?;
    let chroma = |im: &RasterImage, i: usize| {
        im.plane(Channel::Green)[i] - 0.5 * (im.plane(Channel::Red)[i] + im.plane(Channel::Blue)[i])
    };
    let mut sum = 0.0;
    let mut n = 0usize;
    for (i, &m) in mask.values().iter().enumerate() {
        if m > 0.5 {
            sum += chroma(img, i) - chroma(gt, i);
            n += 1;
        }
    }
    if n == 0 {
        return Err(Error::domain("green_excess needs a nonempty mask"));
    }
    Ok(sum / n as f64)
}
