//! Pixel data model: a planar RGB raster in `[0, 1]` and an unclamped
//! scalar field used for intensities, masks and weights.

mod blur;
mod io;

pub use blur::{gaussian_blur, gaussian_kernel};
pub use io::{load_image, load_mask, save_image, save_mask, BitDepth};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Red,
    Green,
    Blue,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::Red, Channel::Green, Channel::Blue];

    pub fn index(self) -> usize {
        match self {
            Channel::Red => 0,
            Channel::Green => 1,
            Channel::Blue => 2,
        }
    }
}

/// Three row-major planes (red, green, blue) of identical size.
///
/// Every constructor and mutator clamps samples into `[0, 1]`, so a value
/// of this type never holds an out-of-range sample. NaN is stored as 0.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    planes: [Vec<f64>; 3],
}

fn clamp_unit(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(0.0, 1.0)
    }
}

impl RasterImage {
    pub fn filled(width: usize, height: usize, rgb: [f64; 3]) -> Result<Self> {
        check_dims(width, height)?;
        let n = width * height;
        Ok(Self {
            width,
            height,
            planes: rgb.map(|v| vec![clamp_unit(v); n]),
        })
    }

    /// Builds an image from planes in red, green, blue order.
    pub fn from_planes(width: usize, height: usize, planes: [Vec<f64>; 3]) -> Result<Self> {
        check_dims(width, height)?;
        let n = width * height;
        if planes.iter().any(|p| p.len() != n) {
            return Err(Error::domain(format!(
                "plane lengths must equal {width}x{height} = {n}"
            )));
        }
        Ok(Self {
            width,
            height,
            planes: planes.map(|p| p.into_iter().map(clamp_unit).collect()),
        })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [f64; 3],
    ) -> Result<Self> {
        check_dims(width, height)?;
        let n = width * height;
        let mut planes = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        for y in 0..height {
            for x in 0..width {
                let rgb = f(x, y);
                for c in 0..3 {
                    planes[c][y * width + x] = clamp_unit(rgb[c]);
                }
            }
        }
        Ok(Self {
            width,
            height,
            planes,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn plane(&self, c: Channel) -> &[f64] {
        &self.planes[c.index()]
    }

    pub fn planes(&self) -> &[Vec<f64>; 3] {
        &self.planes
    }

    pub fn get(&self, x: usize, y: usize) -> [f64; 3] {
        let i = y * self.width + x;
        [self.planes[0][i], self.planes[1][i], self.planes[2][i]]
    }

    pub fn set(&mut self, x: usize, y: usize, rgb: [f64; 3]) {
        let i = y * self.width + x;
        for (plane, v) in self.planes.iter_mut().zip(rgb) {
            plane[i] = clamp_unit(v);
        }
    }

    /// Applies `f` to every sample of one plane, clamping the result.
    pub fn map_plane(&mut self, c: Channel, mut f: impl FnMut(usize, f64) -> f64) {
        for (i, v) in self.planes[c.index()].iter_mut().enumerate() {
            *v = clamp_unit(f(i, *v));
        }
    }

    /// Copies the `w`x`h` window whose top-left corner is `(x0, y0)`.
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<Self> {
        if w == 0 || h == 0 || x0 + w > self.width || y0 + h > self.height {
            return Err(Error::domain(format!(
                "crop {w}x{h}+{x0}+{y0} outside {}x{} image",
                self.width, self.height
            )));
        }
        let planes = self.planes.each_ref().map(|p| {
            let mut out = Vec::with_capacity(w * h);
            for y in y0..y0 + h {
                out.extend_from_slice(&p[y * self.width + x0..y * self.width + x0 + w]);
            }
            out
        });
        Ok(Self {
            width: w,
            height: h,
            planes,
        })
    }

    /// Mean of each plane over the pixels where `select` holds.
    pub fn masked_means(&self, mut select: impl FnMut(usize) -> bool) -> Option<[f64; 3]> {
        let mut sums = [0.0; 3];
        let mut count = 0usize;
        for i in 0..self.len() {
            if select(i) {
                count += 1;
                for c in 0..3 {
                    sums[c] += self.planes[c][i];
                }
            }
        }
        (count > 0).then(|| sums.map(|s| s / count as f64))
    }
}

/// Scalar field of the same shape as an image. Values are not clamped;
/// their meaning depends on the producer.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayField {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl GrayField {
    pub fn zeros(width: usize, height: usize) -> Self {
        Self::filled(width, height, 0.0)
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Self {
            width,
            height,
            values: vec![value; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != width * height {
            return Err(Error::domain(format!(
                "field of {width}x{height} needs {} values, got {}",
                width * height,
                values.len()
            )));
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                values.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            values,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.values[y * self.width + x] = v;
    }

    /// Number of entries strictly greater than `threshold`.
    pub fn count_above(&self, threshold: f64) -> usize {
        self.values.iter().filter(|&&v| v > threshold).count()
    }

    /// Binary view: `true` where the value exceeds 0.5.
    pub fn to_bits(&self) -> Vec<bool> {
        self.values.iter().map(|&v| v > 0.5).collect()
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::domain(format!(
            "image dimensions must be at least 1x1, got {width}x{height}"
        )));
    }
    Ok(())
}
