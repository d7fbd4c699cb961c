//! Restoration loss: weighted spatial L1 plus an FFT-domain L1 term.
//!
//! Both terms are normalized by `N = width * height * 3`. The forward DFT
//! is unnormalized, so a constant offset `v` on an `h x w` plane shows up
//! as `v * h * w` in the DC bin.

use rustfft::num_complex::Complex;
use rustfft::{FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_same_dims, Error, Result};
use crate::image::{Channel, GrayField, RasterImage};

pub const DEFAULT_FREQUENCY_WEIGHT: f64 = 0.1;
pub const DEFAULT_THRESHOLD: f64 = 0.1;

/// The three spatial weightings compared in training experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossVariant {
    /// Defects weighted like the rest of the image, `w = 1.0`.
    Original,
    /// Defects weighted twice as much, `w = 0.5`.
    Loss2,
    /// Defects weighted ten times as much, `w = 0.1`.
    Loss10,
}

impl LossVariant {
    pub fn weight(self) -> f64 {
        match self {
            LossVariant::Original => 1.0,
            LossVariant::Loss2 => 0.5,
            LossVariant::Loss10 => 0.1,
        }
    }

    pub fn from_weight(w: f64) -> Option<Self> {
        [LossVariant::Original, LossVariant::Loss2, LossVariant::Loss10]
            .into_iter()
            .find(|v| v.weight() == w)
    }
}

/// Per-pixel weights: 1.0 where the input departs from ground truth by
/// more than the threshold, `w` elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    pub values: GrayField,
    pub w: f64,
}

impl WeightMatrix {
    /// Uniform weight, e.g. the unweighted L1 with `w = 1.0`.
    pub fn uniform(width: usize, height: usize, w: f64) -> Self {
        Self {
            values: GrayField::filled(width, height, w),
            w,
        }
    }
}

/// Largest absolute channel difference per pixel.
pub fn channel_max_abs_diff(a: &RasterImage, b: &RasterImage) -> Result<GrayField> {
    ensure_same_dims("channel difference", a.dims(), b.dims())?;
    let (w, h) = a.dims();
    let values = (0..w * h)
        .map(|i| {
            Channel::ALL
                .iter()
                .map(|&c| (a.plane(c)[i] - b.plane(c)[i]).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    GrayField::from_vec(w, h, values)
}

pub fn weight_matrix(input: &RasterImage, gt: &RasterImage, w: f64, t: f64) -> Result<WeightMatrix> {
    if !(w > 0.0 && w <= 1.0) {
        return Err(Error::domain(format!("weight w must lie in (0, 1], got {w}")));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain(format!("threshold t must lie in (0, 1), got {t}")));
    }
    let diff = channel_max_abs_diff(input, gt)?;
    let (width, height) = diff.dims();
    let values = diff
        .into_values()
        .into_iter()
        .map(|d| if d > t { 1.0 } else { w })
        .collect();
    Ok(WeightMatrix {
        values: GrayField::from_vec(width, height, values)?,
        w,
    })
}

fn sample_count(img: &RasterImage) -> f64 {
    (img.len() * 3) as f64
}

/// `(1/N) * sum W(x,y) * |pred_c - gt_c|` over pixels and channels.
pub fn spatial_loss(pred: &RasterImage, gt: &RasterImage, weights: &WeightMatrix) -> Result<f64> {
    ensure_same_dims("spatial_loss", pred.dims(), gt.dims())?;
    ensure_same_dims("spatial_loss weights", pred.dims(), weights.values.dims())?;
    let wv = weights.values.values();
    let mut total = 0.0;
    for c in Channel::ALL {
        let (p, g) = (pred.plane(c), gt.plane(c));
        total += p
            .iter()
            .zip(g)
            .zip(wv)
            .map(|((a, b), w)| w * (a - b).abs())
            .sum::<f64>();
    }
    Ok(total / sample_count(pred))
}

/// Unnormalized 2-D DFT of a real `width x height` plane, row-major.
pub fn fft2(plane: &[f64], width: usize, height: usize) -> Vec<Complex<f64>> {
    let mut data: Vec<Complex<f64>> = plane.iter().map(|&v| Complex::new(v, 0.0)).collect();
    transform2(&mut data, width, height, FftDirection::Forward);
    data
}

fn transform2(data: &mut [Complex<f64>], width: usize, height: usize, direction: FftDirection) {
    let mut planner = FftPlanner::new();
    let rows = planner.plan_fft(width, direction);
    rows.process(data);
    let mut transposed = transpose(data, width, height);
    let cols = planner.plan_fft(height, direction);
    cols.process(&mut transposed);
    data.copy_from_slice(&transpose(&transposed, height, width));
}

fn transpose(data: &[Complex<f64>], width: usize, height: usize) -> Vec<Complex<f64>> {
    let mut out = vec![Complex::new(0.0, 0.0); data.len()];
    for y in 0..height {
        for x in 0..width {
            out[x * height + y] = data[y * width + x];
        }
    }
    out
}

fn difference_spectra(pred: &RasterImage, gt: &RasterImage) -> Vec<Vec<Complex<f64>>> {
    let (w, h) = pred.dims();
    Channel::ALL
        .iter()
        .map(|&c| {
            let diff: Vec<f64> = pred.plane(c).iter().zip(gt.plane(c)).map(|(a, b)| a - b).collect();
            fft2(&diff, w, h)
        })
        .collect()
}

/// `(1/N) * sum |F(pred) - F(gt)|` over all complex bins and channels,
/// using the complex modulus.
pub fn frequency_loss(pred: &RasterImage, gt: &RasterImage) -> Result<f64> {
    ensure_same_dims("frequency_loss", pred.dims(), gt.dims())?;
    // F is linear, so F(pred) - F(gt) = F(pred - gt).
    let total: f64 = difference_spectra(pred, gt)
        .iter()
        .flatten()
        .map(|z| z.norm())
        .sum();
    Ok(total / sample_count(pred))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossReport {
    pub spatial: f64,
    pub frequency: f64,
    pub combined: f64,
    pub frequency_weight: f64,
}

impl LossReport {
    pub fn new(spatial: f64, frequency: f64, frequency_weight: f64) -> Self {
        Self {
            spatial,
            frequency,
            combined: spatial + frequency_weight * frequency,
            frequency_weight,
        }
    }
}

/// Weighted spatial term (weights from `input` vs `gt`) plus
/// `freq_weight` times the frequency term.
pub fn combined_loss(
    pred: &RasterImage,
    gt: &RasterImage,
    input: &RasterImage,
    w: f64,
    t: f64,
    freq_weight: f64,
) -> Result<LossReport> {
    ensure_same_dims("combined_loss", pred.dims(), gt.dims())?;
    let weights = weight_matrix(input, gt, w, t)?;
    let spatial = spatial_loss(pred, gt, &weights)?;
    let frequency = frequency_loss(pred, gt)?;
    Ok(LossReport::new(spatial, frequency, freq_weight))
}

/// Subgradient of [`combined_loss`] with respect to every `pred` sample,
/// one row-major plane per channel (red, green, blue). At `|pred - gt| = 0`
/// the spatial term contributes 0, and spectral bins with zero modulus
/// contribute 0.
pub fn combined_loss_gradient(
    pred: &RasterImage,
    gt: &RasterImage,
    input: &RasterImage,
    w: f64,
    t: f64,
    freq_weight: f64,
) -> Result<[Vec<f64>; 3]> {
    ensure_same_dims("combined_loss_gradient", pred.dims(), gt.dims())?;
    let weights = weight_matrix(input, gt, w, t)?;
    let (width, height) = pred.dims();
    let n = sample_count(pred);
    let spectra = difference_spectra(pred, gt);
    let wv = weights.values.values();

    let grads = [0, 1, 2].map(|ci| {
        let c = Channel::ALL[ci];
        // d|X_k|/dx = Re(IDFT(X / |X|)) with an unnormalized inverse.
        let mut phase: Vec<Complex<f64>> = spectra[ci]
            .iter()
            .map(|z| {
                let m = z.norm();
                if m > 0.0 {
                    z / m
                } else {
                    Complex::new(0.0, 0.0)
                }
            })
            .collect();
        transform2(&mut phase, width, height, FftDirection::Inverse);
        pred.plane(c)
            .iter()
            .zip(gt.plane(c))
            .zip(wv)
            .zip(&phase)
            .map(|(((p, g), wt), z)| {
                let d = p - g;
                let sign = if d > 0.0 {
                    1.0
                } else if d < 0.0 {
                    -1.0
                } else {
                    0.0
                };
                (wt * sign + freq_weight * z.re) / n
            })
            .collect()
    });
    Ok(grads)
}
