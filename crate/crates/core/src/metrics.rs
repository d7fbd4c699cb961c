//! Full-reference quality metrics on `[0, 1]` RGB rasters.
//!
//! SSIM uses the usual 11x11 Gaussian window with sigma 1.5 and
//! `K1 = 0.01`, `K2 = 0.03`, evaluated per RGB plane over valid window
//! positions only and averaged over planes.

use serde::{Deserialize, Serialize};

use crate::components::connected_components;
use crate::error::{ensure_same_dims, Error, Result};
use crate::image::{Channel, GrayField, RasterImage};

pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
pub const C1: f64 = 0.01 * 0.01;
pub const C2: f64 = 0.03 * 0.03;
pub const MS_SSIM_WEIGHTS: [f64; 5] = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];
/// Padding added around each mask component before cropping.
pub const CROPOUT_PADDING: usize = 8;

pub fn mse(pred: &RasterImage, reference: &RasterImage) -> Result<f64> {
    ensure_same_dims("mse", pred.dims(), reference.dims())?;
    let total: f64 = pred
        .planes()
        .iter()
        .zip(reference.planes())
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>())
        .sum();
    Ok(total / (pred.len() * 3) as f64)
}

/// `10 * log10(1 / MSE)`; identical images give `f64::INFINITY`.
pub fn psnr(pred: &RasterImage, reference: &RasterImage) -> Result<f64> {
    let m = mse(pred, reference)?;
    Ok(if m == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (1.0 / m).log10()
    })
}

/// Odd-sized separable Gaussian window.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    taps: Vec<f64>,
}

impl Window {
    pub fn standard() -> Self {
        Self::new(SSIM_WINDOW, SSIM_SIGMA)
    }

    /// Normalized Gaussian taps of odd `size`.
    pub fn new(size: usize, sigma: f64) -> Self {
        assert!(size % 2 == 1, "window size must be odd");
        let r = (size / 2) as isize;
        let mut taps: Vec<f64> = (-r..=r)
            .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
            .collect();
        let s: f64 = taps.iter().sum();
        taps.iter_mut().for_each(|t| *t /= s);
        Self { taps }
    }

    /// Largest odd window not exceeding 11 or the smaller crop side, with
    /// sigma scaled in proportion.
    pub fn fitting(width: usize, height: usize) -> Self {
        let side = width.min(height).min(SSIM_WINDOW);
        let size = if side % 2 == 1 { side } else { side - 1 };
        if size == SSIM_WINDOW {
            Self::standard()
        } else {
            Self::new(size, SSIM_SIGMA * size as f64 / SSIM_WINDOW as f64)
        }
    }

    pub fn size(&self) -> usize {
        self.taps.len()
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }
}

/// Mean SSIM and mean contrast-structure term of one plane pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimStats {
    pub ssim: f64,
    pub cs: f64,
}

/// Valid-mode separable filtering of a row-major plane.
fn filter_valid(plane: &[f64], w: usize, h: usize, taps: &[f64]) -> (Vec<f64>, usize, usize) {
    let k = taps.len();
    let (ow, oh) = (w + 1 - k, h + 1 - k);
    let mut rows = vec![0.0; ow * h];
    for y in 0..h {
        let src = &plane[y * w..(y + 1) * w];
        for x in 0..ow {
            rows[y * ow + x] = src[x..x + k].iter().zip(taps).map(|(a, t)| a * t).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            let mut s = 0.0;
            for (j, t) in taps.iter().enumerate() {
                s += rows[(y + j) * ow + x] * t;
            }
            out[y * ow + x] = s;
        }
    }
    (out, ow, oh)
}

pub fn plane_ssim(a: &[f64], b: &[f64], w: usize, h: usize, window: &Window) -> SsimStats {
    let taps = window.taps();
    let aa: Vec<f64> = a.iter().map(|v| v * v).collect();
    let bb: Vec<f64> = b.iter().map(|v| v * v).collect();
    let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    let (mu_a, ow, oh) = filter_valid(a, w, h, taps);
    let (mu_b, ..) = filter_valid(b, w, h, taps);
    let (e_aa, ..) = filter_valid(&aa, w, h, taps);
    let (e_bb, ..) = filter_valid(&bb, w, h, taps);
    let (e_ab, ..) = filter_valid(&ab, w, h, taps);

    let n = (ow * oh) as f64;
    let (mut ssim_sum, mut cs_sum) = (0.0, 0.0);
    for i in 0..ow * oh {
        let (ma, mb) = (mu_a[i], mu_b[i]);
        let var_a = e_aa[i] - ma * ma;
        let var_b = e_bb[i] - mb * mb;
        let cov = e_ab[i] - ma * mb;
        let cs = (2.0 * cov + C2) / (var_a + var_b + C2);
        let lum = (2.0 * ma * mb + C1) / (ma * ma + mb * mb + C1);
        ssim_sum += lum * cs;
        cs_sum += cs;
    }
    SsimStats {
        ssim: ssim_sum / n,
        cs: cs_sum / n,
    }
}

/// SSIM with an explicit window; both images must be at least as large
/// as the window.
pub fn ssim_with_window(pred: &RasterImage, reference: &RasterImage, window: &Window) -> Result<f64> {
    ensure_same_dims("ssim", pred.dims(), reference.dims())?;
    let (w, h) = pred.dims();
    if w < window.size() || h < window.size() {
        return Err(Error::domain(format!(
            "ssim needs at least {0}x{0} pixels, got {w}x{h}",
            window.size()
        )));
    }
    let total: f64 = Channel::ALL
        .iter()
        .map(|&c| plane_ssim(pred.plane(c), reference.plane(c), w, h, window).ssim)
        .sum();
    Ok(total / 3.0)
}

pub fn ssim(pred: &RasterImage, reference: &RasterImage) -> Result<f64> {
    ssim_with_window(pred, reference, &Window::standard())
}

/// 2x2 mean pooling; a trailing odd row or column is dropped.
pub fn downsample_plane(plane: &[f64], w: usize, h: usize) -> (Vec<f64>, usize, usize) {
    let (ow, oh) = (w / 2, h / 2);
    let mut out = Vec::with_capacity(ow * oh);
    for y in 0..oh {
        for x in 0..ow {
            let i = 2 * y * w + 2 * x;
            out.push(0.25 * (plane[i] + plane[i + 1] + plane[i + w] + plane[i + w + 1]));
        }
    }
    (out, ow, oh)
}

/// Smallest side accepted by [`ms_ssim_scales`] for `scales` levels.
pub fn ms_ssim_min_side(scales: usize) -> usize {
    SSIM_WINDOW << (scales - 1)
}

/// Five-scale MS-SSIM.
pub fn ms_ssim(pred: &RasterImage, reference: &RasterImage) -> Result<f64> {
    ms_ssim_scales(pred, reference, MS_SSIM_WEIGHTS.len())
}

/// MS-SSIM over the first `scales` levels. Fewer than five levels is the
/// explicit reduced mode, in which the leading exponents are renormalized
/// to sum to one.
pub fn ms_ssim_scales(pred: &RasterImage, reference: &RasterImage, scales: usize) -> Result<f64> {
    ensure_same_dims("ms_ssim", pred.dims(), reference.dims())?;
    if scales == 0 || scales > MS_SSIM_WEIGHTS.len() {
        return Err(Error::domain(format!("ms_ssim supports 1..=5 scales, got {scales}")));
    }
    let (w, h) = pred.dims();
    let min_side = ms_ssim_min_side(scales);
    if w < min_side || h < min_side {
        return Err(Error::domain(format!(
            "{scales}-scale ms_ssim needs at least {min_side}x{min_side} pixels, got {w}x{h}; \
             request fewer scales explicitly"
        )));
    }
    let weights = &MS_SSIM_WEIGHTS[..scales];
    let norm: f64 = if scales == MS_SSIM_WEIGHTS.len() {
        1.0
    } else {
        weights.iter().sum()
    };
    let window = Window::standard();

    let mut total = 0.0;
    for c in Channel::ALL {
        let mut a = pred.plane(c).to_vec();
        let mut b = reference.plane(c).to_vec();
        let (mut cw, mut ch) = (w, h);
        let mut value = 1.0;
        for (level, weight) in weights.iter().enumerate() {
            let stats = plane_ssim(&a, &b, cw, ch, &window);
            let term = if level + 1 == scales { stats.ssim } else { stats.cs };
            value *= term.max(0.0).powf(weight / norm);
            if level + 1 < scales {
                let (na, nw, nh) = downsample_plane(&a, cw, ch);
                let (nb, ..) = downsample_plane(&b, cw, ch);
                a = na;
                b = nb;
                cw = nw;
                ch = nh;
            }
        }
        total += value;
    }
    Ok(total / 3.0)
}

/// Area-weighted SSIM over the padded bounding boxes of every 8-connected
/// mask component.
pub fn cropout_ssim(pred: &RasterImage, reference: &RasterImage, mask: &GrayField) -> Result<f64> {
    ensure_same_dims("cropout_ssim", pred.dims(), reference.dims())?;
    ensure_same_dims("cropout_ssim mask", pred.dims(), mask.dims())?;
    let (w, h) = pred.dims();
    let components = connected_components(mask);
    if components.is_empty() {
        return Err(Error::domain("cropout_ssim needs a mask with at least one defect pixel"));
    }
    let (mut weighted, mut area) = (0.0, 0.0);
    for comp in &components {
        let b = comp.bbox.padded(CROPOUT_PADDING, w, h);
        let p = pred.crop(b.x0, b.y0, b.width(), b.height())?;
        let r = reference.crop(b.x0, b.y0, b.width(), b.height())?;
        let window = Window::fitting(b.width(), b.height());
        let a = b.area() as f64;
        weighted += a * ssim_with_window(&p, &r, &window)?;
        area += a;
    }
    Ok(weighted / area)
}

/// Scores reported per evaluated pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    #[serde(with = "psnr_serde")]
    pub psnr_db: f64,
    pub ms_ssim: f64,
    pub ssim: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cropout_ssim: Option<f64>,
}

impl MetricsReport {
    pub fn evaluate(pred: &RasterImage, reference: &RasterImage, mask: Option<&GrayField>) -> Result<Self> {
        Ok(Self {
            psnr_db: psnr(pred, reference)?,
            ms_ssim: ms_ssim(pred, reference)?,
            ssim: ssim(pred, reference)?,
            cropout_ssim: mask.map(|m| cropout_ssim(pred, reference, m)).transpose()?,
        })
    }
}

/// Serializes PSNR values, writing the identical-image sentinel as the
/// string `"inf"`.
pub mod psnr_serde {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub const SENTINEL: &str = "inf";

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str(SENTINEL)
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) if t == SENTINEL => Ok(f64::INFINITY),
            Repr::Text(t) => Err(D::Error::custom(format!("bad psnr value {t:?}"))),
        }
    }
}
