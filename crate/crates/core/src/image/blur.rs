use super::GrayField;
use crate::error::{Error, Result};

/// Normalized 1-D Gaussian taps truncated at radius `ceil(3 * sigma)`.
/// The returned vector has `2 * radius + 1` entries summing to one.
pub fn gaussian_kernel(sigma: f64) -> Result<Vec<f64>> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain(format!("blur sigma must be positive, got {sigma}")));
    }
    let radius = (3.0 * sigma).ceil() as isize;
    let denom = 2.0 * sigma * sigma;
    let mut taps: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / denom).exp())
        .collect();
    let total: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= total);
    Ok(taps)
}

/// Separable Gaussian blur with edge replication at the borders.
pub fn gaussian_blur(field: &GrayField, sigma: f64) -> Result<GrayField> {
    let kernel = gaussian_kernel(sigma)?;
    let (w, h) = field.dims();
    let mut tmp = vec![0.0; w * h];
    let mut out = vec![0.0; w * h];
    let src = field.values();

    let r = (kernel.len() / 2) as isize;
    let (wi, hi) = (w as isize, h as isize);
    let mut line = Vec::new();

    // horizontal pass
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        line.clear();
        line.extend((-r..wi + r).map(|x| row[x.clamp(0, wi - 1) as usize]));
        convolve_line(&line, &kernel, &mut tmp[y * w..(y + 1) * w]);
    }

    // vertical pass
    let mut col_out = vec![0.0; h];
    for x in 0..w {
        line.clear();
        line.extend((-r..hi + r).map(|y| tmp[y.clamp(0, hi - 1) as usize * w + x]));
        convolve_line(&line, &kernel, &mut col_out);
        for (y, v) in col_out.iter().enumerate() {
            out[y * w + x] = *v;
        }
    }

    GrayField::from_vec(w, h, out)
}

/// `padded` carries `kernel.len() / 2` replicated samples on each side.
fn convolve_line(padded: &[f64], kernel: &[f64], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = padded[i..i + kernel.len()]
            .iter()
            .zip(kernel)
            .map(|(a, k)| a * k)
            .sum();
    }
}
