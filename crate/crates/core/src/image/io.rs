use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use image::codecs::png::PngEncoder;
use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageError, ImageReader};

use super::{GrayField, RasterImage};
use crate::error::{Error, Result};

/// Sample depth of a written PNG.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BitDepth {
    #[default]
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn max_value(self) -> f64 {
        match self {
            BitDepth::Eight => 255.0,
            BitDepth::Sixteen => 65535.0,
        }
    }

    pub fn from_bits(bits: u32) -> Result<Self> {
        match bits {
            8 => Ok(BitDepth::Eight),
            16 => Ok(BitDepth::Sixteen),
            other => Err(Error::domain(format!(
                "unsupported output bit depth {other}, expected 8 or 16"
            ))),
        }
    }
}

fn map_decode_error(path: &Path, err: ImageError) -> Error {
    match err {
        ImageError::IoError(source) => Error::io(path, source),
        other => Error::Format {
            path: path.to_path_buf(),
            message: other.to_string(),
        },
    }
}

fn decode(path: &Path) -> Result<DynamicImage> {
    let reader = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    reader.decode().map_err(|e| map_decode_error(path, e))
}

/// Loads a PNG or JPEG into `[0, 1]` planes.
///
/// 8-bit samples are divided by 255 and 16-bit samples by 65535. Gray
/// inputs are replicated into all three planes and alpha is discarded.
pub fn load_image(path: impl AsRef<Path>) -> Result<RasterImage> {
    let path = path.as_ref();
    let img = decode(path)?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    match img {
        DynamicImage::ImageLuma8(_)
        | DynamicImage::ImageLumaA8(_)
        | DynamicImage::ImageRgb8(_)
        | DynamicImage::ImageRgba8(_) => {
            let rgb = img.to_rgb8();
            let planes = split_planes(rgb.as_raw(), w * h, |s: u8| f64::from(s) / 255.0);
            RasterImage::from_planes(w, h, planes)
        }
        DynamicImage::ImageLuma16(_)
        | DynamicImage::ImageLumaA16(_)
        | DynamicImage::ImageRgb16(_)
        | DynamicImage::ImageRgba16(_) => {
            let rgb = img.to_rgb16();
            let planes = split_planes(rgb.as_raw(), w * h, |s: u16| f64::from(s) / 65535.0);
            RasterImage::from_planes(w, h, planes)
        }
        other => Err(Error::Format {
            path: path.to_path_buf(),
            message: format!("unsupported sample type {:?}", other.color()),
        }),
    }
}

fn split_planes<T: Copy>(interleaved: &[T], n: usize, scale: impl Fn(T) -> f64) -> [Vec<f64>; 3] {
    let mut planes = [
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    ];
    for px in interleaved.chunks_exact(3) {
        for c in 0..3 {
            planes[c].push(scale(px[c]));
        }
    }
    planes
}

fn quantize(v: f64, max: f64) -> f64 {
    (v.clamp(0.0, 1.0) * max).round()
}

fn write_png(path: &Path, bytes: &[u8], w: usize, h: usize, color: ExtendedColorType) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let encoder = PngEncoder::new(BufWriter::new(file));
    encoder
        .write_image(bytes, w as u32, h as u32, color)
        .map_err(|e| map_decode_error(path, e))
}

/// Writes a lossless RGB PNG at the requested depth.
pub fn save_image(img: &RasterImage, path: impl AsRef<Path>, depth: BitDepth) -> Result<()> {
    let path = path.as_ref();
    let (w, h) = img.dims();
    let [r, g, b] = img.planes();
    match depth {
        BitDepth::Eight => {
            let mut bytes = Vec::with_capacity(w * h * 3);
            for i in 0..w * h {
                for plane in [r, g, b] {
                    bytes.push(quantize(plane[i], 255.0) as u8);
                }
            }
            write_png(path, &bytes, w, h, ExtendedColorType::Rgb8)
        }
        BitDepth::Sixteen => {
            let mut bytes = Vec::with_capacity(w * h * 6);
            for i in 0..w * h {
                for plane in [r, g, b] {
                    bytes.extend_from_slice(&(quantize(plane[i], 65535.0) as u16).to_ne_bytes());
                }
            }
            write_png(path, &bytes, w, h, ExtendedColorType::Rgb16)
        }
    }
}

/// Writes a binary mask as single-channel 8-bit PNG: 255 where the field
/// exceeds 0.5, 0 elsewhere.
pub fn save_mask(mask: &GrayField, path: impl AsRef<Path>) -> Result<()> {
    let bytes: Vec<u8> = mask
        .values()
        .iter()
        .map(|&v| if v > 0.5 { 255 } else { 0 })
        .collect();
    write_png(path.as_ref(), &bytes, mask.width(), mask.height(), ExtendedColorType::L8)
}

/// Loads a mask file; any pixel whose mean channel value is above half
/// scale counts as defect (1.0), the rest as clean (0.0).
pub fn load_mask(path: impl AsRef<Path>) -> Result<GrayField> {
    let img = load_image(path)?;
    let (w, h) = img.dims();
    let [r, g, b] = img.planes();
    let values = (0..w * h)
        .map(|i| if (r[i] + g[i] + b[i]) / 3.0 > 0.5 { 1.0 } else { 0.0 })
        .collect();
    GrayField::from_vec(w, h, values)
}
