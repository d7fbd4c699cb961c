//! 8-connected components of binary masks.

use crate::image::GrayField;

/// Inclusive bounding box in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundingBox {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl BoundingBox {
    pub fn width(&self) -> usize {
        self.x1 - self.x0 + 1
    }

    pub fn height(&self) -> usize {
        self.y1 - self.y0 + 1
    }

    pub fn area(&self) -> usize {
        self.width() * self.height()
    }

    /// Grows the box by `pad` on every side, clipped to the image.
    pub fn padded(&self, pad: usize, width: usize, height: usize) -> Self {
        Self {
            x0: self.x0.saturating_sub(pad),
            y0: self.y0.saturating_sub(pad),
            x1: (self.x1 + pad).min(width - 1),
            y1: (self.y1 + pad).min(height - 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Row-major pixel indices, ascending.
    pub pixels: Vec<usize>,
    pub bbox: BoundingBox,
}

/// Components of the pixels where `mask > 0.5`, in raster order of their
/// first pixel.
pub fn connected_components(mask: &GrayField) -> Vec<Component> {
    let (w, h) = mask.dims();
    let on = mask.to_bits();
    let mut seen = vec![false; w * h];
    let mut out = Vec::new();
    let mut stack = Vec::new();

    for start in 0..w * h {
        if !on[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut pixels = Vec::new();
        let (sx, sy) = (start % w, start / w);
        let mut bbox = BoundingBox { x0: sx, y0: sy, x1: sx, y1: sy };
        while let Some(i) = stack.pop() {
            pixels.push(i);
            let (x, y) = (i % w, i / w);
            bbox.x0 = bbox.x0.min(x);
            bbox.x1 = bbox.x1.max(x);
            bbox.y0 = bbox.y0.min(y);
            bbox.y1 = bbox.y1.max(y);
            for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                    let j = ny * w + nx;
                    if on[j] && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        pixels.sort_unstable();
        out.push(Component { pixels, bbox });
    }
    out
}

/// Chebyshev dilation of a boolean raster by `radius` pixels.
pub fn dilate(bits: &[bool], width: usize, height: usize, radius: usize) -> Vec<bool> {
    // Separable max filter: rows then columns.
    let mut rows = vec![false; bits.len()];
    for y in 0..height {
        let row = &bits[y * width..(y + 1) * width];
        let mut last_on: Option<usize> = None;
        let mut next_on = vec![usize::MAX; width];
        let mut nxt = usize::MAX;
        for x in (0..width).rev() {
            if row[x] {
                nxt = x;
            }
            next_on[x] = nxt;
        }
        for x in 0..width {
            if row[x] {
                last_on = Some(x);
            }
            let near_left = last_on.is_some_and(|l| x - l <= radius);
            let near_right = next_on[x] != usize::MAX && next_on[x] - x <= radius;
            rows[y * width + x] = near_left || near_right;
        }
    }
    let mut out = vec![false; bits.len()];
    for x in 0..width {
        let mut last_on: Option<usize> = None;
        let mut next_on = vec![usize::MAX; height];
        let mut nxt = usize::MAX;
        for y in (0..height).rev() {
            if rows[y * width + x] {
                nxt = y;
            }
            next_on[y] = nxt;
        }
        for y in 0..height {
            if rows[y * width + x] {
                last_on = Some(y);
            }
            let near_up = last_on.is_some_and(|l| y - l <= radius);
            let near_down = next_on[y] != usize::MAX && next_on[y] - y <= radius;
            out[y * width + x] = near_up || near_down;
        }
    }
    out
}
