//! Procedural stand-ins for scanned plates, for tests, benchmarks and
//! demos where no real collection is at hand.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::image::RasterImage;

/// A smooth, softly colored scene overlaid with fine per-channel grain,
/// loosely resembling a scanned autochrome. Samples stay within
/// `[0.15, 0.9]` so corruption is never hidden by clipping.
pub fn autochrome_plate(width: usize, height: usize, seed: u64) -> RasterImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Three low-frequency waves per channel.
    let waves: Vec<[(f64, f64, f64, f64); 3]> = (0..3)
        .map(|_| {
            [0; 3].map(|_| {
                (
                    rng.random_range(0.3..2.0),
                    rng.random_range(0.3..2.0),
                    rng.random_range(0.0..TAU),
                    rng.random_range(0.04..0.1),
                )
            })
        })
        .collect();
    let base: [f64; 3] = [0; 3].map(|_| rng.random_range(0.4..0.65));
    let (w, h) = (width as f64, height as f64);
    let mut grain = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    RasterImage::from_fn(width, height, |x, y| {
        let (u, v) = (x as f64 / w, y as f64 / h);
        let shared: f64 = grain.random_range(-0.03..0.03);
        let mut rgb = [0.0; 3];
        for c in 0..3 {
            let mut s = base[c];
            for &(fx, fy, phase, amp) in &waves[c] {
                s += amp * (TAU * (fx * u + fy * v) + phase).sin();
            }
            s += shared + grain.random_range(-0.025..0.025);
            rgb[c] = s.clamp(0.15, 0.9);
        }
        rgb
    })
    .expect("nonzero dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plate_is_deterministic_and_bounded() {
        let a = autochrome_plate(64, 48, 3);
        assert_eq!(a, autochrome_plate(64, 48, 3));
        assert_ne!(a, autochrome_plate(64, 48, 4));
        assert!(a.planes().iter().flatten().all(|v| (0.15..=0.9).contains(v)));
    }
}
