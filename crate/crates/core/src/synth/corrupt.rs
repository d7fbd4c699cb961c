use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::SynthConfig;
use super::layout::{rasterize_layout, sample_layout, DefectLayout, MIN_SIDE};
use super::rings::{assign_rings, perturb_table, CorruptionTable, RingField};
use crate::error::{ensure_same_dims, Error, Result};
use crate::image::{gaussian_blur, Channel, GrayField, RasterImage};

/// Applies the ring multipliers to `clean`.
///
/// Per channel the change `p_c * I_c - I_c` is scaled by the falloff
/// intensity, smoothed with a Gaussian of `sigma` (skipped for `None`) and
/// added to the clean sample. The mask marks pixels whose largest smoothed
/// channel change exceeds `mask_threshold`.
pub fn apply_corruption(
    clean: &RasterImage,
    rings: &RingField,
    table: &CorruptionTable,
    sigma: Option<f64>,
    mask_threshold: f64,
) -> Result<(RasterImage, GrayField)> {
    ensure_same_dims("apply_corruption", clean.dims(), rings.intensity.dims())?;
    if let Some(s) = sigma {
        if !(s > 0.0) {
            return Err(Error::domain(format!("blur sigma must be positive, got {s}")));
        }
    }
    let (w, h) = clean.dims();
    let lut = table.lookup();
    let intensity = rings.intensity.values();

    let mut deltas = Vec::with_capacity(3);
    for c in Channel::ALL {
        let plane = clean.plane(c);
        let raw: Vec<f64> = (0..w * h)
            .map(|i| match lut[rings.labels[i].code() as usize] {
                Some(m) => (m.get(c) * plane[i] - plane[i]) * intensity[i],
                None => 0.0,
            })
            .collect();
        let raw = GrayField::from_vec(w, h, raw)?;
        deltas.push(match sigma {
            Some(s) => gaussian_blur(&raw, s)?,
            None => raw,
        });
    }

    let mask: Vec<f64> = (0..w * h)
        .map(|i| {
            let change = deltas.iter().map(|d| d.values()[i].abs()).fold(0.0, f64::max);
            if change > mask_threshold {
                1.0
            } else {
                0.0
            }
        })
        .collect();

    let planes = [0, 1, 2].map(|c| {
        let plane = clean.plane(Channel::ALL[c]);
        plane
            .iter()
            .zip(deltas[c].values())
            .map(|(v, d)| v + d)
            .collect::<Vec<_>>()
    });
    let defected = RasterImage::from_planes(w, h, planes)?;
    Ok((defected, GrayField::from_vec(w, h, mask)?))
}

/// Result of one synthesis run.
#[derive(Debug, Clone)]
pub struct SyntheticPair {
    pub defected: RasterImage,
    pub mask: GrayField,
    pub layout: DefectLayout,
    pub table: CorruptionTable,
    pub rings: RingField,
}

/// Full simulation for one image: layout, rasterization, rings,
/// perturbed dictionary, corruption. A pure function of its arguments.
pub fn synthesize_pair(clean: &RasterImage, seed: u64, config: &SynthConfig) -> Result<SyntheticPair> {
    config.validate()?;
    let (w, h) = clean.dims();
    if w < MIN_SIDE || h < MIN_SIDE {
        return Err(Error::domain(format!(
            "synthesis needs at least {MIN_SIDE}x{MIN_SIDE} pixels, got {w}x{h}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let layout = sample_layout(&mut rng, w, h, config)?;
    let intensity = rasterize_layout(&layout, w, h, config);
    let rings = assign_rings(&intensity, &config.rings)?;
    let table = perturb_table(&CorruptionTable::reference(), &mut rng, config.corruption.perturbation);
    let (defected, mask) = apply_corruption(
        clean,
        &rings,
        &table,
        Some(config.sigma_for_width(w)),
        config.corruption.mask_threshold,
    )?;
    Ok(SyntheticPair {
        defected,
        mask,
        layout,
        table,
        rings,
    })
}
