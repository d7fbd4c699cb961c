//! Corruption rings: intensity bands, their labels and the per-channel
//! multiplier dictionary.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::RingBands;
use crate::error::{Error, Result};
use crate::image::{Channel, GrayField};

/// Ring label as used by the corruption dictionary. The discriminants are
/// the dictionary keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum RingLabel {
    None = 0,
    LightGreen = 1,
    Middle = 2,
    MiddleInner = 3,
    DarkGreenSecond = 4,
    OuterOrange = 9,
    Surface = 20,
    DarkMid = 99,
}

impl RingLabel {
    /// Damaged labels ordered from the outermost band to the core.
    pub const OUTSIDE_IN: [RingLabel; 7] = [
        RingLabel::Surface,
        RingLabel::OuterOrange,
        RingLabel::LightGreen,
        RingLabel::Middle,
        RingLabel::MiddleInner,
        RingLabel::DarkGreenSecond,
        RingLabel::DarkMid,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(RingLabel::None),
            1 => Some(RingLabel::LightGreen),
            2 => Some(RingLabel::Middle),
            3 => Some(RingLabel::MiddleInner),
            4 => Some(RingLabel::DarkGreenSecond),
            9 => Some(RingLabel::OuterOrange),
            20 => Some(RingLabel::Surface),
            99 => Some(RingLabel::DarkMid),
            _ => None,
        }
    }

    /// Position in [`RingLabel::OUTSIDE_IN`], `None` for the clean label.
    pub fn depth(self) -> Option<usize> {
        Self::OUTSIDE_IN.iter().position(|&l| l == self)
    }
}

/// Falloff intensity together with the ring label derived from it.
#[derive(Debug, Clone, PartialEq)]
pub struct RingField {
    pub intensity: GrayField,
    pub labels: Vec<RingLabel>,
}

impl RingField {
    pub fn label(&self, x: usize, y: usize) -> RingLabel {
        self.labels[y * self.intensity.width() + x]
    }
}

/// Maps a single intensity to its band. Bands are left-open, right-closed:
/// `(0, e0]` is the surface band, `(e5, 1]` the dark core.
pub fn band_label(intensity: f64, bands: &RingBands) -> RingLabel {
    if intensity <= 0.0 {
        return RingLabel::None;
    }
    bands
        .edges
        .iter()
        .position(|&edge| intensity <= edge)
        .map_or(RingLabel::DarkMid, |i| RingLabel::OUTSIDE_IN[i])
}

pub fn assign_rings(intensity: &GrayField, bands: &RingBands) -> Result<RingField> {
    let mut labels = Vec::with_capacity(intensity.len());
    for &v in intensity.values() {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::domain(format!(
                "ring assignment needs intensities in [0, 1], got {v}"
            )));
        }
        labels.push(band_label(v, bands));
    }
    Ok(RingField {
        intensity: intensity.clone(),
        labels,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelMultipliers {
    pub blue: f64,
    pub green: f64,
    pub red: f64,
}

impl ChannelMultipliers {
    pub const fn new(blue: f64, green: f64, red: f64) -> Self {
        Self { blue, green, red }
    }

    pub fn get(&self, c: Channel) -> f64 {
        match c {
            Channel::Red => self.red,
            Channel::Green => self.green,
            Channel::Blue => self.blue,
        }
    }
}

/// Ring label to channel multiplier dictionary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorruptionTable {
    entries: Vec<(RingLabel, ChannelMultipliers)>,
}

impl Default for CorruptionTable {
    fn default() -> Self {
        Self::reference()
    }
}

impl CorruptionTable {
    /// The measured greening dictionary.
    pub fn reference() -> Self {
        use RingLabel::*;
        Self {
            entries: vec![
                (OuterOrange, ChannelMultipliers::new(0.6, 0.85, 1.05)),
                (LightGreen, ChannelMultipliers::new(0.5, 1.2, 0.8)),
                (Middle, ChannelMultipliers::new(0.4, 0.8, 0.6)),
                (MiddleInner, ChannelMultipliers::new(0.4, 0.8, 0.6)),
                (DarkGreenSecond, ChannelMultipliers::new(0.2, 0.6, 0.1)),
                (DarkMid, ChannelMultipliers::new(0.2, 0.2, 0.1)),
                (Surface, ChannelMultipliers::new(0.4, 0.95, 0.6)),
            ],
        }
    }

    pub fn get(&self, label: RingLabel) -> Option<ChannelMultipliers> {
        self.entries
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, m)| *m)
    }

    pub fn entries(&self) -> &[(RingLabel, ChannelMultipliers)] {
        &self.entries
    }

    /// Dense lookup indexed by label code, `None` where absent.
    pub(crate) fn lookup(&self) -> [Option<ChannelMultipliers>; 100] {
        let mut lut = [None; 100];
        for (label, m) in &self.entries {
            lut[label.code() as usize] = Some(*m);
        }
        lut
    }
}

/// Scales every multiplier by `1 + u`, `u ~ U[-amplitude, amplitude]`,
/// drawn per ring and channel in table order (blue, green, red).
pub fn perturb_table<R: Rng + ?Sized>(
    base: &CorruptionTable,
    rng: &mut R,
    amplitude: f64,
) -> CorruptionTable {
    let mut jitter = |m: f64| m * (1.0 + rng.random_range(-amplitude..=amplitude));
    CorruptionTable {
        entries: base
            .entries
            .iter()
            .map(|(label, m)| {
                let blue = jitter(m.blue);
                let green = jitter(m.green);
                let red = jitter(m.red);
                (*label, ChannelMultipliers { blue, green, red })
            })
            .collect(),
    }
}
