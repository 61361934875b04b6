//! Single-level 2D Haar decomposition.
//!
//! Filters are orthonormal: low = (a + b)/√2, high = (a − b)/√2 where `a` is
//! the top (or left) sample of each pair. Columns are filtered first, then
//! rows. Odd dimensions are padded by replicating the last row/column.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::{GrayImage2D, RoiMask};

/// Subband identifiers. The first letter is the vertical filter, the second
/// the horizontal one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Subband {
    LL,
    LH,
    HL,
    HH,
}

impl Subband {
    pub const ALL: [Subband; 4] = [Subband::LL, Subband::LH, Subband::HL, Subband::HH];
}

/// The four subbands of one decomposition level.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarSubbands {
    pub ll: GrayImage2D,
    pub lh: GrayImage2D,
    pub hl: GrayImage2D,
    pub hh: GrayImage2D,
}

impl HaarSubbands {
    pub fn get(&self, band: Subband) -> &GrayImage2D {
        match band {
            Subband::LL => &self.ll,
            Subband::LH => &self.lh,
            Subband::HL => &self.hl,
            Subband::HH => &self.hh,
        }
    }

    pub fn width(&self) -> usize {
        self.ll.width()
    }

    pub fn height(&self) -> usize {
        self.ll.height()
    }
}

pub fn haar_decompose(image: &GrayImage2D) -> Result<HaarSubbands> {
    let (w, h) = (image.width(), image.height());
    if w < 2 || h < 2 {
        return Err(Error::TooSmall {
            width: w,
            height: h,
        });
    }
    let (ow, oh) = (w.div_ceil(2), h.div_ceil(2));
    let px = image.pixels();
    let at = |r: usize, c: usize| px[r.min(h - 1) * w + c.min(w - 1)];

    // Vertical pass over column pairs of rows 2i, 2i+1, keeping full width
    // (padded to even).
    let pw = ow * 2;
    let mut low_v = vec![0.0; oh * pw];
    let mut high_v = vec![0.0; oh * pw];
    for i in 0..oh {
        for c in 0..pw {
            let (a, b) = (at(2 * i, c), at(2 * i + 1, c));
            low_v[i * pw + c] = (a + b) * FRAC_1_SQRT_2;
            high_v[i * pw + c] = (a - b) * FRAC_1_SQRT_2;
        }
    }

    let horizontal = |src: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let mut lo = Vec::with_capacity(oh * ow);
        let mut hi = Vec::with_capacity(oh * ow);
        for i in 0..oh {
            for j in 0..ow {
                let (a, b) = (src[i * pw + 2 * j], src[i * pw + 2 * j + 1]);
                lo.push((a + b) * FRAC_1_SQRT_2);
                hi.push((a - b) * FRAC_1_SQRT_2);
            }
        }
        (lo, hi)
    };
    let (ll, lh) = horizontal(&low_v);
    let (hl, hh) = horizontal(&high_v);

    let band = |data| GrayImage2D::with_spacing(ow, oh, data, image.pixel_spacing * 2.0);
    Ok(HaarSubbands {
        ll: band(ll)?,
        lh: band(lh)?,
        hl: band(hl)?,
        hh: band(hh)?,
    })
}

/// Projects a mask onto the subband grid: a coarse pixel is foreground when
/// at least two of its four (edge-replicated) source pixels are.
///
/// If that leaves nothing, falls back to "any source pixel" so that tiny or
/// scattered ROIs still produce a non-empty subband region.
pub fn downsample_mask(mask: &RoiMask) -> Result<RoiMask> {
    let (w, h) = (mask.width(), mask.height());
    let (ow, oh) = (w.div_ceil(2), h.div_ceil(2));
    let at = |r: usize, c: usize| mask.get(r.min(h - 1), c.min(w - 1)) as u8;
    let counts: Vec<u8> = (0..oh)
        .flat_map(|i| {
            (0..ow).map(move |j| {
                at(2 * i, 2 * j)
                    + at(2 * i, 2 * j + 1)
                    + at(2 * i + 1, 2 * j)
                    + at(2 * i + 1, 2 * j + 1)
            })
        })
        .collect();
    let majority: Vec<bool> = counts.iter().map(|&n| n >= 2).collect();
    if majority.iter().any(|&b| b) {
        RoiMask::new(ow, oh, majority)
    } else {
        RoiMask::new(ow, oh, counts.iter().map(|&n| n >= 1).collect())
    }
}
