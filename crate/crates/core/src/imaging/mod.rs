//! Grayscale images, ROI masks, and the preparation steps applied before
//! feature extraction: cropping, patch standardization, normalization, and
//! gray-level discretization.

mod pngio;

pub use pngio::{read_gray_png, read_mask_png, write_gray16_png, write_gray8_png};

use crate::error::{Error, Result};

/// A 2D grayscale raster stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage2D {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
    /// Physical edge length of one pixel, in millimetres.
    pub pixel_spacing: f64,
}

impl GrayImage2D {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        Self::with_spacing(width, height, pixels, 1.0)
    }

    pub fn with_spacing(
        width: usize,
        height: usize,
        pixels: Vec<f64>,
        pixel_spacing: f64,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{} pixels supplied for a {width}x{height} image",
                pixels.len()
            )));
        }
        if let Some(i) = pixels.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidImage(format!(
                "non-finite intensity at row {}, column {}",
                i / width,
                i % width
            )));
        }
        if !(pixel_spacing.is_finite() && pixel_spacing > 0.0) {
            return Err(Error::InvalidImage(format!(
                "pixel spacing must be positive, got {pixel_spacing}"
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
            pixel_spacing,
        })
    }

    /// An image filled with a single value.
    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Builds an image from a row-major closure `f(row, col)`.
    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                pixels.push(f(r, c));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    /// Applies `f` to every pixel, keeping geometry and spacing.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::with_spacing(
            self.width,
            self.height,
            self.pixels.iter().map(|&v| f(v)).collect(),
            self.pixel_spacing,
        )
    }
}

/// Binary region of interest aligned with a [`GrayImage2D`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoiMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl RoiMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "mask dimensions must be positive, got {width}x{height}"
            )));
        }
        if bits.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{} mask bits supplied for a {width}x{height} mask",
                bits.len()
            )));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn full(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![true; width * height])
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut bits = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                bits.push(f(r, c));
            }
        }
        Self::new(width, height, bits)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col]
    }

    /// Like [`get`](Self::get) but false outside the raster.
    #[inline]
    pub fn contains(&self, row: isize, col: isize) -> bool {
        row >= 0
            && col >= 0
            && (row as usize) < self.height
            && (col as usize) < self.width
            && self.bits[row as usize * self.width + col as usize]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Row-major `(row, col)` coordinates of the foreground pixels.
    pub fn coordinates(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i / self.width, i % self.width))
    }

    /// Minimal `(row_min, row_max, col_min, col_max)` box, inclusive.
    pub fn bounding_box(&self) -> Option<(usize, usize, usize, usize)> {
        self.coordinates().fold(None, |acc, (r, c)| {
            Some(match acc {
                None => (r, r, c, c),
                Some((r0, r1, c0, c1)) => (r0.min(r), r1.max(r), c0.min(c), c1.max(c)),
            })
        })
    }

    pub(crate) fn check_pair(&self, image: &GrayImage2D) -> Result<()> {
        if self.width != image.width || self.height != image.height {
            return Err(Error::DimensionMismatch {
                expected: (image.width, image.height),
                found: (self.width, self.height),
            });
        }
        Ok(())
    }
}

/// Discrete gray levels in `1..=n_levels` over the pixels of a mask.
///
/// Pixels outside the mask carry level 0, which never occurs inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscretizedRoi {
    levels: Vec<u32>,
    n_levels: u32,
    mask: RoiMask,
}

impl DiscretizedRoi {
    /// Builds a ROI from explicit levels; out-of-mask entries are ignored.
    pub fn new(levels: Vec<u32>, n_levels: u32, mask: RoiMask) -> Result<Self> {
        if n_levels == 0 {
            return Err(Error::InvalidInput("level count must be at least 1".into()));
        }
        if levels.len() != mask.bits.len() {
            return Err(Error::LengthMismatch {
                expected: mask.bits.len(),
                found: levels.len(),
            });
        }
        if mask.is_empty() {
            return Err(Error::EmptyMask);
        }
        let mut levels = levels;
        for (l, &inside) in levels.iter_mut().zip(&mask.bits) {
            if !inside {
                *l = 0;
            } else if *l == 0 || *l > n_levels {
                return Err(Error::InvalidInput(format!(
                    "level {l} outside 1..={n_levels}"
                )));
            }
        }
        Ok(Self {
            levels,
            n_levels,
            mask,
        })
    }

    /// Convenience for tests and fixtures: every pixel in the mask, levels
    /// given row by row.
    pub fn from_rows(rows: &[&[u32]], n_levels: u32) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidInput("ragged rows".into()));
        }
        let levels: Vec<u32> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        let mask = RoiMask::new(width, height, levels.iter().map(|&l| l > 0).collect())?;
        Self::new(levels, n_levels, mask)
    }

    pub fn width(&self) -> usize {
        self.mask.width
    }

    pub fn height(&self) -> usize {
        self.mask.height
    }

    pub fn n_levels(&self) -> u32 {
        self.n_levels
    }

    pub fn mask(&self) -> &RoiMask {
        &self.mask
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    /// Level at `(row, col)` if the pixel lies inside the raster and the mask.
    #[inline]
    pub fn level(&self, row: isize, col: isize) -> Option<u32> {
        if self.mask.contains(row, col) {
            Some(self.levels[row as usize * self.mask.width + col as usize])
        } else {
            None
        }
    }

    pub fn pixel_count(&self) -> usize {
        self.mask.count()
    }
}

/// Crops image and mask to the tight bounding box of the mask foreground.
pub fn crop_to_bounding_box(image: &GrayImage2D, mask: &RoiMask) -> Result<(GrayImage2D, RoiMask)> {
    mask.check_pair(image)?;
    let (r0, r1, c0, c1) = mask.bounding_box().ok_or(Error::EmptyMask)?;
    let (w, h) = (c1 - c0 + 1, r1 - r0 + 1);
    let mut pixels = Vec::with_capacity(w * h);
    let mut bits = Vec::with_capacity(w * h);
    for r in r0..=r1 {
        let row = r * image.width;
        pixels.extend_from_slice(&image.pixels[row + c0..=row + c1]);
        bits.extend_from_slice(&mask.bits[row + c0..=row + c1]);
    }
    Ok((
        GrayImage2D::with_spacing(w, h, pixels, image.pixel_spacing)?,
        RoiMask::new(w, h, bits)?,
    ))
}

/// Produces a `target`×`target` patch.
///
/// Inputs that fit are centered in a zero field (odd slack goes to the
/// bottom/right). Larger inputs are bilinearly resampled so the longer side
/// equals `target`, aspect preserved, then centered the same way.
pub fn resize_or_pad_patch(image: &GrayImage2D, target: usize) -> Result<GrayImage2D> {
    if target == 0 {
        return Err(Error::InvalidInput("patch side must be at least 1".into()));
    }
    let (w, h) = (image.width, image.height);
    let (content, spacing) = if w <= target && h <= target {
        (image.clone(), image.pixel_spacing)
    } else {
        let longer = w.max(h);
        let scale = |d: usize| ((d * target) as f64 / longer as f64).round().max(1.0) as usize;
        let (nw, nh) = (scale(w).min(target), scale(h).min(target));
        let resized = bilinear_resample(image.pixels(), w, h, nw, nh);
        let spacing = image.pixel_spacing * longer as f64 / target as f64;
        (
            GrayImage2D::with_spacing(nw, nh, resized, spacing)?,
            spacing,
        )
    };
    let off_r = (target - content.height) / 2;
    let off_c = (target - content.width) / 2;
    let mut out = vec![0.0; target * target];
    for r in 0..content.height {
        let dst = (r + off_r) * target + off_c;
        out[dst..dst + content.width]
            .copy_from_slice(&content.pixels[r * content.width..(r + 1) * content.width]);
    }
    GrayImage2D::with_spacing(target, target, out, spacing)
}

/// Source coordinate sampled by output index `i` under corner alignment.
#[inline]
pub(crate) fn corner_aligned_coord(i: usize, n_in: usize, n_out: usize) -> f64 {
    if n_out == 1 {
        (n_in - 1) as f64 / 2.0
    } else {
        i as f64 * (n_in - 1) as f64 / (n_out - 1) as f64
    }
}

/// Bilinear resampling with corner alignment: the output corners sample the
/// input corners exactly.
pub(crate) fn bilinear_resample(
    src: &[f64],
    w: usize,
    h: usize,
    out_w: usize,
    out_h: usize,
) -> Vec<f64> {
    let mut out = Vec::with_capacity(out_w * out_h);
    for r in 0..out_h {
        let y = corner_aligned_coord(r, h, out_h);
        let y0 = (y.floor() as usize).min(h - 1);
        let y1 = (y0 + 1).min(h - 1);
        let fy = y - y0 as f64;
        for c in 0..out_w {
            let x = corner_aligned_coord(c, w, out_w);
            let x0 = (x.floor() as usize).min(w - 1);
            let x1 = (x0 + 1).min(w - 1);
            let fx = x - x0 as f64;
            let top = src[y0 * w + x0] * (1.0 - fx) + src[y0 * w + x1] * fx;
            let bottom = src[y1 * w + x0] * (1.0 - fx) + src[y1 * w + x1] * fx;
            out.push(top * (1.0 - fy) + bottom * fy);
        }
    }
    out
}

/// Maps in-mask intensities onto `n_levels` equal-width bins spanning the
/// ROI's own intensity range. A constant ROI maps entirely to level 1.
pub fn discretize_fixed_levels(
    image: &GrayImage2D,
    mask: &RoiMask,
    n_levels: u32,
) -> Result<DiscretizedRoi> {
    mask.check_pair(image)?;
    if n_levels == 0 {
        return Err(Error::InvalidInput("level count must be at least 1".into()));
    }
    let (lo, hi) = image
        .pixels
        .iter()
        .zip(&mask.bits)
        .filter(|(_, &b)| b)
        .fold(None, |acc: Option<(f64, f64)>, (&v, _)| {
            Some(match acc {
                None => (v, v),
                Some((lo, hi)) => (lo.min(v), hi.max(v)),
            })
        })
        .ok_or(Error::EmptyMask)?;
    let range = hi - lo;
    let ng = n_levels as f64;
    let levels = image
        .pixels
        .iter()
        .zip(&mask.bits)
        .map(|(&v, &inside)| {
            if !inside {
                0
            } else if range == 0.0 {
                1
            } else {
                let bin = ((v - lo) / range * ng).floor() as u32 + 1;
                bin.min(n_levels)
            }
        })
        .collect();
    Ok(DiscretizedRoi {
        levels,
        n_levels,
        mask: mask.clone(),
    })
}

/// Rescales intensities to `[0, 1]` using the image's own extremes.
/// Constant images map to all zeros.
pub fn min_max_normalize(image: &GrayImage2D) -> GrayImage2D {
    let lo = image.pixels.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = image
        .pixels
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    let pixels = image
        .pixels
        .iter()
        .map(|&v| if range > 0.0 { (v - lo) / range } else { 0.0 })
        .collect();
    GrayImage2D {
        pixels,
        ..image.clone()
    }
}
