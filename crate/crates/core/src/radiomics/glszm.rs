use super::sizemat::{SizeCounts, SizeStats};
use super::{zip_names, FeatureTable, NamedValues, NEIGHBOURS_8};
use crate::imaging::DiscretizedRoi;

/// Gray-level size-zone matrix: counts of 8-connected same-level zones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Glszm {
    counts: SizeCounts,
    n_pixels: u64,
}

impl Glszm {
    /// Number of zones of `level` containing `size` pixels.
    pub fn get(&self, level: u32, size: u32) -> u64 {
        self.counts.get(&(level, size)).copied().unwrap_or(0)
    }

    pub fn zone_count(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Σ zones × size; always the ROI pixel count.
    pub fn covered_pixels(&self) -> u64 {
        self.counts.iter().map(|(&(_, s), &c)| s as u64 * c).sum()
    }

    pub fn n_pixels(&self) -> u64 {
        self.n_pixels
    }

    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }
}

pub fn compute_glszm(roi: &DiscretizedRoi) -> Glszm {
    let (w, h) = (roi.width(), roi.height());
    let mut seen = vec![false; w * h];
    let mut counts = SizeCounts::new();
    let mut stack = Vec::new();
    for start in 0..w * h {
        if seen[start] || !roi.mask().bits()[start] {
            continue;
        }
        let level = roi.levels()[start];
        seen[start] = true;
        stack.push(start);
        let mut size = 0u32;
        while let Some(idx) = stack.pop() {
            size += 1;
            let (r, c) = ((idx / w) as isize, (idx % w) as isize);
            for (dr, dc) in NEIGHBOURS_8 {
                let (nr, nc) = (r + dr, c + dc);
                if roi.level(nr, nc) == Some(level) {
                    let n = nr as usize * w + nc as usize;
                    if !seen[n] {
                        seen[n] = true;
                        stack.push(n);
                    }
                }
            }
        }
        *counts.entry((level, size)).or_default() += 1;
    }
    Glszm {
        counts,
        n_pixels: roi.pixel_count() as u64,
    }
}

pub const GLSZM_FEATURES: FeatureTable = &[
    ("GrayLevelNonUniformity", "sum_i (sum_j S(i,j))^2 / Nz"),
    (
        "GrayLevelNonUniformityNormalized",
        "sum_i (sum_j S(i,j))^2 / Nz^2",
    ),
    ("GrayLevelVariance", "sum_ij p(i,j) (i - mu_i)^2, p = S/Nz"),
    ("HighGrayLevelZoneEmphasis", "sum_ij S(i,j) i^2 / Nz"),
    ("LargeAreaEmphasis", "sum_ij S(i,j) j^2 / Nz"),
    (
        "LargeAreaHighGrayLevelEmphasis",
        "sum_ij S(i,j) i^2 j^2 / Nz",
    ),
    (
        "LargeAreaLowGrayLevelEmphasis",
        "sum_ij S(i,j) j^2 / i^2 / Nz",
    ),
    ("LowGrayLevelZoneEmphasis", "sum_ij S(i,j) / i^2 / Nz"),
    ("SizeZoneNonUniformity", "sum_j (sum_i S(i,j))^2 / Nz"),
    (
        "SizeZoneNonUniformityNormalized",
        "sum_j (sum_i S(i,j))^2 / Nz^2",
    ),
    ("SmallAreaEmphasis", "sum_ij S(i,j) / j^2 / Nz"),
    (
        "SmallAreaHighGrayLevelEmphasis",
        "sum_ij S(i,j) i^2 / j^2 / Nz",
    ),
    (
        "SmallAreaLowGrayLevelEmphasis",
        "sum_ij S(i,j) / (i^2 j^2) / Nz",
    ),
    ("ZoneEntropy", "-sum_ij p(i,j) log2 p(i,j)"),
    ("ZonePercentage", "Nz / Np"),
    ("ZoneVariance", "sum_ij p(i,j) (j - mu_j)^2"),
];

pub fn glszm_features(glszm: &Glszm) -> NamedValues {
    let s = SizeStats::from_counts(&glszm.counts, f64::from);
    let nz = s.total.max(1.0);
    zip_names(
        GLSZM_FEATURES,
        &[
            s.gray_nonuniformity,
            s.gray_nonuniformity / nz,
            s.gray_variance,
            s.high_gray_emphasis,
            s.large_emphasis,
            s.large_high,
            s.large_low,
            s.low_gray_emphasis,
            s.size_nonuniformity,
            s.size_nonuniformity / nz,
            s.small_emphasis,
            s.small_high,
            s.small_low,
            s.entropy,
            s.percentage(),
            s.size_variance,
        ],
    )
}
