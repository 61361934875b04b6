use super::sizemat::{SizeCounts, SizeStats};
use super::{zip_names, FeatureTable, NamedValues, NEIGHBOURS_8};
use crate::imaging::DiscretizedRoi;

/// Gray-level dependence matrix. Entry `(g, k)` counts ROI pixels of level
/// `g` with exactly `k` in-ROI 8-neighbours whose level differs by at most
/// `alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gldm {
    counts: SizeCounts,
    alpha: u32,
}

impl Gldm {
    pub fn get(&self, level: u32, dependents: u32) -> u64 {
        self.counts.get(&(level, dependents)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }
}

pub fn compute_gldm(roi: &DiscretizedRoi, alpha: u32) -> Gldm {
    let mut counts = SizeCounts::new();
    let (w, h) = (roi.width() as isize, roi.height() as isize);
    for r in 0..h {
        for c in 0..w {
            let Some(level) = roi.level(r, c) else {
                continue;
            };
            let dependents = NEIGHBOURS_8
                .iter()
                .filter_map(|&(dr, dc)| roi.level(r + dr, c + dc))
                .filter(|&n| n.abs_diff(level) <= alpha)
                .count() as u32;
            *counts.entry((level, dependents)).or_default() += 1;
        }
    }
    Gldm { counts, alpha }
}

pub const GLDM_FEATURES: FeatureTable = &[
    ("DependenceEntropy", "-sum_ij p(i,j) log2 p(i,j), p = D/Np"),
    ("DependenceNonUniformity", "sum_j (sum_i D(i,j))^2 / Np"),
    (
        "DependenceNonUniformityNormalized",
        "sum_j (sum_i D(i,j))^2 / Np^2",
    ),
    ("DependenceVariance", "sum_ij p(i,j) (j - mu_j)^2"),
    ("GrayLevelNonUniformity", "sum_i (sum_j D(i,j))^2 / Np"),
    ("GrayLevelVariance", "sum_ij p(i,j) (i - mu_i)^2"),
    ("HighGrayLevelEmphasis", "sum_ij D(i,j) i^2 / Np"),
    (
        "LargeDependenceEmphasis",
        "sum_ij D(i,j) j^2 / Np, j = dependents + 1",
    ),
    (
        "LargeDependenceHighGrayLevelEmphasis",
        "sum_ij D(i,j) i^2 j^2 / Np",
    ),
    (
        "LargeDependenceLowGrayLevelEmphasis",
        "sum_ij D(i,j) j^2 / i^2 / Np",
    ),
    ("LowGrayLevelEmphasis", "sum_ij D(i,j) / i^2 / Np"),
    (
        "SmallDependenceEmphasis",
        "sum_ij D(i,j) / j^2 / Np, j = dependents + 1",
    ),
    (
        "SmallDependenceHighGrayLevelEmphasis",
        "sum_ij D(i,j) i^2 / j^2 / Np",
    ),
    (
        "SmallDependenceLowGrayLevelEmphasis",
        "sum_ij D(i,j) / (i^2 j^2) / Np",
    ),
];

/// Emphasis features count the pixel itself, so a pixel with `k`
/// dependents has dependence size `k + 1`.
pub fn gldm_features(gldm: &Gldm) -> NamedValues {
    let s = SizeStats::from_counts(&gldm.counts, |k| f64::from(k) + 1.0);
    let np = s.total.max(1.0);
    zip_names(
        GLDM_FEATURES,
        &[
            s.entropy,
            s.size_nonuniformity,
            s.size_nonuniformity / np,
            s.size_variance,
            s.gray_nonuniformity,
            s.gray_variance,
            s.high_gray_emphasis,
            s.large_emphasis,
            s.large_high,
            s.large_low,
            s.low_gray_emphasis,
            s.small_emphasis,
            s.small_high,
            s.small_low,
        ],
    )
}
