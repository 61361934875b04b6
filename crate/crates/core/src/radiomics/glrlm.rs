use super::sizemat::{SizeCounts, SizeStats};
use super::{zip_names, FeatureTable, NamedValues};
use crate::imaging::DiscretizedRoi;

/// Gray-level run-length matrix summed over directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Glrlm {
    counts: SizeCounts,
    n_levels: u32,
}

impl Glrlm {
    /// Number of maximal runs of `level` with `length`.
    pub fn get(&self, level: u32, length: u32) -> u64 {
        self.counts.get(&(level, length)).copied().unwrap_or(0)
    }

    pub fn total_runs(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn max_run_length(&self) -> u32 {
        self.counts.keys().map(|&(_, l)| l).max().unwrap_or(0)
    }

    pub fn n_levels(&self) -> u32 {
        self.n_levels
    }

    /// Non-zero `((level, length), count)` entries.
    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }
}

/// Collects maximal same-level runs inside the ROI along each direction.
pub fn compute_glrlm(roi: &DiscretizedRoi, directions: &[(isize, isize)]) -> Glrlm {
    let mut counts = SizeCounts::new();
    let (w, h) = (roi.width() as isize, roi.height() as isize);
    for &(dr, dc) in directions {
        for r in 0..h {
            for c in 0..w {
                let Some(level) = roi.level(r, c) else {
                    continue;
                };
                if roi.level(r - dr, c - dc) == Some(level) {
                    continue; // not a run start
                }
                let mut len = 1u32;
                while roi.level(r + dr * len as isize, c + dc * len as isize) == Some(level) {
                    len += 1;
                }
                *counts.entry((level, len)).or_default() += 1;
            }
        }
    }
    Glrlm {
        counts,
        n_levels: roi.n_levels(),
    }
}

pub const GLRLM_FEATURES: FeatureTable = &[
    ("GrayLevelNonUniformity", "sum_i (sum_j R(i,j))^2 / Nr"),
    (
        "GrayLevelNonUniformityNormalized",
        "sum_i (sum_j R(i,j))^2 / Nr^2",
    ),
    ("GrayLevelVariance", "sum_ij p(i,j) (i - mu_i)^2, p = R/Nr"),
    ("HighGrayLevelRunEmphasis", "sum_ij R(i,j) i^2 / Nr"),
    ("LongRunEmphasis", "sum_ij R(i,j) j^2 / Nr"),
    ("LongRunHighGrayLevelEmphasis", "sum_ij R(i,j) i^2 j^2 / Nr"),
    (
        "LongRunLowGrayLevelEmphasis",
        "sum_ij R(i,j) j^2 / i^2 / Nr",
    ),
    ("LowGrayLevelRunEmphasis", "sum_ij R(i,j) / i^2 / Nr"),
    ("RunEntropy", "-sum_ij p(i,j) log2 p(i,j)"),
    ("RunLengthNonUniformity", "sum_j (sum_i R(i,j))^2 / Nr"),
    (
        "RunLengthNonUniformityNormalized",
        "sum_j (sum_i R(i,j))^2 / Nr^2",
    ),
    ("RunPercentage", "Nr / sum_ij j R(i,j)"),
    ("RunVariance", "sum_ij p(i,j) (j - mu_j)^2"),
    ("ShortRunEmphasis", "sum_ij R(i,j) / j^2 / Nr"),
    (
        "ShortRunHighGrayLevelEmphasis",
        "sum_ij R(i,j) i^2 / j^2 / Nr",
    ),
    (
        "ShortRunLowGrayLevelEmphasis",
        "sum_ij R(i,j) / (i^2 j^2) / Nr",
    ),
];

pub fn glrlm_features(glrlm: &Glrlm) -> NamedValues {
    let s = SizeStats::from_counts(&glrlm.counts, f64::from);
    let nr = s.total.max(1.0);
    zip_names(
        GLRLM_FEATURES,
        &[
            s.gray_nonuniformity,
            s.gray_nonuniformity / nr,
            s.gray_variance,
            s.high_gray_emphasis,
            s.large_emphasis,
            s.large_high,
            s.large_low,
            s.low_gray_emphasis,
            s.entropy,
            s.size_nonuniformity,
            s.size_nonuniformity / nr,
            s.percentage(),
            s.size_variance,
            s.small_emphasis,
            s.small_high,
            s.small_low,
        ],
    )
}
