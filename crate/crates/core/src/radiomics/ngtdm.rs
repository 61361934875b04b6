use super::{zip_names, FeatureTable, NamedValues, NEIGHBOURS_8};
use crate::imaging::DiscretizedRoi;

/// Coarseness reported when the summed gray-tone difference is zero.
pub const COARSENESS_CAP: f64 = 1e6;

/// Neighbouring gray-tone difference matrix.
///
/// Only pixels with at least one in-ROI 8-neighbour contribute; the
/// neighbourhood average excludes the centre pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct Ngtdm {
    /// Per level (index `level - 1`): Σ |level − neighbourhood mean|.
    pub s: Vec<f64>,
    /// Per level: number of contributing pixels.
    pub n: Vec<u64>,
    /// Per level: `n / Σ n` (all zero when nothing contributes).
    pub p: Vec<f64>,
}

impl Ngtdm {
    /// Number of contributing pixels.
    pub fn valid_pixels(&self) -> u64 {
        self.n.iter().sum()
    }
}

pub fn compute_ngtdm(roi: &DiscretizedRoi) -> Ngtdm {
    let ng = roi.n_levels() as usize;
    let mut s = vec![0.0; ng];
    let mut n = vec![0u64; ng];
    let (w, h) = (roi.width() as isize, roi.height() as isize);
    for r in 0..h {
        for c in 0..w {
            let Some(level) = roi.level(r, c) else {
                continue;
            };
            let (sum, count) = NEIGHBOURS_8
                .iter()
                .filter_map(|&(dr, dc)| roi.level(r + dr, c + dc))
                .fold((0u64, 0u32), |(s, k), l| (s + l as u64, k + 1));
            if count == 0 {
                continue;
            }
            let mean = sum as f64 / count as f64;
            s[level as usize - 1] += (level as f64 - mean).abs();
            n[level as usize - 1] += 1;
        }
    }
    let total: u64 = n.iter().sum();
    let p = n
        .iter()
        .map(|&k| {
            if total > 0 {
                k as f64 / total as f64
            } else {
                0.0
            }
        })
        .collect();
    Ngtdm { s, n, p }
}

pub const NGTDM_FEATURES: FeatureTable = &[
    (
        "Busyness",
        "sum_i p_i s_i / sum_ij |i p_i - j p_j| (p_i, p_j > 0); 0 when denominator is 0",
    ),
    ("Coarseness", "1 / sum_i p_i s_i; capped at 1e6"),
    (
        "Complexity",
        "sum_ij |i - j| (p_i s_i + p_j s_j) / (p_i + p_j) / Nvp (p_i, p_j > 0)",
    ),
    (
        "Contrast",
        "[sum_ij p_i p_j (i-j)^2 / (Ngp (Ngp - 1))] * sum_i s_i / Nvp; 0 when Ngp = 1",
    ),
    (
        "Strength",
        "sum_ij (p_i + p_j)(i-j)^2 / sum_i s_i (p_i, p_j > 0); 0 when sum s = 0",
    ),
];

pub fn ngtdm_features(m: &Ngtdm) -> NamedValues {
    let nvp = m.valid_pixels() as f64;
    // (level, p, s) for the levels that occur.
    let present: Vec<(f64, f64, f64)> =
        m.p.iter()
            .zip(&m.s)
            .enumerate()
            .filter(|(_, (&p, _))| p > 0.0)
            .map(|(i, (&p, &s))| ((i + 1) as f64, p, s))
            .collect();
    let ngp = present.len() as f64;
    let ps_sum: f64 = present.iter().map(|&(_, p, s)| p * s).sum();
    let s_sum: f64 = present.iter().map(|&(_, _, s)| s).sum();

    let coarseness = if ps_sum > 0.0 {
        (1.0 / ps_sum).min(COARSENESS_CAP)
    } else {
        COARSENESS_CAP
    };

    let (mut pair_contrast, mut busy_den, mut complexity, mut strength_num) = (0.0, 0.0, 0.0, 0.0);
    for &(i, pi, si) in &present {
        for &(j, pj, sj) in &present {
            pair_contrast += pi * pj * (i - j).powi(2);
            busy_den += (i * pi - j * pj).abs();
            complexity += (i - j).abs() * (pi * si + pj * sj) / (pi + pj);
            strength_num += (pi + pj) * (i - j).powi(2);
        }
    }
    let contrast = if ngp > 1.0 {
        pair_contrast / (ngp * (ngp - 1.0)) * s_sum / nvp
    } else {
        0.0
    };
    let busyness = if busy_den > 0.0 {
        ps_sum / busy_den
    } else {
        0.0
    };
    let complexity = if nvp > 0.0 { complexity / nvp } else { 0.0 };
    let strength = if s_sum > 0.0 {
        strength_num / s_sum
    } else {
        0.0
    };

    zip_names(
        NGTDM_FEATURES,
        &[busyness, coarseness, complexity, contrast, strength],
    )
}
