//! Statistics shared by the run-length, size-zone, and dependence matrices,
//! which all count occurrences indexed by (gray level, size).

use std::collections::BTreeMap;

use super::entropy_term;

/// Sparse `(level, size) -> count` matrix.
pub(crate) type SizeCounts = BTreeMap<(u32, u32), u64>;

/// Sums needed by every size-matrix feature. `size` here is the value used
/// in emphasis formulas (run length, zone size, or dependence count + 1).
#[derive(Debug, Clone, Copy)]
pub(crate) struct SizeStats {
    /// Total count (runs, zones, or pixels).
    pub total: f64,
    /// Σ size·count.
    pub weighted: f64,
    pub small_emphasis: f64,
    pub large_emphasis: f64,
    pub gray_nonuniformity: f64,
    pub size_nonuniformity: f64,
    pub gray_variance: f64,
    pub size_variance: f64,
    pub entropy: f64,
    pub low_gray_emphasis: f64,
    pub high_gray_emphasis: f64,
    pub small_low: f64,
    pub small_high: f64,
    pub large_low: f64,
    pub large_high: f64,
}

impl SizeStats {
    /// `size_of(stored_size)` maps the stored column index to the emphasis
    /// size.
    pub fn from_counts(counts: &SizeCounts, size_of: impl Fn(u32) -> f64) -> Self {
        let total: f64 = counts.values().map(|&c| c as f64).sum();
        let mut per_gray: BTreeMap<u32, f64> = BTreeMap::new();
        let mut per_size: BTreeMap<u32, f64> = BTreeMap::new();
        let mut s = SizeStats {
            total,
            weighted: 0.0,
            small_emphasis: 0.0,
            large_emphasis: 0.0,
            gray_nonuniformity: 0.0,
            size_nonuniformity: 0.0,
            gray_variance: 0.0,
            size_variance: 0.0,
            entropy: 0.0,
            low_gray_emphasis: 0.0,
            high_gray_emphasis: 0.0,
            small_low: 0.0,
            small_high: 0.0,
            large_low: 0.0,
            large_high: 0.0,
        };
        if total == 0.0 {
            return s;
        }
        let (mut mu_g, mut mu_s) = (0.0, 0.0);
        for (&(g, stored), &c) in counts {
            let (c, gf, sz) = (c as f64, g as f64, size_of(stored));
            *per_gray.entry(g).or_default() += c;
            *per_size.entry(stored).or_default() += c;
            let (g2, s2) = (gf * gf, sz * sz);
            s.weighted += sz * c;
            s.small_emphasis += c / s2;
            s.large_emphasis += c * s2;
            s.low_gray_emphasis += c / g2;
            s.high_gray_emphasis += c * g2;
            s.small_low += c / (g2 * s2);
            s.small_high += c * g2 / s2;
            s.large_low += c * s2 / g2;
            s.large_high += c * g2 * s2;
            let p = c / total;
            s.entropy += entropy_term(p);
            mu_g += p * gf;
            mu_s += p * sz;
        }
        for (&(g, stored), &c) in counts {
            let p = c as f64 / total;
            s.gray_variance += p * (g as f64 - mu_g).powi(2);
            s.size_variance += p * (size_of(stored) - mu_s).powi(2);
        }
        s.gray_nonuniformity = per_gray.values().map(|v| v * v).sum::<f64>() / total;
        s.size_nonuniformity = per_size.values().map(|v| v * v).sum::<f64>() / total;
        for v in [
            &mut s.small_emphasis,
            &mut s.large_emphasis,
            &mut s.low_gray_emphasis,
            &mut s.high_gray_emphasis,
            &mut s.small_low,
            &mut s.small_high,
            &mut s.large_low,
            &mut s.large_high,
        ] {
            *v /= total;
        }
        s
    }

    /// Total count over Σ size·count.
    pub fn percentage(&self) -> f64 {
        if self.weighted > 0.0 {
            self.total / self.weighted
        } else {
            0.0
        }
    }
}
