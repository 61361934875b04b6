use crate::error::{Error, Result};

/// Fractional (1-based) ranks; tied values share the mean of their ranks.
pub fn fractional_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && x[order[j]] == x[order[i]] {
            j += 1;
        }
        // Positions i..j (0-based) hold ranks i+1..=j.
        let r = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    ranks
}

/// Pre-centred rank vector reused across many correlations.
///
/// Centred fractional ranks are multiples of 1/2, so for any realistic
/// sample count the dot products and sums of squares below are exact and
/// the only rounding happens in the final square root and division. In
/// particular identical rank vectors correlate to exactly 1.
#[derive(Debug, Clone)]
pub struct RankedColumn {
    centred: Vec<f64>,
    sum_sq: f64,
}

impl RankedColumn {
    pub fn new(x: &[f64]) -> Self {
        let ranks = fractional_ranks(x);
        let mean = (x.len() as f64 + 1.0) / 2.0;
        let centred: Vec<f64> = ranks.iter().map(|r| r - mean).collect();
        let sum_sq = centred.iter().map(|v| v * v).sum::<f64>();
        Self { centred, sum_sq }
    }

    /// True when every value is tied, so correlation is undefined.
    pub fn is_constant(&self) -> bool {
        self.sum_sq == 0.0
    }

    pub fn len(&self) -> usize {
        self.centred.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centred.is_empty()
    }

    /// Pearson correlation of the two rank vectors; `None` if either is
    /// constant.
    pub fn correlation(&self, other: &RankedColumn) -> Option<f64> {
        if self.is_constant() || other.is_constant() {
            return None;
        }
        let dot: f64 = self
            .centred
            .iter()
            .zip(&other.centred)
            .map(|(a, b)| a * b)
            .sum();
        Some((dot / (self.sum_sq * other.sum_sq).sqrt()).clamp(-1.0, 1.0))
    }
}

/// Spearman rank correlation with average ranks for ties.
///
/// Returns `Ok(None)` when either sequence is constant (correlation
/// undefined); callers decide how to treat that.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<Option<f64>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            found: x.len(),
        });
    }
    Ok(RankedColumn::new(x).correlation(&RankedColumn::new(y)))
}
