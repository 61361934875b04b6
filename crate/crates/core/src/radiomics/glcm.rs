use super::{entropy_term, zip_names, FeatureTable, NamedValues};
use crate::imaging::DiscretizedRoi;

/// Row/column displacements for the four in-plane directions at distance 1.
pub const DEFAULT_OFFSETS: [(isize, isize); 4] = [(0, 1), (1, 0), (1, 1), (1, -1)];

/// Symmetric gray-level co-occurrence matrix, normalized to unit mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Glcm {
    n_levels: usize,
    /// Row-major `n_levels × n_levels`; index `(i-1, j-1)` for levels `i, j`.
    p: Vec<f64>,
    /// Number of ordered pairs counted (twice the number of pixel pairs).
    pairs: u64,
    offsets: Vec<(isize, isize)>,
}

impl Glcm {
    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    /// Probability of the ordered level pair `(i, j)`, both 1-based.
    pub fn p(&self, i: u32, j: u32) -> f64 {
        self.p[(i as usize - 1) * self.n_levels + j as usize - 1]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn pair_count(&self) -> u64 {
        self.pairs
    }

    pub fn offsets(&self) -> &[(isize, isize)] {
        &self.offsets
    }

    /// Always true: pairs are counted in both directions.
    pub fn is_symmetric(&self) -> bool {
        true
    }

    /// Builds a matrix directly from probabilities (row-major, square).
    pub fn from_probabilities(n_levels: usize, p: Vec<f64>) -> Self {
        assert_eq!(p.len(), n_levels * n_levels);
        Self {
            n_levels,
            p,
            pairs: 0,
            offsets: Vec::new(),
        }
    }
}

/// Counts level pairs at each offset where both pixels are in the ROI,
/// symmetrizes, sums over offsets, and normalizes.
///
/// A ROI with no neighbouring pixel pairs yields an all-zero matrix.
pub fn compute_glcm(roi: &DiscretizedRoi, offsets: &[(isize, isize)]) -> Glcm {
    let ng = roi.n_levels() as usize;
    let mut counts = vec![0u64; ng * ng];
    let mut pairs = 0u64;
    let (w, h) = (roi.width() as isize, roi.height() as isize);
    for r in 0..h {
        for c in 0..w {
            let Some(a) = roi.level(r, c) else { continue };
            for &(dr, dc) in offsets {
                if let Some(b) = roi.level(r + dr, c + dc) {
                    let (a, b) = (a as usize - 1, b as usize - 1);
                    counts[a * ng + b] += 1;
                    counts[b * ng + a] += 1;
                    pairs += 2;
                }
            }
        }
    }
    let p = if pairs == 0 {
        vec![0.0; ng * ng]
    } else {
        counts.iter().map(|&n| n as f64 / pairs as f64).collect()
    };
    Glcm {
        n_levels: ng,
        p,
        pairs,
        offsets: offsets.to_vec(),
    }
}

pub const GLCM_FEATURES: FeatureTable = &[
    ("Autocorrelation", "sum_ij i*j*p(i,j)"),
    ("ClusterProminence", "sum_ij (i+j-2*mu)^4 * p(i,j)"),
    ("ClusterShade", "sum_ij (i+j-2*mu)^3 * p(i,j)"),
    ("ClusterTendency", "sum_ij (i+j-2*mu)^2 * p(i,j)"),
    ("Contrast", "sum_ij (i-j)^2 * p(i,j)"),
    (
        "Correlation",
        "(sum_ij i*j*p(i,j) - mu^2) / sigma^2; 1 when sigma = 0",
    ),
    ("DifferenceAverage", "sum_k k * p_{x-y}(k)"),
    ("DifferenceEntropy", "-sum_k p_{x-y}(k) log2 p_{x-y}(k)"),
    (
        "DifferenceVariance",
        "sum_k (k - DifferenceAverage)^2 * p_{x-y}(k)",
    ),
    ("Id", "sum_ij p(i,j) / (1 + |i-j|)"),
    ("Idm", "sum_ij p(i,j) / (1 + (i-j)^2)"),
    ("Idmn", "sum_ij p(i,j) / (1 + (i-j)^2 / Ng^2)"),
    ("Idn", "sum_ij p(i,j) / (1 + |i-j| / Ng)"),
    ("Imc1", "(HXY - HXY1) / HX; 0 when HX = 0"),
    ("Imc2", "sqrt(1 - exp(-2 (HXY2 - HXY))); 0 when HXY2 <= HXY"),
    ("InverseVariance", "sum_{i != j} p(i,j) / (i-j)^2"),
    ("JointAverage", "mu = sum_ij i * p(i,j)"),
    ("JointEnergy", "sum_ij p(i,j)^2"),
    ("JointEntropy", "-sum_ij p(i,j) log2 p(i,j)"),
    ("MaximumProbability", "max_ij p(i,j)"),
    ("SumAverage", "sum_k k * p_{x+y}(k)"),
    ("SumEntropy", "-sum_k p_{x+y}(k) log2 p_{x+y}(k)"),
    ("SumSquares", "sum_ij (i-mu)^2 * p(i,j)"),
];

/// Features of a normalized symmetric GLCM (see [`GLCM_FEATURES`]). An
/// empty matrix yields zeros except Correlation, which is 1.
pub fn glcm_features(glcm: &Glcm) -> NamedValues {
    let ng = glcm.n_levels;
    // Sparse view of the non-zero cells, levels 1-based.
    let cells: Vec<(f64, f64, f64)> = glcm
        .p
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(idx, &p)| ((idx / ng + 1) as f64, (idx % ng + 1) as f64, p))
        .collect();

    let mut marginal = vec![0.0; ng];
    let mut sum_dist = vec![0.0; 2 * ng + 1];
    let mut diff_dist = vec![0.0; ng];
    for &(i, j, p) in &cells {
        marginal[i as usize - 1] += p;
        sum_dist[(i + j) as usize] += p;
        diff_dist[(i - j).abs() as usize] += p;
    }

    let mu: f64 = cells.iter().map(|&(i, _, p)| i * p).sum();
    let autocorrelation: f64 = cells.iter().map(|&(i, j, p)| i * j * p).sum();
    let cluster = |power: i32| -> f64 {
        cells
            .iter()
            .map(|&(i, j, p)| (i + j - 2.0 * mu).powi(power) * p)
            .sum()
    };
    let contrast: f64 = cells.iter().map(|&(i, j, p)| (i - j).powi(2) * p).sum();
    let sum_squares: f64 = cells.iter().map(|&(i, _, p)| (i - mu).powi(2) * p).sum();
    let correlation = if sum_squares > 0.0 {
        (autocorrelation - mu * mu) / sum_squares
    } else {
        1.0
    };

    let diff_avg: f64 = diff_dist
        .iter()
        .enumerate()
        .map(|(k, &p)| k as f64 * p)
        .sum();
    let diff_entropy: f64 = diff_dist.iter().map(|&p| entropy_term(p)).sum();
    let diff_var: f64 = diff_dist
        .iter()
        .enumerate()
        .map(|(k, &p)| (k as f64 - diff_avg).powi(2) * p)
        .sum();

    let ngf = ng as f64;
    let id: f64 = cells
        .iter()
        .map(|&(i, j, p)| p / (1.0 + (i - j).abs()))
        .sum();
    let idm: f64 = cells
        .iter()
        .map(|&(i, j, p)| p / (1.0 + (i - j).powi(2)))
        .sum();
    let idmn: f64 = cells
        .iter()
        .map(|&(i, j, p)| p / (1.0 + (i - j).powi(2) / (ngf * ngf)))
        .sum();
    let idn: f64 = cells
        .iter()
        .map(|&(i, j, p)| p / (1.0 + (i - j).abs() / ngf))
        .sum();
    let inverse_variance: f64 = cells
        .iter()
        .filter(|&&(i, j, _)| i != j)
        .map(|&(i, j, p)| p / (i - j).powi(2))
        .sum();

    let joint_energy: f64 = cells.iter().map(|&(_, _, p)| p * p).sum();
    let hxy: f64 = cells.iter().map(|&(_, _, p)| entropy_term(p)).sum();
    let max_p = cells.iter().map(|&(_, _, p)| p).fold(0.0, f64::max);
    let sum_avg: f64 = sum_dist
        .iter()
        .enumerate()
        .map(|(k, &p)| k as f64 * p)
        .sum();
    let sum_entropy: f64 = sum_dist.iter().map(|&p| entropy_term(p)).sum();

    // Informational measures; the matrix is symmetric so px = py.
    let hx: f64 = marginal.iter().map(|&p| entropy_term(p)).sum();
    let hxy1: f64 = cells
        .iter()
        .map(|&(i, j, p)| -p * (marginal[i as usize - 1] * marginal[j as usize - 1]).log2())
        .sum();
    let mut hxy2 = 0.0;
    for &pi in marginal.iter().filter(|&&p| p > 0.0) {
        for &pj in marginal.iter().filter(|&&p| p > 0.0) {
            hxy2 += entropy_term(pi * pj);
        }
    }
    let imc1 = if hx > 0.0 { (hxy - hxy1) / hx } else { 0.0 };
    let imc2 = if hxy2 > hxy {
        (1.0 - (-2.0 * (hxy2 - hxy)).exp()).sqrt()
    } else {
        0.0
    };

    zip_names(
        GLCM_FEATURES,
        &[
            autocorrelation,
            cluster(4),
            cluster(3),
            cluster(2),
            contrast,
            correlation,
            diff_avg,
            diff_entropy,
            diff_var,
            id,
            idm,
            idmn,
            idn,
            imc1,
            imc2,
            inverse_variance,
            mu,
            joint_energy,
            hxy,
            max_p,
            sum_avg,
            sum_entropy,
            sum_squares,
        ],
    )
}
