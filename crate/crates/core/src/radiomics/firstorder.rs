use super::{entropy_term, zip_names, FeatureTable, NamedValues};
use crate::error::{Error, Result};
use crate::imaging::{DiscretizedRoi, GrayImage2D, RoiMask};

pub const FIRST_ORDER_FEATURES: FeatureTable = &[
    ("10Percentile", "10th percentile, linear interpolation"),
    ("90Percentile", "90th percentile, linear interpolation"),
    ("Energy", "sum x^2"),
    (
        "Entropy",
        "-sum_l q(l) log2 q(l) over the discretized histogram",
    ),
    ("InterquartileRange", "P75 - P25"),
    ("Kurtosis", "m4 / m2^2 (non-excess; 3 when m2 = 0)"),
    ("Maximum", "max x"),
    ("Mean", "mean x"),
    ("MeanAbsoluteDeviation", "mean |x - mean|"),
    ("Median", "50th percentile"),
    ("Minimum", "min x"),
    ("Range", "max - min"),
    (
        "RobustMeanAbsoluteDeviation",
        "mean |x - mean_10_90| over x in [P10, P90]",
    ),
    ("RootMeanSquared", "sqrt(sum x^2 / N)"),
    ("Skewness", "m3 / m2^1.5 (0 when m2 = 0)"),
    ("StandardDeviation", "sqrt(m2)"),
    ("TotalEnergy", "spacing^2 * sum x^2"),
    ("Uniformity", "sum_l q(l)^2 over the discretized histogram"),
    ("Variance", "m2 = mean (x - mean)^2"),
];

/// Percentile of sorted data with linear interpolation between order
/// statistics.
pub(crate) fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Intensity statistics over the ROI. `roi` supplies the discretized levels
/// used by Entropy and Uniformity.
pub fn first_order_features(
    image: &GrayImage2D,
    mask: &RoiMask,
    roi: &DiscretizedRoi,
) -> Result<NamedValues> {
    mask.check_pair(image)?;
    let mut x: Vec<f64> = image
        .pixels()
        .iter()
        .zip(mask.bits())
        .filter(|(_, &m)| m)
        .map(|(&v, _)| v)
        .collect();
    if x.is_empty() {
        return Err(Error::EmptyMask);
    }
    let n = x.len() as f64;
    let energy: f64 = x.iter().map(|v| v * v).sum();
    let mean = x.iter().sum::<f64>() / n;
    let moment = |k: i32| x.iter().map(|v| (v - mean).powi(k)).sum::<f64>() / n;
    let (m2, m3, m4) = (moment(2), moment(3), moment(4));
    let (skewness, kurtosis) = if m2 > 0.0 {
        (m3 / m2.powf(1.5), m4 / (m2 * m2))
    } else {
        (0.0, 3.0)
    };
    let mad = x.iter().map(|v| (v - mean).abs()).sum::<f64>() / n;

    x.sort_by(f64::total_cmp);
    let (min, max) = (x[0], x[x.len() - 1]);
    let (p10, p25, p50, p75, p90) = (
        percentile(&x, 0.10),
        percentile(&x, 0.25),
        percentile(&x, 0.50),
        percentile(&x, 0.75),
        percentile(&x, 0.90),
    );
    let robust: Vec<f64> = x
        .iter()
        .copied()
        .filter(|&v| v >= p10 && v <= p90)
        .collect();
    let robust_mean = robust.iter().sum::<f64>() / robust.len() as f64;
    let rmad = robust.iter().map(|v| (v - robust_mean).abs()).sum::<f64>() / robust.len() as f64;

    let mut hist = vec![0u64; roi.n_levels() as usize];
    for (&l, &m) in roi.levels().iter().zip(roi.mask().bits()) {
        if m {
            hist[l as usize - 1] += 1;
        }
    }
    let hn: u64 = hist.iter().sum();
    let q = hist.iter().map(|&c| c as f64 / hn as f64);
    let entropy: f64 = q.clone().map(entropy_term).sum();
    let uniformity: f64 = q.map(|v| v * v).sum();

    Ok(zip_names(
        FIRST_ORDER_FEATURES,
        &[
            p10,
            p90,
            energy,
            entropy,
            p75 - p25,
            kurtosis,
            max,
            mean,
            mad,
            p50,
            min,
            max - min,
            rmad,
            (energy / n).sqrt(),
            skewness,
            m2.sqrt(),
            image.pixel_spacing * image.pixel_spacing * energy,
            uniformity,
            m2,
        ],
    ))
}
