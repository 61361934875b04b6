//! Saliency maps rebuilt from exported activations, gradients and channel
//! weights, plus a comparison between maps.

mod io;

pub use io::{
    read_atns, read_atns_path, read_cic_weights, read_cic_weights_path, write_atns,
    write_atns_path, write_saliency, ATNS_MAGIC, ATNS_VERSION,
};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::bilinear_resample;

/// `K` maps of size `H × W`, stored row-major with the map index outermost.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorStack {
    k: usize,
    h: usize,
    w: usize,
    data: Vec<f64>,
}

pub type ActivationStack = TensorStack;
pub type GradientStack = TensorStack;

impl TensorStack {
    pub fn new(k: usize, h: usize, w: usize, data: Vec<f64>) -> Result<Self> {
        if k == 0 || h == 0 || w == 0 {
            return Err(Error::ShapeMismatch(format!(
                "stack dimensions must be positive, got {k}x{h}x{w}"
            )));
        }
        if data.len() != k * h * w {
            return Err(Error::LengthMismatch {
                expected: k * h * w,
                found: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "stack contains non-finite values".into(),
            ));
        }
        Ok(Self { k, h, w, data })
    }

    pub fn from_maps(maps: &[Vec<Vec<f64>>]) -> Result<Self> {
        let k = maps.len();
        let h = maps.first().map_or(0, Vec::len);
        let w = maps.first().and_then(|m| m.first()).map_or(0, Vec::len);
        if maps
            .iter()
            .any(|m| m.len() != h || m.iter().any(|r| r.len() != w))
        {
            return Err(Error::ShapeMismatch("maps have differing sizes".into()));
        }
        Self::new(k, h, w, maps.iter().flatten().flatten().copied().collect())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn height(&self) -> usize {
        self.h
    }

    pub fn width(&self) -> usize {
        self.w
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn map(&self, k: usize) -> &[f64] {
        let n = self.h * self.w;
        &self.data[k * n..(k + 1) * n]
    }

    fn check_same_shape(&self, other: &TensorStack) -> Result<()> {
        if (self.k, self.h, self.w) != (other.k, other.h, other.w) {
            return Err(Error::ShapeMismatch(format!(
                "{}x{}x{} vs {}x{}x{}",
                self.k, self.h, self.w, other.k, other.h, other.w
            )));
        }
        Ok(())
    }

    fn weighted_sum(&self, weights: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.h * self.w];
        for (k, &wk) in weights.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.map(k)) {
                *o += wk * a;
            }
        }
        out
    }
}

/// Map with values in `[0, 1]` whose maximum is 1 unless it is all zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyMap {
    h: usize,
    w: usize,
    data: Vec<f64>,
}

impl SaliencyMap {
    /// Clamps negatives to 0 and divides by the maximum.
    pub fn from_raw(h: usize, w: usize, mut raw: Vec<f64>) -> Result<Self> {
        if raw.len() != h * w || h == 0 || w == 0 {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a {h}x{w} map",
                raw.len()
            )));
        }
        for v in raw.iter_mut() {
            *v = v.max(0.0);
        }
        let max = raw.iter().copied().fold(0.0, f64::max);
        if max > 0.0 {
            for v in raw.iter_mut() {
                *v /= max;
            }
        }
        Ok(Self { h, w, data: raw })
    }

    pub fn height(&self) -> usize {
        self.h
    }

    pub fn width(&self) -> usize {
        self.w
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.w + c]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    /// 8-bit quantization, `round(255 v)`.
    pub fn to_gray8(&self) -> Vec<u8> {
        self.data
            .iter()
            .map(|v| (v * 255.0).round() as u8)
            .collect()
    }
}

/// Grad-CAM: channel weights are the spatial mean of each gradient map.
pub fn grad_cam(a: &ActivationStack, g: &GradientStack) -> Result<SaliencyMap> {
    a.check_same_shape(g)?;
    let n = (a.h * a.w) as f64;
    let alpha: Vec<f64> = (0..a.k).map(|k| g.map(k).iter().sum::<f64>() / n).collect();
    SaliencyMap::from_raw(a.h, a.w, a.weighted_sum(&alpha))
}

/// Score-CAM with externally computed channel scores. With `softmax` the
/// scores are passed through a softmax first.
pub fn score_cam(a: &ActivationStack, weights: &[f64], softmax: bool) -> Result<SaliencyMap> {
    if weights.len() != a.k {
        return Err(Error::LengthMismatch {
            expected: a.k,
            found: weights.len(),
        });
    }
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidInput("channel weights must be finite".into()));
    }
    let weights = if softmax {
        let max = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exp: Vec<f64> = weights.iter().map(|w| (w - max).exp()).collect();
        let total: f64 = exp.iter().sum();
        exp.iter().map(|e| e / total).collect()
    } else {
        weights.to_vec()
    };
    SaliencyMap::from_raw(a.h, a.w, a.weighted_sum(&weights))
}

/// Eigen-CAM: projection of the activations onto their first principal
/// direction (no centering), sign-fixed so the map sums to a nonnegative
/// value.
pub fn eigen_cam(a: &ActivationStack) -> SaliencyMap {
    let (k, n) = (a.k, a.h * a.w);
    // O is n × K with O[p, k] = A_k[p].
    let o = DMatrix::from_fn(n, k, |p, c| a.map(c)[p]);
    let projection: Vec<f64> = if k <= n {
        let gram = o.transpose() * &o;
        let eig = SymmetricEigen::new(gram);
        let top = argmax(eig.eigenvalues.as_slice());
        let v = eig.eigenvectors.column(top);
        (&o * v).iter().copied().collect()
    } else {
        let gram = &o * o.transpose();
        let eig = SymmetricEigen::new(gram);
        let top = argmax(eig.eigenvalues.as_slice());
        let sigma = eig.eigenvalues[top].max(0.0).sqrt();
        eig.eigenvectors
            .column(top)
            .iter()
            .map(|u| u * sigma)
            .collect()
    };
    let sign = if projection.iter().sum::<f64>() < 0.0 {
        -1.0
    } else {
        1.0
    };
    SaliencyMap::from_raw(a.h, a.w, projection.into_iter().map(|v| sign * v).collect())
        .expect("shape taken from the stack")
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Corner-aligned bilinear resize, renormalized to a maximum of 1.
pub fn upsample_bilinear(map: &SaliencyMap, h: usize, w: usize) -> Result<SaliencyMap> {
    if h == 0 || w == 0 {
        return Err(Error::InvalidInput(
            "target size must be at least 1x1".into(),
        ));
    }
    SaliencyMap::from_raw(h, w, bilinear_resample(&map.data, map.w, map.h, w, h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    /// Pearson correlation of the flattened maps; `None` if either is constant.
    pub pearson: Option<f64>,
    pub top_q_jaccard: f64,
}

/// Indices of the `count` largest values, ties broken by lower index.
pub fn top_indices(values: &[f64], count: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    order.truncate(count);
    order.sort_unstable();
    order
}

pub fn map_discrepancy(a: &SaliencyMap, b: &SaliencyMap, q: f64) -> Result<Discrepancy> {
    if (a.h, a.w) != (b.h, b.w) {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} vs {}x{}",
            a.h, a.w, b.h, b.w
        )));
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "top fraction q must be in (0, 1], got {q}"
        )));
    }
    let n = a.data.len();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
    let (ma, mb) = (mean(&a.data), mean(&b.data));
    let (mut dot, mut sa, mut sb) = (0.0, 0.0, 0.0);
    for (x, y) in a.data.iter().zip(&b.data) {
        let (dx, dy) = (x - ma, y - mb);
        dot += dx * dy;
        sa += dx * dx;
        sb += dy * dy;
    }
    let pearson = (sa > 0.0 && sb > 0.0).then(|| (dot / (sa * sb).sqrt()).clamp(-1.0, 1.0));

    let count = ((q * n as f64).ceil() as usize).clamp(1, n);
    let ta = top_indices(&a.data, count);
    let tb = top_indices(&b.data, count);
    let inter = ta.iter().filter(|i| tb.binary_search(i).is_ok()).count();
    let union = 2 * count - inter;
    Ok(Discrepancy {
        pearson,
        top_q_jaccard: inter as f64 / union as f64,
    })
}
