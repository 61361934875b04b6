use serde::{Deserialize, Serialize};

use super::{
    compute_glcm, compute_gldm, compute_glrlm, compute_glszm, compute_ngtdm, first_order_features,
    glcm_features, gldm_features, glrlm_features, glszm_features, ngtdm_features, shape2d_features,
    Category, FeatureDescriptor, NamedValues, Source, DEFAULT_OFFSETS,
};
use crate::error::{Error, Result};
use crate::imaging::{discretize_fixed_levels, GrayImage2D, RoiMask};
use crate::wavelet::{downsample_mask, haar_decompose, Subband};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractionConfig {
    /// Number of gray levels used for discretization.
    pub n_levels: u32,
    /// Level tolerance for GLDM dependence.
    pub gldm_alpha: u32,
    /// Compute non-shape features on the four Haar subbands as well.
    pub wavelet: bool,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            n_levels: 255,
            gldm_alpha: 0,
            wavelet: true,
        }
    }
}

/// Named feature values in dictionary order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub descriptors: Vec<FeatureDescriptor>,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn names(&self) -> Vec<String> {
        self.descriptors
            .iter()
            .map(FeatureDescriptor::name)
            .collect()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.descriptors
            .iter()
            .position(|d| d.name() == name)
            .map(|i| self.values[i])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One row of the published feature dictionary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DictionaryEntry {
    pub name: String,
    pub category: String,
    pub source: String,
    pub base_name: String,
    pub formula: String,
}

/// Every feature [`extract_all`] emits under `config`, in the same order.
pub fn feature_dictionary(config: &ExtractionConfig) -> Vec<DictionaryEntry> {
    let sources: &[Source] = if config.wavelet {
        &Source::ALL
    } else {
        &Source::ALL[..1]
    };
    let mut rows = Vec::new();
    for category in Category::ALL {
        for (base, formula) in category.table() {
            for &source in sources {
                if category == Category::Shape2d && source != Source::Original {
                    continue;
                }
                rows.push((FeatureDescriptor::new(category, *base, source), *formula));
            }
        }
    }
    rows.sort_by(|a, b| a.0.sort_key().cmp(&b.0.sort_key()));
    rows.into_iter()
        .map(|(d, formula)| DictionaryEntry {
            name: d.name(),
            category: d.category.to_string(),
            source: d.source.to_string(),
            base_name: d.base_name,
            formula: formula.to_string(),
        })
        .collect()
}

/// Crops to the mask's bounding box, widened to at least 2×2 when the image
/// allows, so that the Haar decomposition is defined.
fn roi_window(image: &GrayImage2D, mask: &RoiMask) -> Result<(GrayImage2D, RoiMask)> {
    let (mut r0, mut r1, mut c0, mut c1) = mask.bounding_box().ok_or(Error::EmptyMask)?;
    let widen = |lo: &mut usize, hi: &mut usize, extent: usize| {
        if *hi == *lo {
            if *hi + 1 < extent {
                *hi += 1;
            } else if *lo > 0 {
                *lo -= 1;
            }
        }
    };
    widen(&mut r0, &mut r1, image.height());
    widen(&mut c0, &mut c1, image.width());
    let (w, h) = (c1 - c0 + 1, r1 - r0 + 1);
    let mut px = Vec::with_capacity(w * h);
    let mut bits = Vec::with_capacity(w * h);
    for r in r0..=r1 {
        for c in c0..=c1 {
            px.push(image.get(r, c));
            bits.push(mask.get(r, c));
        }
    }
    Ok((
        GrayImage2D::with_spacing(w, h, px, image.pixel_spacing)?,
        RoiMask::new(w, h, bits)?,
    ))
}

fn non_shape_features(
    image: &GrayImage2D,
    mask: &RoiMask,
    source: Source,
    config: &ExtractionConfig,
    out: &mut Vec<(FeatureDescriptor, f64)>,
) -> Result<()> {
    let ctx = |category: &str| format!("{source} {category} features");
    let roi = discretize_fixed_levels(image, mask, config.n_levels)
        .map_err(|e| e.context(format!("{source} discretization")))?;
    let mut push = |category: Category, values: NamedValues| {
        out.extend(
            values
                .into_iter()
                .map(|(name, v)| (FeatureDescriptor::new(category, name, source), v)),
        );
    };
    push(
        Category::Firstorder,
        first_order_features(image, mask, &roi).map_err(|e| e.context(ctx("firstorder")))?,
    );
    push(
        Category::Glcm,
        glcm_features(&compute_glcm(&roi, &DEFAULT_OFFSETS)),
    );
    push(
        Category::Glrlm,
        glrlm_features(&compute_glrlm(&roi, &DEFAULT_OFFSETS)),
    );
    push(Category::Glszm, glszm_features(&compute_glszm(&roi)));
    push(
        Category::Gldm,
        gldm_features(&compute_gldm(&roi, config.gldm_alpha)),
    );
    push(Category::Ngtdm, ngtdm_features(&compute_ngtdm(&roi)));
    Ok(())
}

/// Computes the full radiomic vector for one image/mask pair.
///
/// Shape features use the original mask. All other categories are computed
/// on the original ROI and, when enabled, on each Haar subband of the ROI
/// window with the mask projected by 2×2 majority.
pub fn extract_all(
    image: &GrayImage2D,
    mask: &RoiMask,
    config: &ExtractionConfig,
) -> Result<FeatureVector> {
    mask.check_pair(image)?;
    let (window, wmask) = roi_window(image, mask)?;
    let mut out = Vec::new();
    let shape = shape2d_features(&wmask, image.pixel_spacing)
        .map_err(|e| e.context("original shape2d features"))?;
    out.extend(shape.into_iter().map(|(n, v)| {
        (
            FeatureDescriptor::new(Category::Shape2d, n, Source::Original),
            v,
        )
    }));
    non_shape_features(&window, &wmask, Source::Original, config, &mut out)?;

    if config.wavelet {
        let bands = haar_decompose(&window).map_err(|e| e.context("wavelet decomposition"))?;
        let band_mask = downsample_mask(&wmask)?;
        for band in Subband::ALL {
            non_shape_features(
                bands.get(band),
                &band_mask,
                Source::Wavelet(band),
                config,
                &mut out,
            )?;
        }
    }

    out.sort_by(|a, b| a.0.sort_key().cmp(&b.0.sort_key()));
    let (descriptors, values) = out.into_iter().unzip();
    Ok(FeatureVector {
        descriptors,
        values,
    })
}
