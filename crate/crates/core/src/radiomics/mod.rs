//! Radiomic features: shape, first-order statistics, and five texture
//! matrix families, computed on the original image and on each Haar subband.
//!
//! Texture matrices aggregate all directions into a single matrix before
//! features are derived. Every feature name has the form
//! `<source>_<category>_<BaseName>`, e.g. `waveletLH_glszm_ZoneEntropy`.

mod extract;
mod firstorder;
mod glcm;
mod gldm;
mod glrlm;
mod glszm;
mod ngtdm;
mod shape;
mod sizemat;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::wavelet::Subband;

pub use extract::{
    extract_all, feature_dictionary, DictionaryEntry, ExtractionConfig, FeatureVector,
};
pub use firstorder::{first_order_features, FIRST_ORDER_FEATURES};
pub use glcm::{compute_glcm, glcm_features, Glcm, DEFAULT_OFFSETS, GLCM_FEATURES};
pub use gldm::{compute_gldm, gldm_features, Gldm, GLDM_FEATURES};
pub use glrlm::{compute_glrlm, glrlm_features, Glrlm, GLRLM_FEATURES};
pub use glszm::{compute_glszm, glszm_features, Glszm, GLSZM_FEATURES};
pub use ngtdm::{compute_ngtdm, ngtdm_features, Ngtdm, COARSENESS_CAP, NGTDM_FEATURES};
pub use shape::{shape2d_features, SHAPE_FEATURES};

/// `(base name, value)` pairs in the category's fixed order.
pub type NamedValues = Vec<(&'static str, f64)>;

/// `(base name, formula)` rows documenting a category.
pub type FeatureTable = &'static [(&'static str, &'static str)];

/// 8-neighbourhood offsets `(drow, dcol)`.
pub(crate) const NEIGHBOURS_8: [(isize, isize); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

pub(crate) fn zip_names(table: FeatureTable, values: &[f64]) -> NamedValues {
    debug_assert_eq!(table.len(), values.len());
    table
        .iter()
        .map(|(n, _)| *n)
        .zip(values.iter().copied())
        .collect()
}

/// `-p·log2(p)` with the `0·log 0 = 0` convention.
#[inline]
pub(crate) fn entropy_term(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Shape2d,
    Firstorder,
    Glcm,
    Glrlm,
    Glszm,
    Gldm,
    Ngtdm,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::Shape2d,
        Category::Firstorder,
        Category::Glcm,
        Category::Glrlm,
        Category::Glszm,
        Category::Gldm,
        Category::Ngtdm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Shape2d => "shape2d",
            Category::Firstorder => "firstorder",
            Category::Glcm => "glcm",
            Category::Glrlm => "glrlm",
            Category::Glszm => "glszm",
            Category::Gldm => "gldm",
            Category::Ngtdm => "ngtdm",
        }
    }

    pub fn table(self) -> FeatureTable {
        match self {
            Category::Shape2d => SHAPE_FEATURES,
            Category::Firstorder => FIRST_ORDER_FEATURES,
            Category::Glcm => GLCM_FEATURES,
            Category::Glrlm => GLRLM_FEATURES,
            Category::Glszm => GLSZM_FEATURES,
            Category::Gldm => GLDM_FEATURES,
            Category::Ngtdm => NGTDM_FEATURES,
        }
    }

    pub fn is_texture(self) -> bool {
        !matches!(self, Category::Shape2d | Category::Firstorder)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnresolvableName(s.to_string()))
    }
}

/// Image the feature was computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Original,
    Wavelet(Subband),
}

impl Source {
    pub const ALL: [Source; 5] = [
        Source::Original,
        Source::Wavelet(Subband::LL),
        Source::Wavelet(Subband::LH),
        Source::Wavelet(Subband::HL),
        Source::Wavelet(Subband::HH),
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Source::Original => "original",
            Source::Wavelet(Subband::LL) => "waveletLL",
            Source::Wavelet(Subband::LH) => "waveletLH",
            Source::Wavelet(Subband::HL) => "waveletHL",
            Source::Wavelet(Subband::HH) => "waveletHH",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Source::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnresolvableName(s.to_string()))
    }
}

/// Identity of one radiomic feature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureDescriptor {
    pub category: Category,
    pub base_name: String,
    pub source: Source,
}

impl FeatureDescriptor {
    pub fn new(category: Category, base_name: impl Into<String>, source: Source) -> Self {
        Self {
            category,
            base_name: base_name.into(),
            source,
        }
    }

    /// Column name, `<source>_<category>_<BaseName>`.
    pub fn name(&self) -> String {
        format!("{}_{}_{}", self.source, self.category, self.base_name)
    }

    /// Parses a column name back into its descriptor. The base name must be
    /// one the category actually defines.
    pub fn parse(name: &str) -> Result<Self, Error> {
        let unresolvable = || Error::UnresolvableName(name.to_string());
        let mut parts = name.splitn(3, '_');
        let (Some(source), Some(category), Some(base)) = (parts.next(), parts.next(), parts.next())
        else {
            return Err(unresolvable());
        };
        let source: Source = source.parse().map_err(|_| unresolvable())?;
        let category: Category = category.parse().map_err(|_| unresolvable())?;
        if !category.table().iter().any(|(n, _)| *n == base) {
            return Err(unresolvable());
        }
        if category == Category::Shape2d && source != Source::Original {
            return Err(unresolvable());
        }
        Ok(Self::new(category, base, source))
    }

    /// Ordering key used for feature vectors: category, base name, source.
    pub fn sort_key(&self) -> (Category, &str, Source) {
        (self.category, &self.base_name, self.source)
    }
}

impl fmt::Display for FeatureDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}_{}", self.source, self.category, self.base_name)
    }
}
