use super::{zip_names, FeatureTable, NamedValues};
use crate::error::{Error, Result};
use crate::imaging::RoiMask;

pub const SHAPE_FEATURES: FeatureTable = &[
    (
        "Elongation",
        "sqrt(lambda_minor / lambda_major); 1 when lambda_major = 0",
    ),
    (
        "MajorAxisLength",
        "4 sqrt(lambda_major) of the pixel-centre covariance",
    ),
    ("MaximumDiameter", "max distance between pixel centres"),
    ("MinorAxisLength", "4 sqrt(lambda_minor)"),
    ("Perimeter", "foreground/background edge count * spacing"),
    ("PerimeterSurfaceRatio", "Perimeter / PixelSurface"),
    ("PixelSurface", "pixel count * spacing^2"),
    ("Sphericity", "2 sqrt(pi * PixelSurface) / Perimeter"),
];

pub fn shape2d_features(mask: &RoiMask, pixel_spacing: f64) -> Result<NamedValues> {
    let count = mask.count();
    if count == 0 {
        return Err(Error::EmptyMask);
    }
    let area = count as f64 * pixel_spacing * pixel_spacing;

    let mut edges = 0usize;
    let mut boundary = Vec::new();
    let (mut sr, mut sc) = (0.0, 0.0);
    for (r, c) in mask.coordinates() {
        let (ri, ci) = (r as isize, c as isize);
        let open = [(-1, 0), (1, 0), (0, -1), (0, 1)]
            .iter()
            .filter(|&&(dr, dc)| !mask.contains(ri + dr, ci + dc))
            .count();
        edges += open;
        if open > 0 {
            boundary.push((r as f64 * pixel_spacing, c as f64 * pixel_spacing));
        }
        sr += r as f64 * pixel_spacing;
        sc += c as f64 * pixel_spacing;
    }
    let perimeter = edges as f64 * pixel_spacing;

    // Hull vertices of the centre set always have an exposed edge, so the
    // boundary pixels suffice for the diameter.
    let mut diameter2: f64 = 0.0;
    for (i, &(r1, c1)) in boundary.iter().enumerate() {
        for &(r2, c2) in &boundary[i + 1..] {
            diameter2 = diameter2.max((r1 - r2).powi(2) + (c1 - c2).powi(2));
        }
    }

    let n = count as f64;
    let (mr, mc) = (sr / n, sc / n);
    let (mut vrr, mut vcc, mut vrc) = (0.0, 0.0, 0.0);
    for (r, c) in mask.coordinates() {
        let (dr, dc) = (r as f64 * pixel_spacing - mr, c as f64 * pixel_spacing - mc);
        vrr += dr * dr;
        vcc += dc * dc;
        vrc += dr * dc;
    }
    let (vrr, vcc, vrc) = (vrr / n, vcc / n, vrc / n);
    let half_trace = (vrr + vcc) / 2.0;
    let disc = (((vrr - vcc) / 2.0).powi(2) + vrc * vrc).sqrt();
    let major = half_trace + disc;
    let minor = (half_trace - disc).max(0.0);
    let elongation = if major > 0.0 {
        (minor / major).sqrt()
    } else {
        1.0
    };

    Ok(zip_names(
        SHAPE_FEATURES,
        &[
            elongation,
            4.0 * major.sqrt(),
            diameter2.sqrt(),
            4.0 * minor.sqrt(),
            perimeter,
            perimeter / area,
            area,
            2.0 * (std::f64::consts::PI * area).sqrt() / perimeter,
        ],
    ))
}
