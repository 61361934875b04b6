//! Regenerates the bundled synthetic dataset used by the CLI tests.
//!
//! Usage: `cargo run -p radiocorr-cli --example make_fixture [OUT_DIR]`

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use radiocorr_core::imaging::{write_gray8_png, GrayImage2D, RoiMask};
use radiocorr_core::radiomics::{extract_all, ExtractionConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIZE: usize = 32;
const PER_CLASS: usize = 12;

struct Sample {
    id: String,
    label: &'static str,
    image: Vec<u8>,
    mask: Vec<u8>,
}

fn lesion(rng: &mut ChaCha8Rng, malignant: bool) -> (Vec<u8>, Vec<u8>) {
    let cy = 15.5 + rng.gen_range(-2.0..2.0);
    let cx = 15.5 + rng.gen_range(-2.0..2.0);
    let r0 = rng.gen_range(7.0..10.0);
    let lobes = rng.gen_range(4..7) as f64;
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    let ramp = rng.gen_range(-1.5..1.5);
    let mut image = Vec::with_capacity(SIZE * SIZE);
    let mut mask = Vec::with_capacity(SIZE * SIZE);
    for r in 0..SIZE {
        for c in 0..SIZE {
            let (dy, dx) = (r as f64 - cy, c as f64 - cx);
            let theta = dy.atan2(dx);
            let radius = if malignant {
                r0 * (1.0 + 0.3 * (lobes * theta + phase).sin())
            } else {
                r0
            };
            let inside = (dy * dy + dx * dx).sqrt() <= radius;
            let v = if inside {
                if malignant {
                    140.0 + rng.gen_range(-45.0..45.0)
                } else {
                    120.0 + ramp * dx + rng.gen_range(-6.0..6.0)
                }
            } else {
                40.0 + rng.gen_range(-10.0..10.0)
            };
            image.push(v.round().clamp(0.0, 255.0) as u8);
            mask.push(if inside { 255 } else { 0 });
        }
    }
    (image, mask)
}

fn main() {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/synthetic")
        });
    fs::create_dir_all(out.join("images")).unwrap();
    fs::create_dir_all(out.join("masks")).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);

    let mut samples = Vec::new();
    for i in 0..2 * PER_CLASS {
        let malignant = i % 2 == 1;
        let (image, mask) = lesion(&mut rng, malignant);
        samples.push(Sample {
            id: format!("case{i:02}"),
            label: if malignant { "malignant" } else { "benign" },
            image,
            mask,
        });
    }

    let mut manifest = String::from("sample_id,image_path,mask_path,label\n");
    for s in &samples {
        let img = format!("images/{}.png", s.id);
        let msk = format!("masks/{}.png", s.id);
        write_gray8_png(out.join(&img), SIZE, SIZE, &s.image).unwrap();
        write_gray8_png(out.join(&msk), SIZE, SIZE, &s.mask).unwrap();
        writeln!(manifest, "{},{img},{msk},{}", s.id, s.label).unwrap();
    }
    fs::write(out.join("manifest.csv"), manifest).unwrap();

    // Deep features: three monotone functions of radiomic features plus noise.
    let config: ExtractionConfig = ExtractionConfig {
        n_levels: 64,
        ..Default::default()
    };
    let planted = [
        "original_firstorder_Mean",
        "original_glcm_Contrast",
        "original_shape2d_PixelSurface",
    ];
    let mut deep = String::from("sample_id");
    for j in 0..10 {
        write!(deep, ",deep{j:02}").unwrap();
    }
    deep.push('\n');
    for s in &samples {
        let image =
            GrayImage2D::new(SIZE, SIZE, s.image.iter().map(|&v| v as f64).collect()).unwrap();
        let mask = RoiMask::new(SIZE, SIZE, s.mask.iter().map(|&v| v > 0).collect()).unwrap();
        let fv = extract_all(&image, &mask, &config).unwrap();
        let value = |name: &str| fv.get(name).unwrap();
        let cols = [
            (value(planted[0]) / 100.0).exp(),
            -value(planted[1]),
            value(planted[2]).sqrt(),
        ];
        write!(deep, "{}", s.id).unwrap();
        for v in cols {
            write!(deep, ",{v:?}").unwrap();
        }
        for _ in 3..10 {
            write!(deep, ",{:?}", rng.gen_range(-1.0..1.0f64)).unwrap();
        }
        deep.push('\n');
    }
    fs::write(out.join("deep.csv"), deep).unwrap();

    fs::write(
        out.join("config.toml"),
        "nzv_cutoff = 0.005\nprune_threshold = 0.9\nthresholds = [0.30, 0.35, 0.40, 0.45]\n\
         mode = \"signed\"\ntrend_points = 101\n\n[extraction]\nn_levels = 64\n\n\
         [cv]\nk = 3\nrepeats = 2\nseed = 7\n\n[rf]\nn_estimators = 25\nseed = 7\n\n\
         [sfs]\nk_max = 3\npatience = 2\n",
    )
    .unwrap();
    println!("fixture written to {}", out.display());
}
