//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any failed.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use radiocorr_core::cam::{
    eigen_cam, grad_cam, map_discrepancy, score_cam, upsample_bilinear, SaliencyMap, TensorStack,
};
use radiocorr_core::imaging::{
    crop_to_bounding_box, discretize_fixed_levels, min_max_normalize, DiscretizedRoi, GrayImage2D,
    RoiMask,
};
use radiocorr_core::learn::{cv_select_best, RandomForestParams};
use radiocorr_core::radiomics::{
    compute_glcm, compute_gldm, compute_glrlm, compute_glszm, compute_ngtdm, first_order_features,
    glcm_features, gldm_features, glrlm_features, glszm_features, ngtdm_features, shape2d_features,
    NamedValues, DEFAULT_OFFSETS,
};
use radiocorr_core::tabular::{
    auroc, correlation_prune, spearman, stratified_folds, CvScheme, FeatureMatrix, Label,
};
use radiocorr_core::wavelet::haar_decompose;
use radiocorr_core::xaicorr::{
    correlation_matrix, correlation_trend, default_grid, group_by_base, threshold_counts,
    CorrelationMatrix, Mode,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn get(values: &NamedValues, name: &str) -> f64 {
    values
        .iter()
        .find(|(n, _)| *n == name)
        .unwrap_or_else(|| panic!("no feature {name}"))
        .1
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= (1e-9 * a.abs().max(b.abs())).max(1e-12)
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    if took > limit {
        Err(format!("took {took:.2?}, limit {limit:?}"))
    } else {
        Ok(took)
    }
}

fn matrix(names: &[String], cols: Vec<Vec<f64>>, labels: Option<Vec<Label>>) -> FeatureMatrix {
    let n = cols[0].len();
    FeatureMatrix::from_columns(
        (0..n).map(|i| format!("s{i:03}")).collect(),
        names.to_vec(),
        cols,
        labels,
    )
    .unwrap()
}

const RADIOMIC_BASES: [&str; 6] = [
    "firstorder_Energy",
    "firstorder_Mean",
    "glcm_Contrast",
    "glrlm_RunEntropy",
    "glszm_SizeZoneNonUniformity",
    "gldm_DependenceNonUniformity",
];
const SOURCES: [&str; 5] = [
    "original",
    "waveletLL",
    "waveletLH",
    "waveletHL",
    "waveletHH",
];

fn radiomic_names(p: usize) -> Vec<String> {
    (0..p)
        .map(|i| {
            format!(
                "{}_{}",
                SOURCES[i % 5],
                RADIOMIC_BASES[(i / 5) % RADIOMIC_BASES.len()]
            )
        })
        .collect()
}

fn deep_names(p: usize) -> Vec<String> {
    (0..p).map(|i| format!("deep{i:02}")).collect()
}

fn texture_features(roi: &DiscretizedRoi) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    let families: [(&str, NamedValues); 5] = [
        ("glcm", glcm_features(&compute_glcm(roi, &DEFAULT_OFFSETS))),
        (
            "glrlm",
            glrlm_features(&compute_glrlm(roi, &DEFAULT_OFFSETS)),
        ),
        ("glszm", glszm_features(&compute_glszm(roi))),
        ("gldm", gldm_features(&compute_gldm(roi, 0))),
        ("ngtdm", ngtdm_features(&compute_ngtdm(roi))),
    ];
    for (cat, values) in families {
        for (n, v) in values {
            out.insert(format!("{cat}_{n}"), v);
        }
    }
    out
}

fn random_roi(r: &mut ChaCha8Rng) -> DiscretizedRoi {
    let (h, w) = (r.gen_range(2..=8), r.gen_range(2..=8));
    let ng = r.gen_range(1..=6u32);
    let fill = r.gen_range(0.5..=1.0);
    let mut bits: Vec<bool> = (0..h * w).map(|_| r.gen_bool(fill)).collect();
    if !bits.iter().any(|&b| b) {
        bits[r.gen_range(0..h * w)] = true;
    }
    let levels = (0..h * w).map(|_| r.gen_range(1..=ng)).collect();
    DiscretizedRoi::new(levels, ng, RoiMask::new(w, h, bits).unwrap()).unwrap()
}

fn c1_oracle() -> Outcome {
    let start = Instant::now();
    let mut r = rng(101);
    let mut compared = 0usize;
    for case in 0..500 {
        let roi = random_roi(&mut r);
        let lib = texture_features(&roi);
        let oracle = common::oracle::features(&roi);
        ensure!(
            lib.len() == oracle.len(),
            "case {case}: {} vs {} features",
            lib.len(),
            oracle.len()
        );
        for (name, &want) in &oracle {
            let got = *lib.get(name).ok_or(format!("library lacks {name}"))?;
            ensure!(
                rel_close(got, want),
                "case {case} {name}: library {got} oracle {want}"
            );
            compared += 1;
        }
    }
    let took = within(start, Duration::from_secs(30))?;
    Ok(format!("{compared} values over 500 ROIs in {took:.2?}"))
}

fn c2_hand_fixtures() -> Outcome {
    let rows = |r: &[&[u32]], ng| DiscretizedRoi::from_rows(r, ng).unwrap();

    let stripes = rows(&[&[1, 1], &[2, 2]], 2);
    let g = compute_glcm(&stripes, &[(0, 1)]);
    ensure!(
        g.probabilities() == [0.5, 0.0, 0.0, 0.5],
        "GLCM (0,1) {:?}",
        g.probabilities()
    );
    let f = glcm_features(&g);
    ensure!(get(&f, "Contrast") == 0.0, "contrast 0");
    ensure!(get(&f, "JointEnergy") == 0.5, "joint energy 0.5");
    ensure!(get(&f, "JointEntropy") == 1.0, "joint entropy 1");
    let g = compute_glcm(&stripes, &[(1, 0)]);
    ensure!(
        g.probabilities() == [0.0, 0.5, 0.5, 0.0],
        "GLCM (1,0) {:?}",
        g.probabilities()
    );
    ensure!(get(&glcm_features(&g), "Contrast") == 1.0, "contrast 1");

    let rlnu = |roi: &DiscretizedRoi| {
        get(
            &glrlm_features(&compute_glrlm(roi, &[(0, 1)])),
            "RunLengthNonUniformity",
        )
    };
    ensure!(rlnu(&rows(&[&[1, 1, 2]], 2)) == 1.0, "RLNU = 1");
    ensure!(rlnu(&rows(&[&[1, 1], &[1, 1]], 1)) == 2.0, "RLNU = 2");

    let z = glszm_features(&compute_glszm(&stripes));
    ensure!(get(&z, "SizeZoneNonUniformity") == 2.0, "SZNU = 2");
    let checker = compute_glszm(&rows(&[&[1, 2], &[2, 1]], 2));
    ensure!(
        checker.zone_count() == 2 && checker.get(1, 2) == 1 && checker.get(2, 2) == 1,
        "diagonal zones"
    );

    let flat = compute_gldm(&rows(&[&[1, 1], &[1, 1]], 1), 0);
    ensure!(flat.get(1, 3) == 4, "D[1][3] = 4");
    ensure!(
        get(&gldm_features(&flat), "DependenceNonUniformity") == 4.0,
        "DNU = 4 (constant)"
    );
    let diag = gldm_features(&compute_gldm(&rows(&[&[1, 2], &[2, 1]], 2), 0));
    ensure!(
        get(&diag, "DependenceNonUniformity") == 4.0,
        "DNU = 4 (diagonal)"
    );

    let n = compute_ngtdm(&rows(&[&[1, 2, 1]], 2));
    ensure!(
        n.s == vec![2.0, 1.0] && n.n == vec![2, 1],
        "NGTDM s {:?} n {:?}",
        n.s,
        n.n
    );

    let first = |values: Vec<f64>| {
        let img = GrayImage2D::new(values.len(), 1, values).unwrap();
        let mask = RoiMask::full(img.width(), 1).unwrap();
        let roi = discretize_fixed_levels(&img, &mask, 4).unwrap();
        first_order_features(&img, &mask, &roi).unwrap()
    };
    let fo = first(vec![1.0, 2.0, 3.0]);
    ensure!(
        get(&fo, "Energy") == 14.0 && get(&fo, "Mean") == 2.0 && get(&fo, "Range") == 2.0,
        "first order {{1,2,3}}"
    );
    let fo = first(vec![0.0, 0.0, 0.0, 1.0]);
    ensure!(
        get(&fo, "Mean") == 0.25 && get(&fo, "Variance") == 0.1875,
        "mean/variance {{0,0,0,1}}"
    );
    ensure!(
        close(get(&fo, "Skewness"), 2.0 / 3f64.sqrt(), 1e-9),
        "skewness {}",
        get(&fo, "Skewness")
    );

    let img = GrayImage2D::new(3, 1, vec![0.0, 0.5, 1.0]).unwrap();
    let roi = discretize_fixed_levels(&img, &RoiMask::full(3, 1).unwrap(), 2).unwrap();
    ensure!(roi.levels() == [1, 2, 2], "levels {:?}", roi.levels());
    let img = GrayImage2D::new(3, 1, vec![10.0, 20.0, 30.0]).unwrap();
    let roi = discretize_fixed_levels(&img, &RoiMask::full(3, 1).unwrap(), 3).unwrap();
    ensure!(roi.levels() == [1, 2, 3], "levels {:?}", roi.levels());
    let norm = min_max_normalize(&GrayImage2D::new(3, 1, vec![-2.0, 0.0, 2.0]).unwrap());
    ensure!(
        norm.pixels() == [0.0, 0.5, 1.0],
        "normalize {:?}",
        norm.pixels()
    );
    let mask = RoiMask::from_fn(4, 4, |r, c| (r, c) == (1, 1) || (r, c) == (2, 3)).unwrap();
    let (crop, _) = crop_to_bounding_box(&GrayImage2D::filled(4, 4, 0.0).unwrap(), &mask).unwrap();
    ensure!(
        (crop.height(), crop.width()) == (2, 3),
        "crop {}x{}",
        crop.height(),
        crop.width()
    );
    let shape = shape2d_features(&RoiMask::full(2, 2).unwrap(), 1.0).unwrap();
    ensure!(
        get(&shape, "PixelSurface") == 4.0 && get(&shape, "Perimeter") == 8.0,
        "shape 2x2"
    );
    ensure!(
        close(get(&shape, "MaximumDiameter"), 2f64.sqrt(), 1e-9),
        "diameter"
    );

    let haar = haar_decompose(&GrayImage2D::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap()).unwrap();
    let coeff = [
        haar.ll.get(0, 0),
        haar.lh.get(0, 0),
        haar.hl.get(0, 0),
        haar.hh.get(0, 0),
    ];
    for (got, want) in coeff.iter().zip([5.0, -1.0, -2.0, 0.0]) {
        ensure!(close(*got, want, 1e-9), "Haar {coeff:?}");
    }

    ensure!(
        spearman(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap() == Some(0.8),
        "spearman 0.8"
    );
    ensure!(
        auroc(&[0.1, 0.4, 0.35, 0.8], &[0, 0, 1, 1]).unwrap() == 0.75,
        "AUROC 0.75"
    );
    let balanced: Vec<Label> = (0..20).map(|i| (i % 2) as Label).collect();
    let folds = stratified_folds(
        &balanced,
        &CvScheme {
            k: 10,
            repeats: 20,
            seed: 3,
            stratified: true,
        },
    )
    .unwrap();
    ensure!(folds.units().len() == 200, "fold units");
    for (rep, fold) in folds.units() {
        let test = folds.test_indices(rep, fold);
        let pos = test.iter().filter(|&&i| balanced[i] == 1).count();
        ensure!(
            test.len() == 2 && pos == 1,
            "repeat {rep} fold {fold}: {test:?}"
        );
    }
    let cm = CorrelationMatrix::from_parts(
        vec!["original_firstorder_Energy".into()],
        vec!["d0".into(), "d1".into()],
        vec![Some(0.5), Some(0.2)],
        10,
    )
    .unwrap();
    ensure!(
        threshold_counts(&cm, &[0.45], Mode::Signed).unwrap().counts == [[1]],
        "threshold count"
    );

    let a = TensorStack::from_maps(&[
        vec![vec![1.0, 0.0], vec![0.0, 0.0]],
        vec![vec![0.0, 0.0], vec![0.0, 1.0]],
    ])
    .unwrap();
    let g = TensorStack::from_maps(&[
        vec![vec![1.0, 1.0], vec![0.0, 0.0]],
        vec![vec![0.0, 0.0], vec![-1.0, -1.0]],
    ])
    .unwrap();
    ensure!(
        grad_cam(&a, &g).unwrap().data() == [1.0, 0.0, 0.0, 0.0],
        "Grad-CAM 2x2"
    );
    let a = TensorStack::from_maps(&[vec![vec![1.0, 0.0]], vec![vec![0.0, 1.0]]]).unwrap();
    ensure!(
        score_cam(&a, &[2.0, 1.0], false).unwrap().data() == [1.0, 0.5],
        "Score-CAM"
    );
    let up =
        upsample_bilinear(&SaliencyMap::from_raw(2, 1, vec![0.0, 1.0]).unwrap(), 4, 1).unwrap();
    for (got, want) in up.data().iter().zip([0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]) {
        ensure!(close(*got, want, 1e-9), "upsample {:?}", up.data());
    }
    Ok("all hand-derived values reproduced".into())
}

fn transform(col: &[f64], which: usize) -> Vec<f64> {
    match which {
        0 => col.iter().map(|v| v.exp()).collect(),
        1 => col.iter().map(|v| v.powi(3)).collect(),
        _ => col.iter().map(|v| 2.5 * v + 7.0).collect(),
    }
}

fn random_column(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    if r.gen_bool(0.2) {
        (0..n).map(|_| r.gen_range(0..6) as f64).collect()
    } else {
        (0..n).map(|_| r.gen_range(-3.0..3.0)).collect()
    }
}

fn c3_rank_invariance() -> Outcome {
    let mut r = rng(303);
    let thresholds = [0.1, 0.2, 0.3, 0.45];
    for case in 0..100 {
        let n = r.gen_range(8..40);
        let (p, q) = (r.gen_range(3..12), r.gen_range(2..10));
        let rad: Vec<Vec<f64>> = (0..p).map(|_| random_column(&mut r, n)).collect();
        let deep: Vec<Vec<f64>> = (0..q)
            .map(|j| {
                let base = &rad[j % p];
                let noise = r.gen_range(0.0..2.0);
                base.iter()
                    .map(|v| v + noise * r.gen_range(-1.0..1.0))
                    .collect()
            })
            .collect();
        let warp = |cols: &[Vec<f64>], r: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
            cols.iter()
                .map(|c| {
                    if r.gen_bool(0.6) {
                        transform(c, r.gen_range(0..3))
                    } else {
                        c.clone()
                    }
                })
                .collect()
        };
        let (rad2, deep2) = (warp(&rad, &mut r), warp(&deep, &mut r));

        for (a, b) in rad.iter().zip(&rad2) {
            for (c, d) in deep.iter().zip(&deep2) {
                let x = spearman(a, c).unwrap().map(f64::to_bits);
                let y = spearman(b, d).unwrap().map(f64::to_bits);
                ensure!(x == y, "case {case}: spearman bits differ");
            }
        }
        let (rn, dn) = (radiomic_names(p), deep_names(q));
        let (m1, m2) = (matrix(&rn, rad, None), matrix(&rn, rad2, None));
        let (d1, d2) = (matrix(&dn, deep, None), matrix(&dn, deep2, None));
        let kept = |m: &FeatureMatrix| correlation_prune(m, 0.5).unwrap().matrix.columns().to_vec();
        ensure!(
            kept(&m1) == kept(&m2),
            "case {case}: prune survivors differ"
        );
        let (c1, c2) = (
            correlation_matrix(&m1, &d1).unwrap(),
            correlation_matrix(&m2, &d2).unwrap(),
        );
        for mode in [Mode::Signed, Mode::Absolute] {
            let t1 = threshold_counts(&c1, &thresholds, mode).unwrap();
            let t2 = threshold_counts(&c2, &thresholds, mode).unwrap();
            ensure!(t1 == t2, "case {case}: threshold report differs");
            ensure!(
                group_by_base(&t1).unwrap() == group_by_base(&t2).unwrap(),
                "case {case}: grouped report differs"
            );
        }
    }
    Ok("100 matrices bit-identical under exp/cube/affine".into())
}

fn c4_planted() -> Outcome {
    let start = Instant::now();
    let mut r = rng(404);
    let n = 200;
    let rad: Vec<Vec<f64>> = (0..20)
        .map(|_| (0..n).map(|_| r.gen_range(-1.0..1.0)).collect())
        .collect();
    let planted = [(0usize, 3usize), (7, 11), (13, 25)];
    let mut deep: Vec<Vec<f64>> = (0..30)
        .map(|_| (0..n).map(|_| r.gen_range(-1.0..1.0)).collect())
        .collect();
    for (k, &(i, j)) in planted.iter().enumerate() {
        deep[j] = transform(&rad[i], k);
    }
    let (rn, dn) = (radiomic_names(20), deep_names(30));
    let cm = correlation_matrix(&matrix(&rn, rad, None), &matrix(&dn, deep, None)).unwrap();
    let tr = threshold_counts(&cm, &[0.9], Mode::Signed).unwrap();
    let mut found = Vec::new();
    for i in 0..20 {
        for j in 0..30 {
            if cm.get(i, j).is_some_and(|rho| rho >= 0.9) {
                found.push((i, j));
            }
        }
    }
    ensure!(found == planted, "pairs at 0.9: {found:?}");
    let total: usize = tr.counts.iter().map(|c| c[0]).sum();
    ensure!(total == 3, "total count {total}");
    let trend = correlation_trend(&cm, &default_grid(101), Mode::Signed).unwrap();
    ensure!(trend.len() == 101, "grid size");
    ensure!(
        trend.windows(2).all(|w| w[1].total <= w[0].total),
        "trend increases"
    );
    ensure!(
        trend.last().unwrap().total == 3,
        "trend at M = 1 is {}",
        trend.last().unwrap().total
    );
    let took = within(start, Duration::from_secs(1))?;
    Ok(format!("3 planted pairs recovered in {took:.2?}"))
}

fn c5_monotonicity() -> Outcome {
    let mut r = rng(505);
    for case in 0..1000 {
        let (p, q) = (r.gen_range(1..6), r.gen_range(1..8));
        let rho: Vec<Option<f64>> = (0..p * q)
            .map(|_| {
                if r.gen_bool(0.05) {
                    None
                } else {
                    Some(r.gen_range(-1.0..=1.0))
                }
            })
            .collect();
        let cm = CorrelationMatrix::from_parts(radiomic_names(p), deep_names(q), rho, 20).unwrap();
        let mut grid: Vec<f64> = (0..r.gen_range(2..12))
            .map(|_| r.gen_range(-1.0..=1.0))
            .collect();
        grid.sort_by(f64::total_cmp);
        for mode in [Mode::Signed, Mode::Absolute] {
            let tr = threshold_counts(&cm, &grid, mode).unwrap();
            for (name, counts) in tr.names.iter().zip(&tr.counts) {
                ensure!(
                    counts.windows(2).all(|w| w[1] <= w[0]),
                    "case {case} {name} {mode:?}: {counts:?}"
                );
            }
        }
    }
    Ok("1000 matrices, both modes".into())
}

fn c6_parseval() -> Outcome {
    let mut r = rng(606);
    let mut worst = 0.0f64;
    for case in 0..200 {
        let (h, w) = (2 * r.gen_range(1..=16), 2 * r.gen_range(1..=16));
        let px: Vec<f64> = (0..h * w).map(|_| r.gen_range(-100.0..100.0)).collect();
        let energy: f64 = px.iter().map(|v| v * v).sum();
        let bands = haar_decompose(&GrayImage2D::new(w, h, px).unwrap()).unwrap();
        let out: f64 = [&bands.ll, &bands.lh, &bands.hl, &bands.hh]
            .iter()
            .flat_map(|b| b.pixels().iter())
            .map(|v| v * v)
            .sum();
        let rel = (out - energy).abs() / energy;
        worst = worst.max(rel);
        ensure!(rel <= 1e-9, "case {case}: relative error {rel:e}");
    }
    Ok(format!("worst relative error {worst:.1e}"))
}

fn c7_classifier() -> Outcome {
    let start = Instant::now();
    let mut r = rng(707);
    let n = 200;
    let labels: Vec<Label> = (0..n).map(|i| (i % 2) as Label).collect();
    let mut cols: Vec<Vec<f64>> = (0..5)
        .map(|_| (0..n).map(|_| r.gen_range(-1.0..1.0)).collect())
        .collect();
    for (i, &l) in labels.iter().enumerate() {
        cols[0][i] = if l == 1 {
            r.gen_range(0.2..1.0)
        } else {
            r.gen_range(-1.0..-0.2)
        };
        cols[1][i] += 0.5 * f64::from(l);
    }
    let names: Vec<String> = (0..5).map(|j| format!("x{j}")).collect();
    let scheme = CvScheme {
        k: 10,
        repeats: 20,
        seed: 7,
        stratified: true,
    };
    let rf = RandomForestParams {
        n_estimators: 100,
        seed: 7,
        min_samples_leaf: 2,
    };

    let separable = matrix(&names, cols.clone(), Some(labels.clone()));
    let out = cv_select_best(&separable, &rf, &scheme, 7).map_err(|e| e.to_string())?;
    let acc = out.pooled.accuracy.mean;
    ensure!(acc >= 0.95, "separable pooled accuracy {acc}");

    let mut shuffled = labels.clone();
    shuffled.shuffle(&mut r);
    let noise = matrix(&names, cols, Some(shuffled));
    let out = cv_select_best(&noise, &rf, &scheme, 7).map_err(|e| e.to_string())?;
    let auc = out.pooled.auroc.mean;
    ensure!((0.35..=0.65).contains(&auc), "shuffled pooled AUROC {auc}");
    let took = within(start, Duration::from_secs(60))?;
    Ok(format!(
        "accuracy {acc:.4}, shuffled AUROC {auc:.4}, {took:.2?}"
    ))
}

fn c8_auroc() -> Outcome {
    let mut r = rng(808);
    for case in 0..1000 {
        let n = r.gen_range(2..=200);
        let mut labels: Vec<Label> = (0..n).map(|_| r.gen_range(0..=1)).collect();
        labels[0] = 0;
        labels[1] = 1;
        let coarse = r.gen_bool(0.5);
        let scores: Vec<f64> = (0..n)
            .map(|_| {
                if coarse {
                    r.gen_range(0..8) as f64 / 8.0
                } else {
                    r.gen_range(0.0..1.0)
                }
            })
            .collect();
        let (mut wins, mut ties, mut pos, mut neg) = (0u64, 0u64, 0u64, 0u64);
        for i in 0..n {
            if labels[i] == 1 {
                pos += 1;
            } else {
                neg += 1;
            }
            for j in 0..n {
                if labels[i] == 1 && labels[j] == 0 {
                    if scores[i] > scores[j] {
                        wins += 1;
                    } else if scores[i] == scores[j] {
                        ties += 1;
                    }
                }
            }
        }
        let brute = (wins as f64 + 0.5 * ties as f64) / (pos as f64 * neg as f64);
        let got = auroc(&scores, &labels).unwrap();
        ensure!(got == brute, "case {case}: {got} vs {brute}");
    }
    Ok("1000 sets exact".into())
}

fn c9_determinism() -> Outcome {
    let start = Instant::now();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let files = common::pipeline(a.path(), "11");
    common::pipeline(b.path(), "11");
    for f in &files {
        let (x, y) = (
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
        );
        ensure!(x == y, "{f} differs between runs");
    }
    let took = within(start, Duration::from_secs(120))?;
    Ok(format!(
        "{} outputs byte-identical, {took:.2?}",
        files.len()
    ))
}

fn random_pattern(r: &mut ChaCha8Rng, h: usize, w: usize) -> Vec<f64> {
    let mut p: Vec<f64> = (0..h * w).map(|_| r.gen_range(0.0..1.0)).collect();
    p[r.gen_range(0..h * w)] = 1.5;
    p
}

fn stack(maps: &[Vec<f64>], h: usize, w: usize) -> TensorStack {
    TensorStack::new(maps.len(), h, w, maps.concat()).unwrap()
}

/// Leading left singular vector by one-sided Jacobi rotations.
fn jacobi_dominant(cols: &[Vec<f64>]) -> Vec<f64> {
    let mut u: Vec<Vec<f64>> = cols.to_vec();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    for _ in 0..100 {
        let mut off = 0.0f64;
        for i in 0..u.len() {
            for j in i + 1..u.len() {
                let (a, b, c) = (dot(&u[i], &u[i]), dot(&u[j], &u[j]), dot(&u[i], &u[j]));
                off = off.max(c.abs() / (a * b).sqrt().max(1e-300));
                if c.abs() < 1e-300 {
                    continue;
                }
                let zeta = (b - a) / (2.0 * c);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for p in 0..u[i].len() {
                    let (x, y) = (u[i][p], u[j][p]);
                    u[i][p] = cs * x - sn * y;
                    u[j][p] = sn * x + cs * y;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    let top = u
        .iter()
        .max_by(|a, b| dot(a, a).total_cmp(&dot(b, b)))
        .unwrap()
        .clone();
    let sign = if top.iter().sum::<f64>() < 0.0 {
        -1.0
    } else {
        1.0
    };
    top.iter().map(|v| v * sign).collect()
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let clamped: Vec<f64> = v.iter().map(|x| x.max(0.0)).collect();
    let max = clamped.iter().copied().fold(0.0, f64::max);
    clamped.iter().map(|x| x / max).collect()
}

fn c10_cam() -> Outcome {
    let mut r = rng(1010);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let (h, w) = (r.gen_range(2..=8), r.gen_range(2..=8));
        let k = r.gen_range(1..=6);
        let pattern = random_pattern(&mut r, h, w);
        let maps: Vec<Vec<f64>> = (0..k)
            .map(|_| {
                let c = r.gen_range(0.2..3.0) * if r.gen_bool(0.3) { -1.0 } else { 1.0 };
                pattern.iter().map(|v| c * v).collect()
            })
            .collect();
        let a = stack(&maps, h, w);
        let want = normalized(&pattern);
        for (got, want) in eigen_cam(&a).data().iter().zip(&want) {
            worst = worst.max((got - want).abs());
            ensure!(
                (got - want).abs() <= 1e-6,
                "case {case}: rank-1 recovery {got} vs {want}"
            );
        }

        let acts: Vec<Vec<f64>> = (0..k).map(|_| random_pattern(&mut r, h, w)).collect();
        let grads: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..h * w).map(|_| r.gen_range(-0.5..1.0)).collect())
            .collect();
        let a = stack(&acts, h, w);
        let factor = 2f64.powi(r.gen_range(-6..=6));
        let scaled: Vec<Vec<f64>> = grads
            .iter()
            .map(|g| g.iter().map(|v| v * factor).collect())
            .collect();
        let (g1, g2) = (stack(&grads, h, w), stack(&scaled, h, w));
        ensure!(
            grad_cam(&a, &g1).unwrap() == grad_cam(&a, &g2).unwrap(),
            "case {case}: Grad-CAM scaling"
        );
        let weights: Vec<f64> = (0..k).map(|_| r.gen_range(-0.5..1.0)).collect();
        let scaled_w: Vec<f64> = weights.iter().map(|v| v * factor).collect();
        ensure!(
            score_cam(&a, &weights, false).unwrap() == score_cam(&a, &scaled_w, false).unwrap(),
            "case {case}: Score-CAM scaling"
        );

        if h * w >= 2 {
            let p1 = random_pattern(&mut r, h, w);
            let mut p2 = random_pattern(&mut r, h, w);
            let proj = p1.iter().zip(&p2).map(|(a, b)| a * b).sum::<f64>()
                / p1.iter().map(|v| v * v).sum::<f64>();
            for (x, y) in p2.iter_mut().zip(&p1) {
                *x = 0.5 * (*x - proj * y);
            }
            let cols = vec![p1.clone(), p2.clone()];
            let want = normalized(&jacobi_dominant(&cols));
            let got = eigen_cam(&stack(&cols, h, w));
            for (g, w) in got.data().iter().zip(&want) {
                ensure!(
                    (g - w).abs() <= 1e-6,
                    "case {case}: orthogonal pair vs Jacobi oracle"
                );
            }
        }
    }
    let same = SaliencyMap::from_raw(2, 2, vec![0.1, 0.7, 1.0, 0.2]).unwrap();
    let d = map_discrepancy(&same, &same, 0.5).unwrap();
    ensure!(
        d.pearson == Some(1.0) && d.top_q_jaccard == 1.0,
        "self discrepancy"
    );
    Ok(format!("100 stacks, worst rank-1 error {worst:.1e}"))
}

/// Deep columns whose Spearman correlation with `x` falls in `[lo, hi)`,
/// built by adding seeded noise of varying strength.
fn correlated_with(x: &[f64], lo: f64, hi: f64, r: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let s = r.gen_range(0.0..6.0);
        let y: Vec<f64> = x.iter().map(|v| v + s * r.gen_range(-1.0..1.0)).collect();
        let rho = spearman(x, &y).unwrap().unwrap();
        if rho >= lo + 0.005 && rho < hi - 0.005 {
            return y;
        }
    }
}

fn c11_report() -> Outcome {
    let mut r = rng(1111);
    let n = 150;
    let energy: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..1.0)).collect();
    let mut deep = Vec::new();
    for (count, lo, hi) in [
        (2, 0.45, 0.95),
        (2, 0.40, 0.45),
        (5, 0.35, 0.40),
        (6, 0.30, 0.35),
        (10, -0.25, 0.25),
    ] {
        for _ in 0..count {
            deep.push(correlated_with(&energy, lo, hi, &mut r));
        }
    }
    let rad_names: Vec<String> = [
        "original_firstorder_Energy",
        "original_glcm_Contrast",
        "waveletHH_gldm_DependenceEntropy",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let others: Vec<Vec<f64>> = (0..2)
        .map(|_| (0..n).map(|_| r.gen_range(0.0..1.0)).collect())
        .collect();
    let rad = matrix(&rad_names, [vec![energy], others].concat(), None);
    let deep = matrix(&deep_names(deep.len()), deep, None);

    let dir = tempfile::tempdir().unwrap();
    let p = |f: &str| dir.path().join(f);
    rad.write_csv_path(p("radiomic.csv")).unwrap();
    deep.write_csv_path(p("deep.csv")).unwrap();
    common::run_ok(&[
        "explain",
        "--radiomic",
        common::s(&p("radiomic.csv")),
        "--deep",
        common::s(&p("deep.csv")),
        "--provenance",
        "grouped-fixture",
        "--out-json",
        common::s(&p("explain.json")),
        "--out-csv",
        common::s(&p("explain.csv")),
    ]);
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(p("explain.json")).unwrap()).unwrap();
    common::validate_schema("explain_report.schema.json", &report)?;
    let group = report["grouped"]
        .as_array()
        .and_then(|g| g.iter().find(|g| g["base"] == "firstorder_Energy"))
        .ok_or("no firstorder_Energy group")?;
    ensure!(
        report["thresholds"] == serde_json::json!([0.3, 0.35, 0.4, 0.45]),
        "thresholds {}",
        report["thresholds"]
    );
    ensure!(
        group["counts"] == serde_json::json!([15, 9, 4, 2]),
        "counts {}",
        group["counts"]
    );
    Ok("schema valid; firstorder_Energy counts 15/9/4/2".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("radiomic oracle equivalence", c1_oracle),
        ("hand-derived fixtures", c2_hand_fixtures),
        ("rank invariance", c3_rank_invariance),
        ("planted-correlation recovery", c4_planted),
        ("threshold monotonicity", c5_monotonicity),
        ("Haar energy preservation", c6_parseval),
        ("classifier sanity", c7_classifier),
        ("AUROC oracle", c8_auroc),
        ("end-to-end determinism", c9_determinism),
        ("CAM reconstructions", c10_cam),
        ("report conformance", c11_report),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
