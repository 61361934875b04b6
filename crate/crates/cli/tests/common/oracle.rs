//! Brute-force texture features written straight from the definitions.
//! Matrices are built by enumeration (all pixel pairs, maximal segments,
//! union-find zones, explicit neighbour loops) and features are evaluated
//! on dense matrices. Shares no code with the library.

use std::collections::{BTreeMap, HashMap};

use radiocorr_core::imaging::DiscretizedRoi;

const DIRECTIONS: [(i64, i64); 4] = [(0, 1), (1, 0), (1, 1), (1, -1)];
const COARSENESS_CAP: f64 = 1e6;

struct Pixels {
    ng: usize,
    px: Vec<(i64, i64, usize)>,
    grid: HashMap<(i64, i64), usize>,
}

impl Pixels {
    fn new(roi: &DiscretizedRoi) -> Self {
        let w = roi.width();
        let px: Vec<(i64, i64, usize)> = roi
            .levels()
            .iter()
            .enumerate()
            .filter(|(idx, _)| roi.mask().bits()[*idx])
            .map(|(idx, &l)| ((idx / w) as i64, (idx % w) as i64, l as usize))
            .collect();
        let grid = px.iter().map(|&(r, c, l)| ((r, c), l)).collect();
        Self {
            ng: roi.n_levels() as usize,
            px,
            grid,
        }
    }

    fn at(&self, r: i64, c: i64) -> Option<usize> {
        self.grid.get(&(r, c)).copied()
    }
}

fn h(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// All oracle features keyed `category_BaseName`.
pub fn features(roi: &DiscretizedRoi) -> BTreeMap<String, f64> {
    let px = Pixels::new(roi);
    let mut out = BTreeMap::new();
    let mut put = |cat: &str, vals: Vec<(&str, f64)>| {
        for (n, v) in vals {
            out.insert(format!("{cat}_{n}"), v);
        }
    };
    put("glcm", glcm(&px));
    put("glrlm", size_family(&runs(&px), px.ng, SizeKind::Run));
    put(
        "glszm",
        size_family(&zones(&px), px.ng, SizeKind::Zone(px.px.len())),
    );
    put(
        "gldm",
        size_family(&dependence(&px), px.ng, SizeKind::Dependence),
    );
    put("ngtdm", ngtdm(&px));
    out
}

fn glcm(px: &Pixels) -> Vec<(&'static str, f64)> {
    let ng = px.ng;
    let mut m = vec![vec![0.0f64; ng + 1]; ng + 1];
    let mut total = 0.0;
    for a in &px.px {
        for b in &px.px {
            let (dr, dc) = (b.0 - a.0, b.1 - a.1);
            let hit = DIRECTIONS
                .iter()
                .any(|&(x, y)| (dr, dc) == (x, y) || (dr, dc) == (-x, -y));
            if hit {
                m[a.2][b.2] += 1.0;
                total += 1.0;
            }
        }
    }
    if total == 0.0 {
        let mut v: Vec<(&str, f64)> = GLCM_NAMES.iter().map(|n| (*n, 0.0)).collect();
        v.iter_mut().find(|x| x.0 == "Correlation").unwrap().1 = 1.0;
        return v;
    }
    let p = |i: usize, j: usize| m[i][j] / total;
    let levels: Vec<usize> = (1..=ng).collect();
    let fl = |x: usize| x as f64;
    let sum = |f: &dyn Fn(usize, usize) -> f64| -> f64 {
        let mut s = 0.0;
        for &i in &levels {
            for &j in &levels {
                if p(i, j) > 0.0 {
                    s += f(i, j);
                }
            }
        }
        s
    };
    let px_: Vec<f64> = (0..=ng)
        .map(|i| {
            if i == 0 {
                0.0
            } else {
                levels.iter().map(|&j| p(i, j)).sum()
            }
        })
        .collect();
    let py_: Vec<f64> = (0..=ng)
        .map(|j| {
            if j == 0 {
                0.0
            } else {
                levels.iter().map(|&i| p(i, j)).sum()
            }
        })
        .collect();
    let mux = sum(&|i, j| fl(i) * p(i, j));
    let muy = sum(&|i, j| fl(j) * p(i, j));
    let varx = sum(&|i, j| (fl(i) - mux).powi(2) * p(i, j));
    let vary = sum(&|i, j| (fl(j) - muy).powi(2) * p(i, j));
    let auto = sum(&|i, j| fl(i) * fl(j) * p(i, j));
    let corr = if varx > 0.0 && vary > 0.0 {
        (auto - mux * muy) / (varx * vary).sqrt()
    } else {
        1.0
    };
    let cl = |k: i32| sum(&|i, j| (fl(i) + fl(j) - mux - muy).powi(k) * p(i, j));

    let mut pdiff = vec![0.0; ng];
    let mut psum = vec![0.0; 2 * ng + 1];
    for &i in &levels {
        for &j in &levels {
            pdiff[i.abs_diff(j)] += p(i, j);
            psum[i + j] += p(i, j);
        }
    }
    let da: f64 = pdiff.iter().enumerate().map(|(k, v)| k as f64 * v).sum();
    let de: f64 = pdiff.iter().map(|&v| h(v)).sum();
    let dv: f64 = pdiff
        .iter()
        .enumerate()
        .map(|(k, v)| (k as f64 - da).powi(2) * v)
        .sum();
    let sa: f64 = psum.iter().enumerate().map(|(k, v)| k as f64 * v).sum();
    let se: f64 = psum.iter().map(|&v| h(v)).sum();

    let ngf = ng as f64;
    let hxy = sum(&|i, j| h(p(i, j)));
    let hx: f64 = px_.iter().map(|&v| h(v)).sum();
    let hy: f64 = py_.iter().map(|&v| h(v)).sum();
    let hxy1 = sum(&|i, j| -p(i, j) * (px_[i] * py_[j]).log2());
    let mut hxy2 = 0.0;
    for &i in &levels {
        for &j in &levels {
            let q = px_[i] * py_[j];
            if q > 0.0 {
                hxy2 -= q * q.log2();
            }
        }
    }
    let hmax = hx.max(hy);
    let imc1 = if hmax > 0.0 { (hxy - hxy1) / hmax } else { 0.0 };
    let imc2 = if hxy2 > hxy {
        (1.0 - (-2.0 * (hxy2 - hxy)).exp()).sqrt()
    } else {
        0.0
    };
    let mut maxp = 0.0f64;
    for &i in &levels {
        for &j in &levels {
            maxp = maxp.max(p(i, j));
        }
    }

    vec![
        ("Autocorrelation", auto),
        ("ClusterProminence", cl(4)),
        ("ClusterShade", cl(3)),
        ("ClusterTendency", cl(2)),
        ("Contrast", sum(&|i, j| (fl(i) - fl(j)).powi(2) * p(i, j))),
        ("Correlation", corr),
        ("DifferenceAverage", da),
        ("DifferenceEntropy", de),
        ("DifferenceVariance", dv),
        ("Id", sum(&|i, j| p(i, j) / (1.0 + (fl(i) - fl(j)).abs()))),
        (
            "Idm",
            sum(&|i, j| p(i, j) / (1.0 + (fl(i) - fl(j)).powi(2))),
        ),
        (
            "Idmn",
            sum(&|i, j| p(i, j) / (1.0 + (fl(i) - fl(j)).powi(2) / (ngf * ngf))),
        ),
        (
            "Idn",
            sum(&|i, j| p(i, j) / (1.0 + (fl(i) - fl(j)).abs() / ngf)),
        ),
        ("Imc1", imc1),
        ("Imc2", imc2),
        (
            "InverseVariance",
            sum(&|i, j| {
                if i == j {
                    0.0
                } else {
                    p(i, j) / (fl(i) - fl(j)).powi(2)
                }
            }),
        ),
        ("JointAverage", mux),
        ("JointEnergy", sum(&|i, j| p(i, j).powi(2))),
        ("JointEntropy", hxy),
        ("MaximumProbability", maxp),
        ("SumAverage", sa),
        ("SumEntropy", se),
        ("SumSquares", varx),
    ]
}

const GLCM_NAMES: [&str; 23] = [
    "Autocorrelation",
    "ClusterProminence",
    "ClusterShade",
    "ClusterTendency",
    "Contrast",
    "Correlation",
    "DifferenceAverage",
    "DifferenceEntropy",
    "DifferenceVariance",
    "Id",
    "Idm",
    "Idmn",
    "Idn",
    "Imc1",
    "Imc2",
    "InverseVariance",
    "JointAverage",
    "JointEnergy",
    "JointEntropy",
    "MaximumProbability",
    "SumAverage",
    "SumEntropy",
    "SumSquares",
];

/// Dense `(level, size) -> count`.
type Dense = BTreeMap<(usize, usize), f64>;

/// Maximal segments: a run of length `len` from `start` along `d` is
/// counted when every cell matches and both cells just outside do not.
fn runs(px: &Pixels) -> Dense {
    let mut out = Dense::new();
    let maxlen = 8;
    for &(dr, dc) in &DIRECTIONS {
        for &(r, c, l) in &px.px {
            for len in 1..=maxlen {
                let inside = (0..len).all(|k| px.at(r + k * dr, c + k * dc) == Some(l));
                let before = px.at(r - dr, c - dc) == Some(l);
                let after = px.at(r + len * dr, c + len * dc) == Some(l);
                if inside && !before && !after {
                    *out.entry((l, len as usize)).or_default() += 1.0;
                }
            }
        }
    }
    out
}

fn zones(px: &Pixels) -> Dense {
    let n = px.px.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for a in 0..n {
        for b in 0..n {
            let (pa, pb) = (px.px[a], px.px[b]);
            let adjacent = a != b && (pa.0 - pb.0).abs() <= 1 && (pa.1 - pb.1).abs() <= 1;
            if adjacent && pa.2 == pb.2 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut sizes: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for a in 0..n {
        let root = find(&mut parent, a);
        let e = sizes.entry(root).or_insert((px.px[a].2, 0));
        e.1 += 1;
    }
    let mut out = Dense::new();
    for (_, (l, s)) in sizes {
        *out.entry((l, s)).or_default() += 1.0;
    }
    out
}

/// Dependence with α = 0; stored size is dependents + 1.
fn dependence(px: &Pixels) -> Dense {
    let mut out = Dense::new();
    for &(r, c, l) in &px.px {
        let k = px
            .px
            .iter()
            .filter(|q| {
                (q.0, q.1) != (r, c) && (q.0 - r).abs() <= 1 && (q.1 - c).abs() <= 1 && q.2 == l
            })
            .count();
        *out.entry((l, k + 1)).or_default() += 1.0;
    }
    out
}

enum SizeKind {
    Run,
    Zone(usize),
    Dependence,
}

fn size_family(m: &Dense, ng: usize, kind: SizeKind) -> Vec<(&'static str, f64)> {
    let n: f64 = m.values().sum();
    let maxs = m.keys().map(|k| k.1).max().unwrap_or(0);
    let get = |g: usize, s: usize| m.get(&(g, s)).copied().unwrap_or(0.0);
    let mut e = [0.0f64; 8]; // sre lre lge hge srl srh lrl lrh
    let (mut ent, mut weighted, mut mug, mut mus) = (0.0, 0.0, 0.0, 0.0);
    for g in 1..=ng {
        for s in 1..=maxs {
            let v = get(g, s);
            if v == 0.0 {
                continue;
            }
            let (gf, sf) = (g as f64, s as f64);
            e[0] += v / (sf * sf) / n;
            e[1] += v * sf * sf / n;
            e[2] += v / (gf * gf) / n;
            e[3] += v * gf * gf / n;
            e[4] += v / (gf * gf * sf * sf) / n;
            e[5] += v * gf * gf / (sf * sf) / n;
            e[6] += v * sf * sf / (gf * gf) / n;
            e[7] += v * gf * gf * sf * sf / n;
            ent += h(v / n);
            weighted += v * sf;
            mug += gf * v / n;
            mus += sf * v / n;
        }
    }
    let (mut gv, mut sv) = (0.0, 0.0);
    for (&(g, s), &v) in m {
        gv += v / n * (g as f64 - mug).powi(2);
        sv += v / n * (s as f64 - mus).powi(2);
    }
    let gln: f64 = (1..=ng)
        .map(|g| (1..=maxs).map(|s| get(g, s)).sum::<f64>().powi(2))
        .sum::<f64>()
        / n;
    let sln: f64 = (1..=maxs)
        .map(|s| (1..=ng).map(|g| get(g, s)).sum::<f64>().powi(2))
        .sum::<f64>()
        / n;
    match kind {
        SizeKind::Run => vec![
            ("GrayLevelNonUniformity", gln),
            ("GrayLevelNonUniformityNormalized", gln / n),
            ("GrayLevelVariance", gv),
            ("HighGrayLevelRunEmphasis", e[3]),
            ("LongRunEmphasis", e[1]),
            ("LongRunHighGrayLevelEmphasis", e[7]),
            ("LongRunLowGrayLevelEmphasis", e[6]),
            ("LowGrayLevelRunEmphasis", e[2]),
            ("RunEntropy", ent),
            ("RunLengthNonUniformity", sln),
            ("RunLengthNonUniformityNormalized", sln / n),
            ("RunPercentage", n / weighted),
            ("RunVariance", sv),
            ("ShortRunEmphasis", e[0]),
            ("ShortRunHighGrayLevelEmphasis", e[5]),
            ("ShortRunLowGrayLevelEmphasis", e[4]),
        ],
        SizeKind::Zone(np) => vec![
            ("GrayLevelNonUniformity", gln),
            ("GrayLevelNonUniformityNormalized", gln / n),
            ("GrayLevelVariance", gv),
            ("HighGrayLevelZoneEmphasis", e[3]),
            ("LargeAreaEmphasis", e[1]),
            ("LargeAreaHighGrayLevelEmphasis", e[7]),
            ("LargeAreaLowGrayLevelEmphasis", e[6]),
            ("LowGrayLevelZoneEmphasis", e[2]),
            ("SizeZoneNonUniformity", sln),
            ("SizeZoneNonUniformityNormalized", sln / n),
            ("SmallAreaEmphasis", e[0]),
            ("SmallAreaHighGrayLevelEmphasis", e[5]),
            ("SmallAreaLowGrayLevelEmphasis", e[4]),
            ("ZoneEntropy", ent),
            ("ZonePercentage", n / np as f64),
            ("ZoneVariance", sv),
        ],
        SizeKind::Dependence => vec![
            ("DependenceEntropy", ent),
            ("DependenceNonUniformity", sln),
            ("DependenceNonUniformityNormalized", sln / n),
            ("DependenceVariance", sv),
            ("GrayLevelNonUniformity", gln),
            ("GrayLevelVariance", gv),
            ("HighGrayLevelEmphasis", e[3]),
            ("LargeDependenceEmphasis", e[1]),
            ("LargeDependenceHighGrayLevelEmphasis", e[7]),
            ("LargeDependenceLowGrayLevelEmphasis", e[6]),
            ("LowGrayLevelEmphasis", e[2]),
            ("SmallDependenceEmphasis", e[0]),
            ("SmallDependenceHighGrayLevelEmphasis", e[5]),
            ("SmallDependenceLowGrayLevelEmphasis", e[4]),
        ],
    }
}

fn ngtdm(px: &Pixels) -> Vec<(&'static str, f64)> {
    let ng = px.ng;
    let mut s = vec![0.0; ng + 1];
    let mut cnt = vec![0.0; ng + 1];
    for &(r, c, l) in &px.px {
        let mut neigh = Vec::new();
        for dr in -1..=1 {
            for dc in -1..=1 {
                if (dr, dc) != (0, 0) {
                    if let Some(v) = px.at(r + dr, c + dc) {
                        neigh.push(v as f64);
                    }
                }
            }
        }
        if neigh.is_empty() {
            continue;
        }
        let mean = neigh.iter().sum::<f64>() / neigh.len() as f64;
        s[l] += (l as f64 - mean).abs();
        cnt[l] += 1.0;
    }
    let nvp: f64 = cnt.iter().sum();
    let p: Vec<f64> = cnt
        .iter()
        .map(|&k| if nvp > 0.0 { k / nvp } else { 0.0 })
        .collect();
    let present: Vec<usize> = (1..=ng).filter(|&i| p[i] > 0.0).collect();
    let ngp = present.len() as f64;
    let ps: f64 = present.iter().map(|&i| p[i] * s[i]).sum();
    let ssum: f64 = present.iter().map(|&i| s[i]).sum();
    let coarseness = if ps > 0.0 {
        (1.0 / ps).min(COARSENESS_CAP)
    } else {
        COARSENESS_CAP
    };
    let (mut con, mut bden, mut cx, mut st) = (0.0, 0.0, 0.0, 0.0);
    for &i in &present {
        for &j in &present {
            let (fi, fj) = (i as f64, j as f64);
            con += p[i] * p[j] * (fi - fj).powi(2);
            bden += (fi * p[i] - fj * p[j]).abs();
            cx += (fi - fj).abs() * (p[i] * s[i] + p[j] * s[j]) / (p[i] + p[j]);
            st += (p[i] + p[j]) * (fi - fj).powi(2);
        }
    }
    vec![
        ("Busyness", if bden > 0.0 { ps / bden } else { 0.0 }),
        ("Coarseness", coarseness),
        ("Complexity", if nvp > 0.0 { cx / nvp } else { 0.0 }),
        (
            "Contrast",
            if ngp > 1.0 {
                con / (ngp * (ngp - 1.0)) * ssum / nvp
            } else {
                0.0
            },
        ),
        ("Strength", if ssum > 0.0 { st / ssum } else { 0.0 }),
    ]
}
