//! Naive reference filters, written straight from the definitions and
//! sharing no code with the library's distance or ordering routines.
#![allow(dead_code)]

use dirfilter_core::{ColorVector, RasterImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Angle between two vectors; a zero vector points along the gray axis.
pub fn angle(a: [f64; 3], b: [f64; 3]) -> f64 {
    let gray = [1.0, 1.0, 1.0];
    let a = if norm(a) == 0.0 { gray } else { a };
    let b = if norm(b) == 0.0 { gray } else { b };
    let cos = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) / (norm(a) * norm(b));
    cos.clamp(0.0, 1.0).acos()
}

pub fn euclid(a: [f64; 3], b: [f64; 3]) -> f64 {
    norm([a[0] - b[0], a[1] - b[1], a[2] - b[2]])
}

fn first_min(values: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..values.len() {
        if values[i] < values[best] {
            best = i;
        }
    }
    best
}

fn weighted_sum(
    x: &[[f64; 3]],
    i: usize,
    center_weight: f64,
    d: fn([f64; 3], [f64; 3]) -> f64,
) -> f64 {
    let c = x.len() / 2;
    let mut total = 0.0;
    for j in 0..x.len() {
        let w = if j == c { center_weight } else { 1.0 };
        total += w * d(x[i], x[j]);
    }
    total
}

pub fn vmf(x: &[[f64; 3]]) -> usize {
    let v: Vec<f64> = (0..x.len())
        .map(|i| weighted_sum(x, i, 1.0, euclid))
        .collect();
    first_min(&v)
}

pub fn bvdf(x: &[[f64; 3]]) -> usize {
    let v: Vec<f64> = (0..x.len())
        .map(|i| weighted_sum(x, i, 1.0, angle))
        .collect();
    first_min(&v)
}

/// Center-weighted DDF with center weight `w`; `w = 1` is the plain DDF.
pub fn cwddf_weight(x: &[[f64; 3]], w: f64) -> usize {
    let v: Vec<f64> = (0..x.len())
        .map(|i| weighted_sum(x, i, w, angle) * weighted_sum(x, i, w, euclid))
        .collect();
    first_min(&v)
}

pub fn ddf(x: &[[f64; 3]]) -> usize {
    cwddf_weight(x, 1.0)
}

pub fn cwddf(x: &[[f64; 3]], k: usize) -> usize {
    cwddf_weight(x, (x.len() + 2 - 2 * k) as f64)
}

pub fn acwddf(x: &[[f64; 3]], lambda: usize, threshold: f64) -> usize {
    let c = x.len() / 2;
    let mut s = 0.0;
    for k in lambda..=lambda + 2 {
        let y = x[cwddf(x, k)];
        s += angle(y, x[c]) * euclid(y, x[c]);
    }
    if s > threshold {
        ddf(x)
    } else {
        c
    }
}

/// Applies a window rule to every pixel of `img` with a 3x3 window and
/// edge replication.
pub fn filter(img: &RasterImage, rule: impl Fn(&[[f64; 3]]) -> usize) -> Vec<ColorVector> {
    let (rows, cols) = img.dimensions();
    let px = img.pixels();
    let mut out = Vec::with_capacity(rows * cols);
    for r in 0..rows as isize {
        for c in 0..cols as isize {
            let mut x = Vec::with_capacity(9);
            for dr in -1..=1 {
                for dc in -1..=1 {
                    let rr = (r + dr).clamp(0, rows as isize - 1) as usize;
                    let cc = (c + dc).clamp(0, cols as isize - 1) as usize;
                    x.push(px[rr * cols + cc].0);
                }
            }
            out.push(ColorVector(x[rule(&x)]));
        }
    }
    out
}

/// `rows x cols` image of uniform integer components in `0..=255`.
pub fn random_image(rows: usize, cols: usize, seed: u64) -> RasterImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    RasterImage::from_fn(rows, cols, |_, _| {
        ColorVector(std::array::from_fn(|_| {
            f64::from(rng.random_range(0..=255u8))
        }))
    })
    .unwrap()
}
