//! Image quality criteria against a noise-free reference.
//!
//! * MAE: mean of `|o - y|` over all pixels and channels.
//! * PSNR: `10 log10(255^2 / MSE)`, `+inf` for identical images.
//! * NCD: `sum ||Luv(y) - Luv(o)|| / sum ||Luv(o)||` in CIE L*u*v*, reported
//!   multiplied by 1000. Inputs are treated as sRGB (piecewise 2.4 gamma),
//!   converted to XYZ with the D65 sRGB matrix, then to L*u*v* relative to
//!   the D65 white point.

use crate::error::Result;
use crate::image::{ColorVector, RasterImage};
use crate::math;

/// sRGB (linear) to XYZ, D65.
const RGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];

/// D65 reference white (Y = 1).
const WHITE: [f64; 3] = [0.95047, 1.0, 1.08883];

const EPSILON: f64 = 216.0 / 24389.0;
const KAPPA: f64 = 24389.0 / 27.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricsReport {
    pub mae: f64,
    pub psnr: f64,
    pub ncd_x1000: f64,
    /// Filled in by the benchmark harness.
    pub time_seconds: f64,
}

pub fn mae(orig: &RasterImage, test: &RasterImage) -> Result<f64> {
    orig.same_dimensions(test)?;
    let mut total = 0.0;
    for (a, b) in orig.pixels().iter().zip(test.pixels()) {
        for k in 0..3 {
            total += math::abs(a.0[k] - b.0[k]);
        }
    }
    Ok(total / (3 * orig.pixels().len()) as f64)
}

pub fn mse(orig: &RasterImage, test: &RasterImage) -> Result<f64> {
    orig.same_dimensions(test)?;
    let mut total = 0.0;
    for (a, b) in orig.pixels().iter().zip(test.pixels()) {
        for k in 0..3 {
            let d = a.0[k] - b.0[k];
            total += d * d;
        }
    }
    Ok(total / (3 * orig.pixels().len()) as f64)
}

pub fn psnr(orig: &RasterImage, test: &RasterImage) -> Result<f64> {
    let e = mse(orig, test)?;
    if e == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * math::log10(255.0 * 255.0 / e))
}

fn linearize(c: f64) -> f64 {
    let v = c / 255.0;
    if v <= 0.04045 {
        v / 12.92
    } else {
        math::pow((v + 0.055) / 1.055, 2.4)
    }
}

fn lightness_fn(t: f64) -> f64 {
    if t > EPSILON {
        116.0 * math::cbrt(t) - 16.0
    } else {
        KAPPA * t
    }
}

fn chroma_uv(xyz: [f64; 3]) -> [f64; 2] {
    let denom = xyz[0] + 15.0 * xyz[1] + 3.0 * xyz[2];
    if denom == 0.0 {
        return [0.0, 0.0];
    }
    [4.0 * xyz[0] / denom, 9.0 * xyz[1] / denom]
}

/// CIE L*u*v* of an 8-bit-scaled sRGB color.
pub fn srgb_to_luv(v: &ColorVector) -> [f64; 3] {
    let lin = v.0.map(linearize);
    let mut xyz = [0.0; 3];
    for (out, row) in xyz.iter_mut().zip(&RGB_TO_XYZ) {
        *out = row[0] * lin[0] + row[1] * lin[1] + row[2] * lin[2];
    }
    let l = lightness_fn(xyz[1] / WHITE[1]);
    let [u, v] = chroma_uv(xyz);
    let [un, vn] = chroma_uv(WHITE);
    [l, 13.0 * l * (u - un), 13.0 * l * (v - vn)]
}

fn norm(v: [f64; 3]) -> f64 {
    math::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
}

/// Normalized color distance (not scaled by 1000). Zero when the reference
/// is entirely black and the images match; `+inf` if only the test differs.
pub fn ncd(orig: &RasterImage, test: &RasterImage) -> Result<f64> {
    orig.same_dimensions(test)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for (a, b) in orig.pixels().iter().zip(test.pixels()) {
        let la = srgb_to_luv(a);
        if a != b {
            let lb = srgb_to_luv(b);
            num += norm([lb[0] - la[0], lb[1] - la[1], lb[2] - la[2]]);
        }
        den += norm(la);
    }
    Ok(if num == 0.0 { 0.0 } else { num / den })
}

/// All three criteria, with `time_seconds` left at zero.
pub fn evaluate(orig: &RasterImage, test: &RasterImage) -> Result<MetricsReport> {
    Ok(MetricsReport {
        mae: mae(orig, test)?,
        psnr: psnr(orig, test)?,
        ncd_x1000: 1000.0 * ncd(orig, test)?,
        time_seconds: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp() -> RasterImage {
        RasterImage::from_fn(4, 5, |r, c| {
            ColorVector::new((r * 40) as f64, (c * 30) as f64, 100.0)
        })
        .unwrap()
    }

    #[test]
    fn identical_images() {
        let img = ramp();
        let m = evaluate(&img, &img).unwrap();
        assert_eq!(m.mae, 0.0);
        assert_eq!(m.psnr, f64::INFINITY);
        assert_eq!(m.ncd_x1000, 0.0);
    }

    #[test]
    fn unit_offset() {
        let img = ramp();
        let shifted = RasterImage::from_fn(4, 5, |r, c| {
            let p = img[(r, c)];
            ColorVector::new(p.red() + 1.0, p.green() + 1.0, p.blue() + 1.0)
        })
        .unwrap();
        assert_eq!(mae(&img, &shifted).unwrap(), 1.0);
        assert!((psnr(&img, &shifted).unwrap() - 48.1308036).abs() < 1e-6);
        assert!(ncd(&img, &shifted).unwrap() > 0.0);
    }

    #[test]
    fn dimension_mismatch() {
        let a = ramp();
        let b = RasterImage::filled(5, 4, ColorVector::BLACK).unwrap();
        assert!(mae(&a, &b).is_err());
        assert!(psnr(&a, &b).is_err());
        assert!(ncd(&a, &b).is_err());
    }

    #[test]
    fn luv_reference_colors() {
        let white = srgb_to_luv(&ColorVector::new(255.0, 255.0, 255.0));
        assert!((white[0] - 100.0).abs() < 1e-3);
        assert!(white[1].abs() < 1e-2 && white[2].abs() < 1e-2);
        assert_eq!(srgb_to_luv(&ColorVector::BLACK), [0.0, 0.0, 0.0]);
        // sRGB red: L* 53.24, u* 175.01, v* 37.76
        let red = srgb_to_luv(&ColorVector::new(255.0, 0.0, 0.0));
        assert!((red[0] - 53.24).abs() < 0.01);
        assert!((red[1] - 175.01).abs() < 0.05);
        assert!((red[2] - 37.76).abs() < 0.05);
    }

    #[test]
    fn psnr_decreases_with_error() {
        let img = ramp();
        let mut prev = f64::INFINITY;
        for delta in 1..6 {
            let t = RasterImage::from_fn(4, 5, |r, c| {
                let p = img[(r, c)];
                ColorVector::new(p.red() + delta as f64, p.green(), p.blue())
            })
            .unwrap();
            let now = psnr(&img, &t).unwrap();
            assert!(now < prev);
            prev = now;
        }
    }
}
