//! Color vectors, raster images and window extraction.
//!
//! Pixel coordinates in the public API are 1-based: row `r` runs over
//! `1..=rows` and column `c` over `1..=cols`.

use alloc::vec::Vec;
use core::ops::{Index, Range};

use crate::error::{Error, Result};
use crate::math;

/// One RGB pixel. Components are real-valued with nominal range `[0, 255]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ColorVector(pub [f64; 3]);

impl ColorVector {
    pub const BLACK: ColorVector = ColorVector([0.0; 3]);

    pub const fn new(red: f64, green: f64, blue: f64) -> Self {
        ColorVector([red, green, blue])
    }

    /// Builds a vector, rejecting negative or non-finite components.
    pub fn try_new(red: f64, green: f64, blue: f64) -> Result<Self> {
        let v = ColorVector([red, green, blue]);
        if v.0.iter().all(|x| x.is_finite() && *x >= 0.0) {
            Ok(v)
        } else {
            Err(Error::param(
                "color",
                "components must be finite and nonnegative",
            ))
        }
    }

    pub fn from_bytes(rgb: [u8; 3]) -> Self {
        ColorVector([rgb[0] as f64, rgb[1] as f64, rgb[2] as f64])
    }

    #[inline]
    pub fn red(&self) -> f64 {
        self.0[0]
    }

    #[inline]
    pub fn green(&self) -> f64 {
        self.0[1]
    }

    #[inline]
    pub fn blue(&self) -> f64 {
        self.0[2]
    }

    #[inline]
    pub fn dot(&self, other: &ColorVector) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        math::sqrt(self.dot(self))
    }

    #[inline]
    pub fn component_sum(&self) -> f64 {
        self.0[0] + self.0[1] + self.0[2]
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0.0; 3]
    }

    pub fn scaled(&self, factor: f64) -> ColorVector {
        ColorVector([self.0[0] * factor, self.0[1] * factor, self.0[2] * factor])
    }
}

impl From<[f64; 3]> for ColorVector {
    fn from(v: [f64; 3]) -> Self {
        ColorVector(v)
    }
}

impl From<[u8; 3]> for ColorVector {
    fn from(v: [u8; 3]) -> Self {
        ColorVector::from_bytes(v)
    }
}

/// An `rows x cols` grid of color vectors stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RasterImage {
    rows: usize,
    cols: usize,
    pixels: Vec<ColorVector>,
}

impl RasterImage {
    pub fn new(rows: usize, cols: usize, pixels: Vec<ColorVector>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyImage);
        }
        let expected = rows
            .checked_mul(cols)
            .ok_or_else(|| Error::param("dimensions", "rows * cols overflows"))?;
        if pixels.len() != expected {
            return Err(Error::PixelCount {
                expected,
                found: pixels.len(),
            });
        }
        Ok(RasterImage { rows, cols, pixels })
    }

    /// Image where every pixel equals `value`.
    pub fn filled(rows: usize, cols: usize, value: ColorVector) -> Result<Self> {
        let count = rows
            .checked_mul(cols)
            .ok_or_else(|| Error::param("dimensions", "rows * cols overflows"))?;
        RasterImage::new(rows, cols, alloc::vec![value; count])
    }

    /// Builds an image from a function of 0-based `(row, col)`.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> ColorVector,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(rows.saturating_mul(cols));
        for r in 0..rows {
            for c in 0..cols {
                pixels.push(f(r, c));
            }
        }
        RasterImage::new(rows, cols, pixels)
    }

    /// Interleaved 8-bit RGB samples, row-major.
    pub fn from_rgb8(rows: usize, cols: usize, data: &[u8]) -> Result<Self> {
        let expected = rows.saturating_mul(cols).saturating_mul(3);
        if data.len() != expected {
            return Err(Error::PixelCount {
                expected: rows.saturating_mul(cols),
                found: data.len() / 3,
            });
        }
        let pixels = data
            .chunks_exact(3)
            .map(|px| ColorVector::from_bytes([px[0], px[1], px[2]]))
            .collect();
        RasterImage::new(rows, cols, pixels)
    }

    /// Quantizes to interleaved 8-bit RGB: round half away from zero, then clamp.
    pub fn to_rgb8(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.pixels.len() * 3);
        for px in &self.pixels {
            out.extend(px.0.iter().map(|&x| quantize(x)));
        }
        out
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn pixels(&self) -> &[ColorVector] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [ColorVector] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<ColorVector> {
        self.pixels
    }

    /// Pixel at 1-based `(row, col)`.
    pub fn pixel(&self, row: usize, col: usize) -> Result<ColorVector> {
        self.check_coords(row, col)?;
        Ok(self.pixels[(row - 1) * self.cols + col - 1])
    }

    /// Row-major slice of one 0-based row.
    pub fn row(&self, row: usize) -> &[ColorVector] {
        &self.pixels[row * self.cols..(row + 1) * self.cols]
    }

    pub(crate) fn row_range(&self, rows: Range<usize>) -> &[ColorVector] {
        &self.pixels[rows.start * self.cols..rows.end * self.cols]
    }

    fn check_coords(&self, row: usize, col: usize) -> Result<()> {
        if row == 0 || col == 0 || row > self.rows || col > self.cols {
            return Err(Error::OutOfRange {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    pub(crate) fn same_dimensions(&self, other: &RasterImage) -> Result<()> {
        if self.dimensions() != other.dimensions() {
            return Err(Error::DimensionMismatch {
                expected: self.dimensions(),
                found: other.dimensions(),
            });
        }
        Ok(())
    }
}

/// 0-based `(row, col)` indexing.
impl Index<(usize, usize)> for RasterImage {
    type Output = ColorVector;

    fn index(&self, (row, col): (usize, usize)) -> &ColorVector {
        assert!(
            row < self.rows && col < self.cols,
            "pixel index out of bounds"
        );
        &self.pixels[row * self.cols + col]
    }
}

fn quantize(x: f64) -> u8 {
    // round() is half-away-from-zero.
    let r = libm::round(x);
    if r >= 255.0 {
        255
    } else if r > 0.0 {
        r as u8
    } else {
        0
    }
}

/// How coordinates outside the image are mapped back inside it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BorderPolicy {
    /// Clamp to the nearest edge pixel.
    #[default]
    Replicate,
    /// Mirror about the edge pixel without repeating it (`-1 -> 1`).
    Reflect,
}

impl BorderPolicy {
    /// Maps a possibly out-of-range 0-based index onto `0..len`.
    pub(crate) fn resolve(self, index: isize, len: usize) -> usize {
        debug_assert!(len > 0);
        let last = len as isize - 1;
        match self {
            BorderPolicy::Replicate => index.clamp(0, last) as usize,
            BorderPolicy::Reflect => {
                if last == 0 {
                    return 0;
                }
                let period = 2 * last;
                let mut i = index.rem_euclid(period);
                if i > last {
                    i = period - i;
                }
                i as usize
            }
        }
    }
}

impl core::str::FromStr for BorderPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "replicate" | "clamp" => Ok(BorderPolicy::Replicate),
            "reflect" | "mirror" => Ok(BorderPolicy::Reflect),
            _ => Err(Error::param(
                "border",
                alloc::format!("unknown policy `{s}`"),
            )),
        }
    }
}

/// The `n = side * side` vectors of a window in row-major scan order.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowView {
    side: usize,
    vectors: Vec<ColorVector>,
}

impl WindowView {
    /// Wraps `vectors` as a window; the length must be an odd square `>= 9`.
    pub fn new(vectors: Vec<ColorVector>) -> Result<Self> {
        let n = vectors.len();
        let side = (1..=n).find(|s| s * s >= n).unwrap_or(0);
        if side * side != n {
            return Err(Error::param(
                "window",
                alloc::format!("{n} is not a perfect square"),
            ));
        }
        check_side(side)?;
        Ok(WindowView { side, vectors })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// 0-based index of the center vector, `(n + 1) / 2 - 1`.
    pub fn center_index(&self) -> usize {
        self.vectors.len() / 2
    }

    pub fn center(&self) -> ColorVector {
        self.vectors[self.center_index()]
    }

    pub fn vectors(&self) -> &[ColorVector] {
        &self.vectors
    }

    /// Whether `v` occurs in the window.
    pub fn contains(&self, v: &ColorVector) -> bool {
        self.vectors.iter().any(|x| x == v)
    }
}

pub(crate) fn check_side(side: usize) -> Result<()> {
    if side < 3 || side % 2 == 0 {
        return Err(Error::WindowSize(side));
    }
    Ok(())
}

/// Extracts the `side x side` window centered on 1-based `(row, col)`.
pub fn extract_window(
    img: &RasterImage,
    row: usize,
    col: usize,
    side: usize,
    policy: BorderPolicy,
) -> Result<WindowView> {
    check_side(side)?;
    img.check_coords(row, col)?;
    let half = (side / 2) as isize;
    let (r0, c0) = (row as isize - 1, col as isize - 1);
    let mut vectors = Vec::with_capacity(side * side);
    for dr in -half..=half {
        let rr = policy.resolve(r0 + dr, img.rows);
        for dc in -half..=half {
            let cc = policy.resolve(c0 + dc, img.cols);
            vectors.push(img.pixels[rr * img.cols + cc]);
        }
    }
    Ok(WindowView { side, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn numbered(rows: usize, cols: usize) -> RasterImage {
        RasterImage::from_fn(rows, cols, |r, c| {
            ColorVector::new((r * cols + c) as f64, r as f64, c as f64)
        })
        .unwrap()
    }

    #[test]
    fn single_pixel_replicates() {
        let v = ColorVector::new(10.0, 20.0, 30.0);
        let img = RasterImage::filled(1, 1, v).unwrap();
        let w = extract_window(&img, 1, 1, 3, BorderPolicy::Replicate).unwrap();
        assert_eq!(w.vectors(), &[v; 9]);
        let w = extract_window(&img, 1, 1, 5, BorderPolicy::Reflect).unwrap();
        assert_eq!(w.len(), 25);
        assert!(w.vectors().iter().all(|x| *x == v));
    }

    #[test]
    fn interior_window_is_row_major() {
        let img = numbered(3, 3);
        let w = extract_window(&img, 2, 2, 3, BorderPolicy::Replicate).unwrap();
        assert_eq!(w.vectors(), img.pixels());
        assert_eq!(w.center_index(), 4);
        assert_eq!(w.center(), img.pixel(2, 2).unwrap());
    }

    #[test]
    fn corner_window_clamps_coordinates() {
        let img = numbered(3, 3);
        let w = extract_window(&img, 1, 1, 3, BorderPolicy::Replicate).unwrap();
        // rows {0,1,2} -> {1,1,2}, same for columns (1-based, clamped to [1,3])
        let coords = [
            (1, 1),
            (1, 1),
            (1, 2),
            (1, 1),
            (1, 1),
            (1, 2),
            (2, 1),
            (2, 1),
            (2, 2),
        ];
        let expected: Vec<_> = coords
            .iter()
            .map(|&(r, c)| img.pixel(r, c).unwrap())
            .collect();
        assert_eq!(w.vectors(), &expected[..]);
    }

    #[test]
    fn corner_window_reflects() {
        let img = numbered(3, 3);
        let w = extract_window(&img, 1, 1, 3, BorderPolicy::Reflect).unwrap();
        let coords = [
            (2, 2),
            (2, 1),
            (2, 2),
            (1, 2),
            (1, 1),
            (1, 2),
            (2, 2),
            (2, 1),
            (2, 2),
        ];
        let expected: Vec<_> = coords
            .iter()
            .map(|&(r, c)| img.pixel(r, c).unwrap())
            .collect();
        assert_eq!(w.vectors(), &expected[..]);
    }

    #[test]
    fn reflect_handles_wide_windows() {
        for i in -20isize..20 {
            let j = BorderPolicy::Reflect.resolve(i, 3);
            assert!(j < 3);
        }
        assert_eq!(BorderPolicy::Reflect.resolve(-3, 3), 1);
        assert_eq!(BorderPolicy::Reflect.resolve(4, 3), 0);
    }

    #[test]
    fn every_coordinate_yields_full_window() {
        let img = numbered(4, 5);
        for policy in [BorderPolicy::Replicate, BorderPolicy::Reflect] {
            for r in 1..=4 {
                for c in 1..=5 {
                    let w = extract_window(&img, r, c, 3, policy).unwrap();
                    assert_eq!(w.len(), 9);
                    assert_eq!(w.center(), img.pixel(r, c).unwrap());
                }
            }
        }
    }

    #[test]
    fn interior_windows_ignore_policy() {
        let img = numbered(7, 7);
        for r in 3..=5 {
            for c in 3..=5 {
                let a = extract_window(&img, r, c, 5, BorderPolicy::Replicate).unwrap();
                let b = extract_window(&img, r, c, 5, BorderPolicy::Reflect).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let img = numbered(3, 3);
        assert_eq!(
            extract_window(&img, 1, 1, 4, BorderPolicy::Replicate),
            Err(Error::WindowSize(4))
        );
        assert_eq!(
            extract_window(&img, 1, 1, 1, BorderPolicy::Replicate),
            Err(Error::WindowSize(1))
        );
        assert!(matches!(
            extract_window(&img, 0, 1, 3, BorderPolicy::Replicate),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            extract_window(&img, 3, 4, 3, BorderPolicy::Replicate),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn pixel_count_checked() {
        assert_eq!(
            RasterImage::new(2, 2, vec![ColorVector::BLACK; 3]),
            Err(Error::PixelCount {
                expected: 4,
                found: 3
            })
        );
        assert_eq!(RasterImage::new(0, 2, vec![]), Err(Error::EmptyImage));
    }

    #[test]
    fn quantization_rounds_half_away_and_clamps() {
        let img = RasterImage::new(
            1,
            2,
            vec![
                ColorVector::new(254.6, 0.0, 0.5),
                ColorVector::new(300.0, 2.4999, 254.5),
            ],
        )
        .unwrap();
        assert_eq!(img.to_rgb8(), vec![255, 0, 1, 255, 2, 255]);
    }

    #[test]
    fn window_view_validates_length() {
        assert!(WindowView::new(vec![ColorVector::BLACK; 9]).is_ok());
        assert!(WindowView::new(vec![ColorVector::BLACK; 8]).is_err());
        assert!(WindowView::new(vec![ColorVector::BLACK; 16]).is_err());
        assert_eq!(
            WindowView::new(vec![ColorVector::BLACK; 25])
                .unwrap()
                .center_index(),
            12
        );
    }
}
