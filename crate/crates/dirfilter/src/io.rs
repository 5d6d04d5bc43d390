//! Binary PPM (P6) and 8-bit RGB PNG reading and writing.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use dirfilter_core::RasterImage;
use thiserror::Error;

const PNG_SIGNATURE: &[u8] = &[0x89, b'P', b'N', b'G', b'\r', b'\n', 0x1a, b'\n'];

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed PPM at byte {offset}: {reason}")]
    Ppm { offset: usize, reason: String },
    #[error("PNG: {0}")]
    Png(String),
    #[error("unsupported image: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Core(#[from] dirfilter_core::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageFormat {
    Ppm,
    Png,
}

impl ImageFormat {
    /// Format implied by the file extension (`.ppm`, `.pnm` or `.png`).
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "ppm" | "pnm" => Some(ImageFormat::Ppm),
            "png" => Some(ImageFormat::Png),
            _ => None,
        }
    }
}

/// Reads a P6 PPM or PNG file, detected from its leading bytes.
pub fn read_image(path: impl AsRef<Path>) -> Result<RasterImage, ImageError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| ImageError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode(&bytes)
}

pub fn decode(bytes: &[u8]) -> Result<RasterImage, ImageError> {
    if bytes.starts_with(PNG_SIGNATURE) {
        decode_png(bytes)
    } else if bytes.starts_with(b"P6") {
        decode_ppm(bytes)
    } else {
        Err(ImageError::Unsupported(
            "expected a binary PPM (P6) or PNG signature".into(),
        ))
    }
}

/// Writes `img` as 8-bit RGB; components are rounded half away from zero
/// and clamped to `0..=255`.
pub fn write_image(
    img: &RasterImage,
    path: impl AsRef<Path>,
    format: ImageFormat,
) -> Result<(), ImageError> {
    let path = path.as_ref();
    let bytes = match format {
        ImageFormat::Ppm => encode_ppm(img),
        ImageFormat::Png => encode_png(img)?,
    };
    fs::write(path, bytes).map_err(|source| ImageError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// [`write_image`] with the format taken from the extension.
pub fn save(img: &RasterImage, path: impl AsRef<Path>) -> Result<(), ImageError> {
    let path = path.as_ref();
    let format = ImageFormat::from_path(path).ok_or_else(|| {
        ImageError::Unsupported(format!(
            "{}: extension must be .ppm or .png",
            path.display()
        ))
    })?;
    write_image(img, path, format)
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn error(&self, reason: impl Into<String>) -> ImageError {
        ImageError::Ppm {
            offset: self.pos,
            reason: reason.into(),
        }
    }

    /// Skips whitespace and `#` comments.
    fn skip_space(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, ImageError> {
        self.skip_space();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ImageError::Ppm {
                offset: start,
                reason: format!("{what} out of range"),
            })
    }
}

pub fn decode_ppm(bytes: &[u8]) -> Result<RasterImage, ImageError> {
    let mut h = Header { bytes, pos: 0 };
    if !bytes.starts_with(b"P6") {
        return Err(h.error("missing P6 magic number"));
    }
    h.pos = 2;
    let cols = h.number("width")?;
    let rows = h.number("height")?;
    let maxval = h.number("maxval")?;
    if maxval != 255 {
        return Err(ImageError::Unsupported(format!(
            "PPM maxval {maxval}; only 8-bit (255) is supported"
        )));
    }
    if !bytes.get(h.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(h.error("expected a single whitespace byte after maxval"));
    }
    h.pos += 1;
    if rows == 0 || cols == 0 {
        return Err(h.error("image has zero width or height"));
    }
    let need = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(3))
        .ok_or_else(|| h.error("dimensions overflow"))?;
    let payload = &bytes[h.pos..];
    if payload.len() < need {
        return Err(ImageError::Ppm {
            offset: bytes.len(),
            reason: format!(
                "truncated payload: expected {need} bytes, found {}",
                payload.len()
            ),
        });
    }
    Ok(RasterImage::from_rgb8(rows, cols, &payload[..need])?)
}

pub fn encode_ppm(img: &RasterImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.cols(), img.rows()).into_bytes();
    out.extend_from_slice(&img.to_rgb8());
    out
}

fn png_error(e: impl std::fmt::Display) -> ImageError {
    ImageError::Png(e.to_string())
}

pub fn decode_png(bytes: &[u8]) -> Result<RasterImage, ImageError> {
    let mut decoder = png::Decoder::new(bytes);
    // Palette images become RGB; 16-bit and alpha stay as they are and are
    // rejected below.
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder.read_info().map_err(png_error)?;
    let (color, depth) = reader.output_color_type();
    if depth != png::BitDepth::Eight {
        return Err(ImageError::Unsupported(format!(
            "PNG bit depth {depth:?}; only 8-bit channels are supported"
        )));
    }
    match color {
        png::ColorType::Rgb => {}
        png::ColorType::Rgba | png::ColorType::GrayscaleAlpha => {
            return Err(ImageError::Unsupported(
                "PNG has an alpha channel; convert to plain RGB first".into(),
            ))
        }
        other => {
            return Err(ImageError::Unsupported(format!(
                "PNG color type {other:?}; only RGB is supported"
            )))
        }
    }
    let mut buf = vec![0; reader.output_buffer_size()];
    let frame = reader.next_frame(&mut buf).map_err(png_error)?;
    let (cols, rows) = (frame.width as usize, frame.height as usize);
    Ok(RasterImage::from_rgb8(
        rows,
        cols,
        &buf[..frame.buffer_size()],
    )?)
}

pub fn encode_png(img: &RasterImage) -> Result<Vec<u8>, ImageError> {
    let too_big = |_| ImageError::Unsupported("image too large for PNG".into());
    let width = u32::try_from(img.cols()).map_err(too_big)?;
    let height = u32::try_from(img.rows()).map_err(too_big)?;
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(BufWriter::new(&mut out), width, height);
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder.write_header().map_err(png_error)?;
        writer.write_image_data(&img.to_rgb8()).map_err(png_error)?;
        writer.finish().map_err(png_error)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dirfilter_core::ColorVector;

    #[test]
    fn ppm_two_pixels() {
        let mut bytes = b"P6 2 1 255\n".to_vec();
        bytes.extend_from_slice(&[255, 0, 0, 0, 255, 0]);
        let img = decode_ppm(&bytes).unwrap();
        assert_eq!(img.dimensions(), (1, 2));
        assert_eq!(
            img.pixels(),
            &[
                ColorVector::new(255.0, 0.0, 0.0),
                ColorVector::new(0.0, 255.0, 0.0)
            ]
        );
    }

    #[test]
    fn ppm_header_comments() {
        let mut bytes = b"P6\n# made by hand\n1 1\n# max\n255\n".to_vec();
        bytes.extend_from_slice(&[1, 2, 3]);
        assert_eq!(
            decode_ppm(&bytes).unwrap().pixels(),
            &[ColorVector::new(1.0, 2.0, 3.0)]
        );
    }

    #[test]
    fn ppm_errors() {
        let truncated = b"P6 2 2 255\n\x00\x00\x00";
        assert!(matches!(decode_ppm(truncated), Err(ImageError::Ppm { .. })));
        assert!(matches!(
            decode_ppm(b"P6 2 x 255\n"),
            Err(ImageError::Ppm { offset: 5, .. })
        ));
        assert!(matches!(
            decode_ppm(b"P6 1 1 65535\n\0\0\0\0\0\0"),
            Err(ImageError::Unsupported(_))
        ));
        assert!(matches!(
            decode(b"P3 1 1 255\n0 0 0"),
            Err(ImageError::Unsupported(_))
        ));
    }

    #[test]
    fn rounding_on_write() {
        let img = RasterImage::new(1, 1, vec![ColorVector::new(254.6, 0.0, 0.5)]).unwrap();
        let back = decode_ppm(&encode_ppm(&img)).unwrap();
        assert_eq!(back.pixels()[0], ColorVector::new(255.0, 0.0, 1.0));
    }

    #[test]
    fn png_rejects_alpha_and_16_bit() {
        let encode = |color, depth, data: &[u8]| {
            let mut out = Vec::new();
            let mut e = png::Encoder::new(&mut out, 1, 1);
            e.set_color(color);
            e.set_depth(depth);
            e.write_header().unwrap().write_image_data(data).unwrap();
            out
        };
        let rgba = encode(png::ColorType::Rgba, png::BitDepth::Eight, &[1, 2, 3, 4]);
        assert!(matches!(decode_png(&rgba), Err(ImageError::Unsupported(_))));
        let deep = encode(png::ColorType::Rgb, png::BitDepth::Sixteen, &[0; 6]);
        assert!(matches!(decode_png(&deep), Err(ImageError::Unsupported(_))));
        let gray = encode(png::ColorType::Grayscale, png::BitDepth::Eight, &[9]);
        assert!(matches!(decode_png(&gray), Err(ImageError::Unsupported(_))));
    }
}
