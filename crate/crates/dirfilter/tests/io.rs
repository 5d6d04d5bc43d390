use std::path::PathBuf;

use dirfilter::io::{
    decode, encode_png, encode_ppm, read_image, save, write_image, ImageError, ImageFormat,
};
use dirfilter_core::{ColorVector, RasterImage};

fn astronaut() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/astronaut.png")
}

fn pattern(rows: usize, cols: usize) -> RasterImage {
    RasterImage::from_fn(rows, cols, |r, c| {
        ColorVector::new(
            ((r * 37 + c) % 256) as f64,
            ((c * 11) % 256) as f64,
            ((r ^ c) % 256) as f64,
        )
    })
    .unwrap()
}

#[test]
fn astronaut_loads_as_512_square() {
    let img = read_image(astronaut()).unwrap();
    assert_eq!(img.dimensions(), (512, 512));
    assert!(img.pixels().iter().all(|v| v
        .0
        .iter()
        .all(|&c| c == c.round() && (0.0..=255.0).contains(&c))));
}

#[test]
fn png_and_ppm_carry_the_same_pixels() {
    let img = read_image(astronaut()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let ppm = dir.path().join("a.ppm");
    let png = dir.path().join("a.png");
    save(&img, &ppm).unwrap();
    save(&img, &png).unwrap();
    assert_eq!(read_image(&ppm).unwrap(), img);
    assert_eq!(read_image(&png).unwrap(), img);
}

#[test]
fn in_memory_round_trips() {
    for (rows, cols) in [(1, 1), (3, 5), (17, 2)] {
        let img = pattern(rows, cols);
        assert_eq!(decode(&encode_ppm(&img)).unwrap(), img);
        assert_eq!(decode(&encode_png(&img).unwrap()).unwrap(), img);
    }
}

#[test]
fn ppm_header_layout() {
    let bytes = encode_ppm(&pattern(2, 3));
    assert!(bytes.starts_with(b"P6\n3 2\n255\n"));
    assert_eq!(bytes.len(), b"P6\n3 2\n255\n".len() + 18);
}

#[test]
fn fractional_values_are_quantized() {
    let img = RasterImage::filled(1, 2, ColorVector::new(0.5, 254.6, -3.0)).unwrap();
    let back = decode(&encode_ppm(&img)).unwrap();
    assert_eq!(back.pixels()[0], ColorVector::new(1.0, 255.0, 0.0));
}

#[test]
fn unknown_inputs_are_rejected() {
    assert!(matches!(decode(b"GIF89a"), Err(ImageError::Unsupported(_))));
    assert!(matches!(
        decode(b"P6\n2 2\n255\n\x00"),
        Err(ImageError::Ppm { .. })
    ));
    let dir = tempfile::tempdir().unwrap();
    assert!(save(&pattern(2, 2), dir.path().join("x.bmp")).is_err());
    assert!(matches!(
        read_image(dir.path().join("missing.ppm")),
        Err(ImageError::Io { .. })
    ));
    assert_eq!(
        ImageFormat::from_path("A.PNG".as_ref()),
        Some(ImageFormat::Png)
    );
    assert_eq!(
        ImageFormat::from_path("a.pnm".as_ref()),
        Some(ImageFormat::Ppm)
    );
    let path = dir.path().join("explicit");
    write_image(&pattern(2, 2), &path, ImageFormat::Png).unwrap();
    assert_eq!(read_image(&path).unwrap(), pattern(2, 2));
}
