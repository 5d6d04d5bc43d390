use dirfilter_core::noise::{
    corrupt_image_with_stats, corrupt_pixel_traced, noise_rng, ImpulseDistribution, NoiseBranch,
};
use dirfilter_core::{corrupt_image, ColorVector, NoiseParams, RasterImage};
use statrs::distribution::{ChiSquared, ContinuousCDF};

// Middle gray never collides with more than one impulse value per channel.
const GRAY: ColorVector = ColorVector::new(128.0, 128.0, 128.0);

fn chi_square_p(observed: &[u64], expected: &[f64]) -> f64 {
    let stat: f64 = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum();
    ChiSquared::new((observed.len() - 1) as f64)
        .unwrap()
        .sf(stat)
}

#[test]
fn corrupted_fraction_and_branches_at_ten_percent() {
    let img = RasterImage::filled(512, 512, GRAY).unwrap();
    let params = NoiseParams::new(0.10, 42);
    let (_, counts) = corrupt_image_with_stats(&img, &params).unwrap();
    let n = counts.total() as f64;
    let corrupted = counts.corrupted() as f64;
    assert!(
        (corrupted / n - 0.10).abs() <= 0.005,
        "fraction {}",
        corrupted / n
    );
    let sigma = (0.25 * 0.75 / corrupted).sqrt();
    for b in [
        NoiseBranch::Red,
        NoiseBranch::Green,
        NoiseBranch::Blue,
        NoiseBranch::All,
    ] {
        let f = counts.get(b) as f64 / corrupted;
        assert!((f - 0.25).abs() <= 3.0 * sigma, "{b:?}: {f}");
    }
}

#[test]
fn branch_counts_pass_chi_square() {
    let img = RasterImage::filled(1000, 1000, GRAY).unwrap();
    let params = NoiseParams::new(0.10, 7);
    let (_, counts) = corrupt_image_with_stats(&img, &params).unwrap();
    let expected: Vec<f64> = params
        .branch_probabilities()
        .iter()
        .map(|p| p * 1e6)
        .collect();
    let p = chi_square_p(&counts.0, &expected);
    assert!(p > 0.001, "p = {p}");
}

#[test]
fn uniform_impulses_cover_all_levels_evenly() {
    let params = NoiseParams::new(1.0, 3);
    let mut rng = noise_rng(3);
    let mut hist = [0u64; 256];
    for _ in 0..200_000 {
        let (x, branch) = corrupt_pixel_traced(GRAY, &params, &mut rng);
        if branch == NoiseBranch::Red {
            hist[x.red() as usize] += 1;
        }
    }
    let total: u64 = hist.iter().sum();
    let expected = vec![total as f64 / 256.0; 256];
    let p = chi_square_p(&hist, &expected);
    assert!(p > 0.001, "p = {p}");
}

#[test]
fn only_the_chosen_channels_change() {
    let o = ColorVector::new(1.5, 2.5, 3.5);
    let params = NoiseParams::new(0.5, 9);
    let mut rng = noise_rng(9);
    for _ in 0..10_000 {
        let (x, branch) = corrupt_pixel_traced(o, &params, &mut rng);
        let changed = [
            x.red() != o.red(),
            x.green() != o.green(),
            x.blue() != o.blue(),
        ];
        match branch {
            NoiseBranch::Clean => assert_eq!(x, o),
            NoiseBranch::Red => assert_eq!(changed, [true, false, false]),
            NoiseBranch::Green => assert_eq!(changed, [false, true, false]),
            NoiseBranch::Blue => assert_eq!(changed, [false, false, true]),
            NoiseBranch::All => assert_eq!(changed, [true; 3]),
        }
        for c in x.0 {
            assert!(c == c.round() || o.0.contains(&c));
        }
    }
}

#[test]
fn salt_and_pepper_uses_extremes() {
    let img = RasterImage::filled(64, 64, GRAY).unwrap();
    let mut params = NoiseParams::new(1.0, 11);
    params.impulse = ImpulseDistribution::SaltPepper;
    let out = corrupt_image(&img, &params).unwrap();
    for px in out.pixels() {
        assert!(px.0.iter().all(|&c| c == 0.0 || c == 255.0 || c == 128.0));
        assert_ne!(*px, GRAY);
    }
}

#[test]
fn seeds_reproduce_and_differ() {
    let img = RasterImage::filled(32, 32, GRAY).unwrap();
    let a = corrupt_image(&img, &NoiseParams::new(0.3, 5)).unwrap();
    let b = corrupt_image(&img, &NoiseParams::new(0.3, 5)).unwrap();
    let c = corrupt_image(&img, &NoiseParams::new(0.3, 6)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn extreme_rates() {
    let img = RasterImage::filled(16, 16, GRAY).unwrap();
    let (out, counts) = corrupt_image_with_stats(&img, &NoiseParams::new(0.0, 1)).unwrap();
    assert_eq!(out, img);
    assert_eq!(counts.corrupted(), 0);
    let (_, counts) = corrupt_image_with_stats(&img, &NoiseParams::new(1.0, 1)).unwrap();
    assert_eq!(counts.corrupted(), 256);
    assert!(corrupt_image(&img, &NoiseParams::new(1.5, 1)).is_err());
    let mut bad = NoiseParams::new(0.1, 1);
    bad.channel = [0.5, 0.5, 0.5];
    assert!(corrupt_image(&img, &bad).is_err());
}
