mod common;

use dirfilter_core::filters::{self, AcwddfParams, FilterEngine, Smoother};
use dirfilter_core::{
    apply_filter, extract_window, BorderPolicy, Calibration, ColorVector, DirectionalStrategy,
    FilterFamily, FilterSpec, MinkowskiOrder, RasterImage, WindowView,
};

fn strategies() -> Vec<DirectionalStrategy> {
    let mut out = vec![DirectionalStrategy::Exact];
    for q in 2..=4 {
        out.push(DirectionalStrategy::minimax(q).unwrap());
    }
    for p in [1.0, 2.0, 3.0] {
        out.push(DirectionalStrategy::Chromaticity {
            calibration: Calibration::REFERENCE,
            order: MinkowskiOrder::new(p).unwrap(),
        });
    }
    out
}

fn families(side: usize) -> Vec<FilterFamily> {
    let d = (side * side).div_ceil(2);
    let mut out = vec![
        FilterFamily::Identity,
        FilterFamily::Vmf,
        FilterFamily::Bvdf,
        FilterFamily::Ddf,
    ];
    for k in [1, 2, d] {
        out.push(FilterFamily::Cwddf {
            k,
            smoother: Smoother::Cwddf,
        });
        out.push(FilterFamily::Cwddf {
            k,
            smoother: Smoother::Cwvmf,
        });
    }
    for smoother in [Smoother::Cwddf, Smoother::Cwvmf] {
        for threshold in [0.0, 10.8, 40.0] {
            out.push(FilterFamily::Acwddf(AcwddfParams {
                lambda: 2,
                threshold,
                smoother,
            }));
        }
    }
    out
}

/// One window at a time through the public per-window functions.
fn per_window(w: &WindowView, spec: &FilterSpec) -> ColorVector {
    let (p, s) = (spec.order, &spec.strategy);
    match spec.family {
        FilterFamily::Identity => w.center(),
        FilterFamily::Vmf => filters::vmf(w, p),
        FilterFamily::Bvdf => filters::bvdf(w, s),
        FilterFamily::Ddf => filters::ddf(w, p, s),
        FilterFamily::Cwddf {
            k,
            smoother: Smoother::Cwddf,
        } => filters::cwddf(w, k, p, s).unwrap(),
        FilterFamily::Cwddf {
            k,
            smoother: Smoother::Cwvmf,
        } => filters::cwvmf(w, k, p).unwrap(),
        FilterFamily::Acwddf(params) => filters::acwddf(w, &params, p, s).unwrap(),
    }
}

fn reference(img: &RasterImage, spec: &FilterSpec, policy: BorderPolicy) -> Vec<ColorVector> {
    let (rows, cols) = img.dimensions();
    let mut out = Vec::with_capacity(rows * cols);
    for r in 1..=rows {
        for c in 1..=cols {
            let w = extract_window(img, r, c, spec.side, policy).unwrap();
            out.push(per_window(&w, spec));
        }
    }
    out
}

fn check(img: &RasterImage, spec: &FilterSpec, policy: BorderPolicy) {
    let got = apply_filter(img, spec, policy).unwrap();
    let want = reference(img, spec, policy);
    let bad = got
        .pixels()
        .iter()
        .zip(&want)
        .filter(|(a, b)| a != b)
        .count();
    assert_eq!(
        bad,
        0,
        "{} {} side {} {:?} on {:?}",
        spec.family.name(),
        spec.strategy.name(),
        spec.side,
        policy,
        img.dimensions()
    );
}

#[test]
fn engine_matches_per_window_3x3() {
    let img = common::random_image(9, 11, 1);
    for policy in [BorderPolicy::Replicate, BorderPolicy::Reflect] {
        for strategy in strategies() {
            for family in families(3) {
                check(&img, &FilterSpec::new(family, strategy), policy);
            }
        }
    }
}

#[test]
fn engine_matches_per_window_5x5() {
    let img = common::random_image(7, 8, 2);
    for policy in [BorderPolicy::Replicate, BorderPolicy::Reflect] {
        for strategy in [DirectionalStrategy::Exact, DirectionalStrategy::rgb()] {
            for family in families(5) {
                let mut spec = FilterSpec::new(family, strategy);
                spec.side = 5;
                check(&img, &spec, policy);
            }
        }
    }
}

#[test]
fn l1_and_l3_minkowski_orders() {
    let img = common::random_image(6, 6, 3);
    for p in [1.0, 3.0] {
        for family in [
            FilterFamily::Vmf,
            FilterFamily::Ddf,
            FilterFamily::Acwddf(AcwddfParams::default()),
        ] {
            let mut spec = FilterSpec::new(family, DirectionalStrategy::Exact);
            spec.order = MinkowskiOrder::new(p).unwrap();
            check(&img, &spec, BorderPolicy::Replicate);
        }
    }
}

#[test]
fn degenerate_shapes() {
    for (rows, cols) in [(1, 1), (1, 7), (7, 1), (2, 2), (3, 260)] {
        let img = common::random_image(rows, cols, (rows * 1000 + cols) as u64);
        for policy in [BorderPolicy::Replicate, BorderPolicy::Reflect] {
            for strategy in [DirectionalStrategy::Exact, DirectionalStrategy::rgb()] {
                for family in [
                    FilterFamily::Vmf,
                    FilterFamily::Bvdf,
                    FilterFamily::Acwddf(AcwddfParams::default()),
                ] {
                    check(&img, &FilterSpec::new(family, strategy), policy);
                }
            }
        }
    }
}

#[test]
fn black_and_gray_pixels() {
    // zero vectors and exact duplicates stress the gray-axis and tie rules
    let palette = [
        ColorVector::BLACK,
        ColorVector::new(10.0, 10.0, 10.0),
        ColorVector::new(255.0, 0.0, 0.0),
        ColorVector::new(20.0, 20.0, 20.0),
    ];
    let img = RasterImage::from_fn(8, 8, |r, c| palette[(r * 3 + c * 5) % 4]).unwrap();
    for strategy in strategies() {
        for family in families(3) {
            check(
                &img,
                &FilterSpec::new(family, strategy),
                BorderPolicy::Replicate,
            );
        }
    }
}

#[test]
fn chunked_rows_equal_full_run() {
    let img = common::random_image(13, 150, 4);
    let spec = FilterSpec::new(
        FilterFamily::Acwddf(AcwddfParams::default()),
        DirectionalStrategy::rgb(),
    );
    let engine = FilterEngine::new(&img, &spec, BorderPolicy::Reflect).unwrap();
    let full = engine.run().unwrap();
    let cols = img.cols();
    let mut out = vec![ColorVector::BLACK; img.rows() * cols];
    for (start, end) in [(0, 1), (1, 5), (5, 6), (6, 13)] {
        engine
            .filter_rows(start..end, &mut out[start * cols..end * cols])
            .unwrap();
    }
    assert_eq!(out, full.pixels());
}

#[test]
fn invalid_specs_are_rejected() {
    let img = common::random_image(4, 4, 5);
    let mut spec = FilterSpec::new(FilterFamily::Vmf, DirectionalStrategy::Exact);
    spec.side = 4;
    assert!(apply_filter(&img, &spec, BorderPolicy::Replicate).is_err());
    let spec = FilterSpec::new(
        FilterFamily::Acwddf(AcwddfParams::new(4, 10.8)),
        DirectionalStrategy::Exact,
    );
    assert!(apply_filter(&img, &spec, BorderPolicy::Replicate).is_err());
}
