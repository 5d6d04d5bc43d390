//! Image files, benchmark harness and parallel driver for `dirfilter-core`.

pub mod bench;
pub mod coefficients;
pub mod io;

pub use dirfilter_core;

use dirfilter_core::filters::FilterEngine;
use dirfilter_core::{BorderPolicy, ColorVector, FilterSpec, RasterImage};
use rayon::prelude::*;

/// Same output as [`dirfilter_core::apply_filter`], with bands of rows
/// filtered on the rayon pool.
pub fn apply_filter_parallel(
    img: &RasterImage,
    spec: &FilterSpec,
    policy: BorderPolicy,
) -> dirfilter_core::Result<RasterImage> {
    let engine = FilterEngine::new(img, spec, policy)?;
    let (rows, cols) = img.dimensions();
    let band = rows.div_ceil(4 * rayon::current_num_threads()).max(1);
    let mut out = vec![ColorVector::BLACK; rows * cols];
    out.par_chunks_mut(band * cols)
        .enumerate()
        .try_for_each(|(i, chunk)| {
            let start = i * band;
            engine.filter_rows(start..start + chunk.len() / cols, chunk)
        })?;
    RasterImage::new(rows, cols, out)
}
