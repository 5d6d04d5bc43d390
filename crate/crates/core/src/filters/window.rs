//! Filters evaluated on a single window.

use alloc::vec;
use alloc::vec::Vec;

use super::kernel::{self, PairKernel, Raw};
use super::select::{argmin, Aggregates};
use super::{AcwddfParams, CenterWeightProfile, DirectionalStrategy, Smoother};
use crate::distance::MinkowskiOrder;
use crate::error::Result;
use crate::image::{ColorVector, WindowView};

/// Symmetric table of pairwise distances with a zero diagonal, and the
/// row sums `sum_j d(x_i, x_j)` accumulated in ascending `j` at the
/// kernel's precision.
struct Pairwise {
    n: usize,
    values: Vec<f64>,
    sums: Vec<f64>,
}

impl Pairwise {
    fn new<K: PairKernel>(kernel: K, w: &WindowView) -> Self {
        let features: Vec<[K::Scalar; 3]> = w.vectors().iter().map(|v| kernel.feature(v)).collect();
        let n = features.len();
        let mut table = vec![K::Scalar::default(); n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = kernel.eval(features[i], features[j]);
                table[i * n + j] = d;
                table[j * n + i] = d;
            }
        }
        let sums = table
            .chunks_exact(n)
            .enumerate()
            .map(|(i, row)| {
                let mut total = K::Scalar::default();
                for (j, &d) in row.iter().enumerate() {
                    if j != i {
                        total += d;
                    }
                }
                total.into()
            })
            .collect();
        let values = table.into_iter().map(Into::into).collect();
        Pairwise { n, values, sums }
    }

    fn minkowski(w: &WindowView, p: MinkowskiOrder) -> Self {
        kernel::with_norm!(p, |norm| Pairwise::new(Raw(norm), w))
    }

    fn angular(w: &WindowView, s: &DirectionalStrategy) -> Self {
        kernel::with_angular!(*s, |k| Pairwise::new(k, w))
    }

    fn to_center(&self, i: usize) -> f64 {
        self.values[i * self.n + self.n / 2]
    }

    fn sums(&self) -> &[f64] {
        &self.sums
    }
}

#[allow(clippy::type_complexity)]
fn aggregates<'a>(
    angle: &'a Pairwise,
    dist: &'a Pairwise,
) -> Aggregates<
    impl Fn(usize) -> f64 + 'a,
    impl Fn(usize) -> f64 + 'a,
    impl Fn(usize) -> f64 + 'a,
    impl Fn(usize) -> f64 + 'a,
> {
    Aggregates {
        angle_sum: move |i| angle.sums[i],
        dist_sum: move |i| dist.sums[i],
        angle_to_center: move |i| angle.to_center(i),
        dist_to_center: move |i| dist.to_center(i),
    }
}

/// Vector median: minimizes the summed Minkowski distance.
pub fn vmf(w: &WindowView, p: MinkowskiOrder) -> ColorVector {
    let dist = Pairwise::minkowski(w, p);
    let sums = dist.sums();
    w.vectors()[argmin(w.len(), |i| sums[i])]
}

/// Basic vector directional filter: minimizes the summed angular distance.
pub fn bvdf(w: &WindowView, s: &DirectionalStrategy) -> ColorVector {
    let angle = Pairwise::angular(w, s);
    let sums = angle.sums();
    w.vectors()[argmin(w.len(), |i| sums[i])]
}

/// Directional-distance filter: minimizes the product of the angular and
/// Minkowski sums.
pub fn ddf(w: &WindowView, p: MinkowskiOrder, s: &DirectionalStrategy) -> ColorVector {
    let (angle, dist) = (Pairwise::angular(w, s), Pairwise::minkowski(w, p));
    let idx = aggregates(&angle, &dist).ddf(w.len());
    w.vectors()[idx]
}

/// Center-weighted DDF at smoothing level `k` (`1..=d`).
pub fn cwddf(
    w: &WindowView,
    k: usize,
    p: MinkowskiOrder,
    s: &DirectionalStrategy,
) -> Result<ColorVector> {
    let profile = CenterWeightProfile::new(k, w.len())?;
    let (angle, dist) = (Pairwise::angular(w, s), Pairwise::minkowski(w, p));
    let idx = aggregates(&angle, &dist).center_weighted(
        w.len(),
        profile.center_weight(),
        Smoother::Cwddf,
    );
    Ok(w.vectors()[idx])
}

/// Center-weighted vector median at smoothing level `k` (`1..=d`).
pub fn cwvmf(w: &WindowView, k: usize, p: MinkowskiOrder) -> Result<ColorVector> {
    let profile = CenterWeightProfile::new(k, w.len())?;
    let dist = Pairwise::minkowski(w, p);
    let l = dist.sums();
    let weight = profile.center_weight();
    let idx = argmin(w.len(), |i| {
        super::select::center_weighted(l[i], dist.to_center(i), weight)
    });
    Ok(w.vectors()[idx])
}

/// Adaptive center-weighted DDF.
///
/// Sums `D(y_k, x_d) * L_p(y_k, x_d)` over the smoothing outputs `y_k`,
/// `k = lambda..=lambda + 2`. Above the threshold the DDF output is
/// returned, otherwise the center pixel is kept.
pub fn acwddf(
    w: &WindowView,
    params: &AcwddfParams,
    p: MinkowskiOrder,
    s: &DirectionalStrategy,
) -> Result<ColorVector> {
    params.validate(w.len())?;
    let (angle, dist) = (Pairwise::angular(w, s), Pairwise::minkowski(w, p));
    let idx = aggregates(&angle, &dist).acwddf(w.len(), params);
    Ok(w.vectors()[idx])
}
