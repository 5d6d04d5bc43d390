//! Reduced-ordering vector filters.
//!
//! Every filter ranks the `n` vectors of a window by an aggregate of their
//! distances to all window members and outputs the lowest-ranked one:
//!
//! | filter | ordering value of `x_i`                                  |
//! |--------|----------------------------------------------------------|
//! | VMF    | `sum_j L_p(x_i, x_j)`                                    |
//! | BVDF   | `sum_j D(x_i, x_j)`                                      |
//! | DDF    | `(sum_j D(x_i, x_j)) * (sum_j L_p(x_i, x_j))`            |
//! | CWDDF  | as DDF with the center term weighted by `n - 2k + 2`     |
//!
//! `D` is the angular distance selected by a [`DirectionalStrategy`]. The
//! ACWDDF switches between the DDF output and the untouched center pixel
//! depending on how far three CWDDF outputs lie from the center.
//!
//! Ties go to the lowest window index. A vector's distance to itself counts
//! as exactly zero in every aggregate.
//!
//! [`apply_filter`] slides the window over an image through [`FilterEngine`],
//! which evaluates each window offset pair across a whole row at once. The
//! per-window functions ([`vmf`], [`bvdf`], ...) compute the same values one
//! window at a time.

mod engine;
pub(crate) mod kernel;
mod select;
mod spec;
mod window;

use crate::distance::{Calibration, FastAcosTable, MinkowskiOrder};
use crate::error::{Error, Result};
use crate::image::{BorderPolicy, RasterImage};

pub use engine::FilterEngine;
pub use window::{acwddf, bvdf, cwddf, cwvmf, ddf, vmf};

/// How angular terms are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum DirectionalStrategy {
    /// Library `acos` of the cosine between the two vectors.
    #[default]
    Exact,
    /// Minimax polynomial inverse cosine.
    Minimax(FastAcosTable),
    /// Minkowski distance between chromaticity coordinates, passed through
    /// the affine `calibration`.
    Chromaticity {
        calibration: Calibration,
        order: MinkowskiOrder,
    },
}

impl DirectionalStrategy {
    /// Minimax strategy with the built-in degree-`q` table.
    pub fn minimax(q: usize) -> Result<Self> {
        Ok(DirectionalStrategy::Minimax(FastAcosTable::new(q)?))
    }

    /// Chromaticity `L_2` distance with the reference calibration.
    pub fn rgb() -> Self {
        DirectionalStrategy::Chromaticity {
            calibration: Calibration::REFERENCE,
            order: MinkowskiOrder::L2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DirectionalStrategy::Exact => "exact",
            DirectionalStrategy::Minimax(_) => "minimax",
            DirectionalStrategy::Chromaticity { .. } => "rgb",
        }
    }

    fn validate(&self) -> Result<()> {
        if let DirectionalStrategy::Chromaticity { calibration, .. } = self {
            Calibration::new(calibration.slope, calibration.intercept)?;
        }
        Ok(())
    }
}

/// Center weight of a center-weighted filter at smoothing level `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CenterWeightProfile {
    k: usize,
    n: usize,
}

impl CenterWeightProfile {
    /// `k` must lie in `1..=d` where `d = (n + 1) / 2`.
    pub fn new(k: usize, n: usize) -> Result<Self> {
        let d = n.div_ceil(2);
        if k == 0 || k > d {
            return Err(Error::param(
                "k",
                alloc::format!(
                    "smoothing level must be in 1..={d} for a {n}-vector window, got {k}"
                ),
            ));
        }
        Ok(CenterWeightProfile { k, n })
    }

    pub fn level(&self) -> usize {
        self.k
    }

    /// `w_d(k) = n - 2k + 2`; every other vector has weight 1.
    pub fn center_weight(&self) -> f64 {
        (self.n + 2 - 2 * self.k) as f64
    }

    pub fn weight(&self, j: usize) -> f64 {
        if j == self.n / 2 {
            self.center_weight()
        } else {
            1.0
        }
    }
}

/// Ordering used for the smoothing outputs of the ACWDDF.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Smoother {
    /// Center-weighted DDF: product of weighted angular and Minkowski sums.
    #[default]
    Cwddf,
    /// Center-weighted VMF: weighted Minkowski sums only.
    Cwvmf,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcwddfParams {
    /// Initial smoothing level; levels `lambda..=lambda + 2` are evaluated.
    pub lambda: usize,
    /// Switching threshold on the summed angle-times-distance evidence.
    pub threshold: f64,
    pub smoother: Smoother,
}

impl AcwddfParams {
    pub const DEFAULT_LAMBDA: usize = 2;
    pub const DEFAULT_THRESHOLD: f64 = 10.8;

    pub fn new(lambda: usize, threshold: f64) -> Self {
        AcwddfParams {
            lambda,
            threshold,
            smoother: Smoother::Cwddf,
        }
    }

    /// Checks the parameters against a window of `n` vectors.
    pub fn validate(&self, n: usize) -> Result<()> {
        let d = n.div_ceil(2);
        if self.lambda == 0 || self.lambda + 2 > d {
            return Err(Error::param(
                "lambda",
                alloc::format!(
                    "need 1 <= lambda and lambda + 2 <= {d}, got {}",
                    self.lambda
                ),
            ));
        }
        if !(self.threshold.is_finite() && self.threshold >= 0.0) {
            return Err(Error::param(
                "T",
                "threshold must be finite and nonnegative",
            ));
        }
        Ok(())
    }
}

impl Default for AcwddfParams {
    fn default() -> Self {
        AcwddfParams::new(Self::DEFAULT_LAMBDA, Self::DEFAULT_THRESHOLD)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FilterFamily {
    Identity,
    Vmf,
    Bvdf,
    Ddf,
    /// Center-weighted filter at a single smoothing level.
    Cwddf {
        k: usize,
        smoother: Smoother,
    },
    Acwddf(AcwddfParams),
}

impl FilterFamily {
    pub fn name(&self) -> &'static str {
        match self {
            FilterFamily::Identity => "identity",
            FilterFamily::Vmf => "vmf",
            FilterFamily::Bvdf => "bvdf",
            FilterFamily::Ddf => "ddf",
            FilterFamily::Cwddf { .. } => "cwddf",
            FilterFamily::Acwddf(_) => "acwddf",
        }
    }

    /// Whether the family orders by angular distance.
    pub fn is_directional(&self) -> bool {
        match self {
            FilterFamily::Identity | FilterFamily::Vmf => false,
            FilterFamily::Cwddf { smoother, .. } => *smoother == Smoother::Cwddf,
            _ => true,
        }
    }

    /// Whether the family orders by Minkowski distance.
    pub fn uses_distance(&self) -> bool {
        !matches!(self, FilterFamily::Identity | FilterFamily::Bvdf)
    }
}

/// A complete filter configuration. See the [`core::str::FromStr`] impl for
/// the text form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilterSpec {
    pub family: FilterFamily,
    /// Ignored by the VMF and the identity.
    pub strategy: DirectionalStrategy,
    pub order: MinkowskiOrder,
    /// Window side; the window holds `side * side` vectors.
    pub side: usize,
}

impl FilterSpec {
    pub const DEFAULT_SIDE: usize = 3;

    pub fn new(family: FilterFamily, strategy: DirectionalStrategy) -> Self {
        FilterSpec {
            family,
            strategy,
            order: MinkowskiOrder::L2,
            side: Self::DEFAULT_SIDE,
        }
    }

    pub fn identity() -> Self {
        FilterSpec::new(FilterFamily::Identity, DirectionalStrategy::Exact)
    }

    pub fn window_len(&self) -> usize {
        self.side * self.side
    }

    pub fn validate(&self) -> Result<()> {
        crate::image::check_side(self.side)?;
        self.strategy.validate()?;
        let n = self.window_len();
        match self.family {
            FilterFamily::Cwddf { k, .. } => {
                CenterWeightProfile::new(k, n)?;
            }
            FilterFamily::Acwddf(params) => params.validate(n)?,
            _ => {}
        }
        Ok(())
    }
}

/// Filters `img` with a sliding window, reading only the original pixels.
///
/// Every output pixel is one of the input vectors of its window.
pub fn apply_filter(
    img: &RasterImage,
    spec: &FilterSpec,
    policy: BorderPolicy,
) -> Result<RasterImage> {
    FilterEngine::new(img, spec, policy)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_weights() {
        let p = CenterWeightProfile::new(1, 9).unwrap();
        assert_eq!(p.center_weight(), 9.0);
        assert_eq!(p.weight(4), 9.0);
        assert_eq!(p.weight(0), 1.0);
        assert_eq!(CenterWeightProfile::new(5, 9).unwrap().center_weight(), 1.0);
        assert_eq!(CenterWeightProfile::new(2, 9).unwrap().center_weight(), 7.0);
        assert!(CenterWeightProfile::new(0, 9).is_err());
        assert!(CenterWeightProfile::new(6, 9).is_err());
        assert_eq!(
            CenterWeightProfile::new(13, 25).unwrap().center_weight(),
            1.0
        );
    }

    #[test]
    fn acwddf_params_range() {
        assert!(AcwddfParams::default().validate(9).is_ok());
        assert!(AcwddfParams::new(3, 10.8).validate(9).is_ok());
        assert!(AcwddfParams::new(4, 10.8).validate(9).is_err());
        assert!(AcwddfParams::new(0, 10.8).validate(9).is_err());
        assert!(AcwddfParams::new(2, -1.0).validate(9).is_err());
        assert!(AcwddfParams::new(11, 0.0).validate(25).is_ok());
    }

    #[test]
    fn spec_validation() {
        let mut s = FilterSpec::new(FilterFamily::Bvdf, DirectionalStrategy::Exact);
        assert!(s.validate().is_ok());
        s.side = 4;
        assert_eq!(s.validate(), Err(Error::WindowSize(4)));
        let s = FilterSpec::new(
            FilterFamily::Bvdf,
            DirectionalStrategy::Chromaticity {
                calibration: Calibration {
                    slope: -1.0,
                    intercept: 0.0,
                },
                order: MinkowskiOrder::L2,
            },
        );
        assert!(s.validate().is_err());
    }
}
