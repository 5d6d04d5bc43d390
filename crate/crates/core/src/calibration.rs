//! Offline numerics: the linear fit of angle against chromaticity distance,
//! and grid verification of minimax error bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distance::{
    angular_distance_exact, chromaticity_distance, Calibration, FastAcosTable, MinimaxPoly,
    MinimaxRole, MinkowskiOrder,
};
use crate::error::{Error, Result};
use crate::image::ColorVector;
use crate::math;

/// Line-fitting criterion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Regression {
    /// Total least squares: minimizes perpendicular distances, treating
    /// both coordinates as carrying error.
    #[default]
    Orthogonal,
    /// Ordinary least squares of `A` on `B`.
    Ordinary,
}

impl core::str::FromStr for Regression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orthogonal" | "tls" => Ok(Regression::Orthogonal),
            "ordinary" | "ols" => Ok(Regression::Ordinary),
            _ => Err(Error::param(
                "regression",
                alloc::format!("unknown regression `{s}`"),
            )),
        }
    }
}

/// How channel values are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Sampling {
    /// Continuous uniform on `[0, 255]`.
    #[default]
    Continuous,
    /// Integer uniform on `0..=255`.
    Integer,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square vertical residual `A - (slope B + intercept)`.
    pub fit_error: f64,
    /// Mean absolute vertical residual.
    pub mean_abs_error: f64,
    /// Mean vertical residual.
    pub mean_residual: f64,
    /// Root-mean-square perpendicular distance to the line.
    pub perpendicular_rms: f64,
    /// Smaller over larger eigenvalue of the sample covariance.
    pub eigenvalue_ratio: f64,
    pub sample_count: u64,
    pub regression: Regression,
    /// Set when `B` has zero variance; the fit is then `slope = 0`,
    /// `intercept = mean A`.
    pub degenerate: bool,
}

impl LinearFit {
    pub fn calibration(&self) -> Result<Calibration> {
        Calibration::new(self.slope, self.intercept)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitConfig {
    pub pairs: u64,
    pub seed: u64,
    pub order: MinkowskiOrder,
    pub regression: Regression,
    pub sampling: Sampling,
}

impl FitConfig {
    pub const DEFAULT_PAIRS: u64 = 1_000_000;
    pub const MIN_PAIRS: u64 = 1000;
    /// Sampling is a single sequential stream.
    pub const PARTITIONS: usize = 1;

    pub fn new(pairs: u64, seed: u64) -> Self {
        FitConfig {
            pairs,
            seed,
            order: MinkowskiOrder::L2,
            regression: Regression::Orthogonal,
            sampling: Sampling::Continuous,
        }
    }
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig::new(Self::DEFAULT_PAIRS, 0)
    }
}

/// Streaming first and second moments of `(x, y)`.
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    n: u64,
    mean_x: f64,
    mean_y: f64,
    sxx: f64,
    syy: f64,
    sxy: f64,
}

impl Moments {
    fn push(&mut self, x: f64, y: f64) {
        self.n += 1;
        let n = self.n as f64;
        let dx = x - self.mean_x;
        let dy = y - self.mean_y;
        self.mean_x += dx / n;
        self.mean_y += dy / n;
        self.sxx += dx * (x - self.mean_x);
        self.syy += dy * (y - self.mean_y);
        self.sxy += dx * (y - self.mean_y);
    }
}

fn line(m: &Moments, regression: Regression) -> (f64, f64, bool) {
    if m.sxx <= 0.0 {
        return (0.0, m.mean_y, true);
    }
    let slope = match regression {
        Regression::Ordinary => m.sxy / m.sxx,
        Regression::Orthogonal => {
            if m.sxy == 0.0 {
                if m.syy > m.sxx {
                    return (0.0, m.mean_y, true);
                }
                0.0
            } else {
                let d = m.syy - m.sxx;
                (d + math::sqrt(d * d + 4.0 * m.sxy * m.sxy)) / (2.0 * m.sxy)
            }
        }
    };
    (slope, m.mean_y - slope * m.mean_x, false)
}

/// Fits `y = slope x + intercept` to a point set, making two passes over
/// `points` (moments, then absolute residuals).
pub fn fit_line<I>(points: impl Fn() -> I, regression: Regression) -> Result<LinearFit>
where
    I: Iterator<Item = (f64, f64)>,
{
    let mut m = Moments::default();
    for (x, y) in points() {
        m.push(x, y);
    }
    if m.n < 2 {
        return Err(Error::param("pairs", "need at least two points"));
    }
    let (slope, intercept, degenerate) = line(&m, regression);
    let n = m.n as f64;

    // Residual moments follow from the centered sums, since the line passes
    // through the centroid.
    let vertical_ss = (m.syy - 2.0 * slope * m.sxy + slope * slope * m.sxx).max(0.0);
    let fit_error = math::sqrt(vertical_ss / n);
    let perpendicular_rms = fit_error / math::sqrt(1.0 + slope * slope);

    let half_trace = 0.5 * (m.sxx + m.syy);
    let gap = math::sqrt(0.25 * (m.sxx - m.syy) * (m.sxx - m.syy) + m.sxy * m.sxy);
    let eigenvalue_ratio = if half_trace + gap > 0.0 {
        (half_trace - gap).max(0.0) / (half_trace + gap)
    } else {
        0.0
    };

    let mut abs_sum = 0.0;
    let mut sum = 0.0;
    for (x, y) in points() {
        let r = y - (slope * x + intercept);
        abs_sum += math::abs(r);
        sum += r;
    }

    Ok(LinearFit {
        slope,
        intercept,
        fit_error,
        mean_abs_error: abs_sum / n,
        mean_residual: sum / n,
        perpendicular_rms,
        eigenvalue_ratio,
        sample_count: m.n,
        regression,
        degenerate,
    })
}

fn random_vector<R: Rng>(rng: &mut R, sampling: Sampling) -> ColorVector {
    loop {
        let v = match sampling {
            Sampling::Continuous => {
                ColorVector(core::array::from_fn(|_| rng.random::<f64>() * 255.0))
            }
            Sampling::Integer => ColorVector(core::array::from_fn(|_| {
                f64::from(rng.random_range(0..=255u8))
            })),
        };
        if !v.is_zero() {
            return v;
        }
    }
}

/// The `(B, A)` samples of a configuration, regenerated from the seed.
pub fn sample_pairs(config: &FitConfig) -> impl Iterator<Item = (f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (sampling, order) = (config.sampling, config.order);
    (0..config.pairs).map(move |_| {
        let a = random_vector(&mut rng, sampling);
        let b = random_vector(&mut rng, sampling);
        (
            chromaticity_distance(&a, &b, order),
            angular_distance_exact(&a, &b),
        )
    })
}

/// Fits the exact angle `A` against the chromaticity distance `B` over
/// random vector pairs.
pub fn fit_with(config: &FitConfig) -> Result<LinearFit> {
    if config.pairs < FitConfig::MIN_PAIRS {
        return Err(Error::param(
            "pairs",
            alloc::format!(
                "need at least {} pairs, got {}",
                FitConfig::MIN_PAIRS,
                config.pairs
            ),
        ));
    }
    fit_line(|| sample_pairs(config), config.regression)
}

/// [`fit_with`] using continuous sampling and the orthogonal regression.
pub fn fit_angular_chromaticity(pairs: u64, seed: u64, p: MinkowskiOrder) -> Result<LinearFit> {
    fit_with(&FitConfig {
        order: p,
        ..FitConfig::new(pairs, seed)
    })
}

/// Maximum of `|poly(x) - reference(x)|` over `grid_points` evenly spaced
/// points covering `role`'s domain, endpoints included.
pub fn verify_minimax(poly: &MinimaxPoly, role: MinimaxRole, grid_points: usize) -> Result<f64> {
    const MIN_GRID: usize = 10_000;
    if grid_points < MIN_GRID {
        return Err(Error::param(
            "grid_points",
            alloc::format!("need at least {MIN_GRID} grid points, got {grid_points}"),
        ));
    }
    let (lo, hi) = role.domain();
    let step = (hi - lo) / (grid_points - 1) as f64;
    let mut worst: f64 = 0.0;
    for i in 0..grid_points {
        let x = if i + 1 == grid_points {
            hi
        } else {
            lo + i as f64 * step
        };
        worst = worst.max(math::abs(poly.eval(x) - role.reference(x)));
    }
    Ok(worst)
}

/// Maximum of `|table(z) - acos(z)|` over `grid_points` evenly spaced
/// points of `[0, 1]`.
pub fn fast_acos_max_error(table: &FastAcosTable, grid_points: usize) -> f64 {
    let last = grid_points.max(2) - 1;
    let mut worst: f64 = 0.0;
    for i in 0..=last {
        let z = i as f64 / last as f64;
        worst = worst.max(math::abs(table.eval(z) - math::acos(z)));
    }
    worst
}
