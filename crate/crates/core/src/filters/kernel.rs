//! Monomorphized pairwise distance kernels.
//!
//! A kernel maps each color vector to a feature triple once, then evaluates
//! the distance between two features. Both the per-window filters and the
//! row engine go through the same kernels, so they see bit-identical
//! pairwise values.
//!
//! Features, distances and their sums are `f64`, except for the
//! chromaticity kernel, which works in `f32` throughout: it approximates the
//! angle far more coarsely than single precision resolves.

use crate::distance::{self, Calibration, FastAcosTable};
use crate::image::ColorVector;
use crate::math;

pub(crate) trait Norm: Copy {
    fn norm3(&self, dx: f64, dy: f64, dz: f64) -> f64;

    #[inline(always)]
    fn norm3_f32(&self, dx: f32, dy: f32, dz: f32) -> f32 {
        self.norm3(f64::from(dx), f64::from(dy), f64::from(dz)) as f32
    }
}

#[derive(Clone, Copy)]
pub(crate) struct L1;

#[derive(Clone, Copy)]
pub(crate) struct L2;

#[derive(Clone, Copy)]
pub(crate) struct Lp(pub f64);

impl Norm for L1 {
    #[inline(always)]
    fn norm3(&self, dx: f64, dy: f64, dz: f64) -> f64 {
        math::abs(dx) + math::abs(dy) + math::abs(dz)
    }

    #[inline(always)]
    fn norm3_f32(&self, dx: f32, dy: f32, dz: f32) -> f32 {
        dx.abs() + dy.abs() + dz.abs()
    }
}

impl Norm for L2 {
    #[inline(always)]
    fn norm3(&self, dx: f64, dy: f64, dz: f64) -> f64 {
        math::sqrt(dx * dx + dy * dy + dz * dz)
    }

    #[inline(always)]
    fn norm3_f32(&self, dx: f32, dy: f32, dz: f32) -> f32 {
        math::sqrtf(dx * dx + dy * dy + dz * dz)
    }
}

impl Norm for Lp {
    #[inline(always)]
    fn norm3(&self, dx: f64, dy: f64, dz: f64) -> f64 {
        let p = self.0;
        math::pow(
            math::pow(math::abs(dx), p) + math::pow(math::abs(dy), p) + math::pow(math::abs(dz), p),
            1.0 / p,
        )
    }
}

/// Scalar type of kernel features, distances and distance sums.
pub(crate) trait Scalar:
    Copy + Default + core::ops::AddAssign + Into<f64> + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

pub(crate) trait PairKernel: Copy {
    type Scalar: Scalar;
    fn feature(&self, v: &ColorVector) -> [Self::Scalar; 3];
    fn eval(&self, a: [Self::Scalar; 3], b: [Self::Scalar; 3]) -> Self::Scalar;
}

/// Minkowski distance on raw components.
#[derive(Clone, Copy)]
pub(crate) struct Raw<N>(pub N);

impl<N: Norm> PairKernel for Raw<N> {
    type Scalar = f64;

    #[inline(always)]
    fn feature(&self, v: &ColorVector) -> [f64; 3] {
        v.0
    }

    #[inline(always)]
    fn eval(&self, a: [f64; 3], b: [f64; 3]) -> f64 {
        self.0.norm3(a[0] - b[0], a[1] - b[1], a[2] - b[2])
    }
}

/// Angle through the library `acos`, on unit vectors.
#[derive(Clone, Copy)]
pub(crate) struct ExactAngle;

impl PairKernel for ExactAngle {
    type Scalar = f64;

    #[inline(always)]
    fn feature(&self, v: &ColorVector) -> [f64; 3] {
        distance::direction(v)
    }

    #[inline(always)]
    fn eval(&self, a: [f64; 3], b: [f64; 3]) -> f64 {
        math::acos(distance::clamped_cosine(&a, &b))
    }
}

/// Angle through the minimax inverse cosine, on unit vectors.
#[derive(Clone, Copy)]
pub(crate) struct MinimaxAngle(pub FastAcosTable);

impl PairKernel for MinimaxAngle {
    type Scalar = f64;

    #[inline(always)]
    fn feature(&self, v: &ColorVector) -> [f64; 3] {
        distance::direction(v)
    }

    #[inline(always)]
    fn eval(&self, a: [f64; 3], b: [f64; 3]) -> f64 {
        self.0.eval(distance::clamped_cosine(&a, &b))
    }
}

/// Calibrated chromaticity distance; the feature carries `(r, g, 0)`.
/// The `b` difference is `-(dr + dg)`.
#[derive(Clone, Copy)]
pub(crate) struct Chroma<N> {
    pub norm: N,
    pub calibration: Calibration,
}

impl<N: Norm> PairKernel for Chroma<N> {
    type Scalar = f32;

    #[inline(always)]
    fn feature(&self, v: &ColorVector) -> [f32; 3] {
        let [r, g] = distance::chromaticity_rg(v);
        [r as f32, g as f32, 0.0]
    }

    #[inline(always)]
    fn eval(&self, a: [f32; 3], b: [f32; 3]) -> f32 {
        let dr = a[0] - b[0];
        let dg = a[1] - b[1];
        self.calibration.slope as f32 * self.norm.norm3_f32(dr, dg, dr + dg)
            + self.calibration.intercept as f32
    }
}

/// Calls `$body` with `$n` bound to the concrete Minkowski norm for `$order`.
macro_rules! with_norm {
    ($order:expr, |$n:ident| $body:expr) => {{
        let p = $order.get();
        if p == 2.0 {
            let $n = $crate::filters::kernel::L2;
            $body
        } else if p == 1.0 {
            let $n = $crate::filters::kernel::L1;
            $body
        } else {
            let $n = $crate::filters::kernel::Lp(p);
            $body
        }
    }};
}

/// Calls `$body` with `$k` bound to the angular kernel of `$strategy`.
macro_rules! with_angular {
    ($strategy:expr, |$k:ident| $body:expr) => {{
        match $strategy {
            $crate::filters::DirectionalStrategy::Exact => {
                let $k = $crate::filters::kernel::ExactAngle;
                $body
            }
            $crate::filters::DirectionalStrategy::Minimax(table) => {
                let $k = $crate::filters::kernel::MinimaxAngle(table);
                $body
            }
            $crate::filters::DirectionalStrategy::Chromaticity { calibration, order } => {
                $crate::filters::kernel::with_norm!(order, |norm| {
                    let $k = $crate::filters::kernel::Chroma { norm, calibration };
                    $body
                })
            }
        }
    }};
}

pub(crate) use {with_angular, with_norm};
