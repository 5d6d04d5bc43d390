//! Scalar math shims: the platform library under `std`, `libm` otherwise.

#[cfg(feature = "std")]
mod imp {
    #[inline(always)]
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }
    #[inline(always)]
    pub fn sqrtf(x: f32) -> f32 {
        x.sqrt()
    }
    #[inline(always)]
    pub fn acos(x: f64) -> f64 {
        x.acos()
    }
    #[inline(always)]
    pub fn asin(x: f64) -> f64 {
        x.asin()
    }
    #[inline(always)]
    pub fn pow(x: f64, y: f64) -> f64 {
        x.powf(y)
    }
    #[inline(always)]
    pub fn log10(x: f64) -> f64 {
        x.log10()
    }
    #[inline(always)]
    pub fn cbrt(x: f64) -> f64 {
        x.cbrt()
    }
}

#[cfg(not(feature = "std"))]
mod imp {
    pub use libm::{acos, asin, cbrt, log10, pow, sqrt, sqrtf};
}

pub use imp::*;

#[inline(always)]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}
