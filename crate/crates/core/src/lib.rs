//! Order-statistics vector filters for color images.
//!
//! The crate implements the reduced-ordering filters VMF, BVDF, DDF and the
//! adaptive center-weighted ACWDDF, together with two ways of making the
//! angular (cosine) distance cheaper:
//!
//! * a minimax polynomial inverse cosine ([`distance::FastAcosTable`]), and
//! * a Minkowski distance in chromaticity coordinates, optionally mapped onto
//!   the radian scale by a linear calibration ([`distance::Calibration`]).
//!
//! Supporting modules cover impulsive noise generation ([`noise`]), quality
//! metrics ([`metrics`]) and the offline calibration/verification routines
//! ([`calibration`]).
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. In that configuration the transcendental functions come from
//! `libm`; with `std` they come from the platform math library.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod calibration;
pub mod distance;
mod error;
pub mod filters;
pub mod image;
pub(crate) mod math;
pub mod metrics;
pub mod noise;

pub use distance::{Calibration, FastAcosTable, MinimaxPoly, MinimaxRole, MinkowskiOrder};
pub use error::{Error, Result};
pub use filters::{apply_filter, DirectionalStrategy, FilterFamily, FilterSpec};
pub use image::{extract_window, BorderPolicy, ColorVector, RasterImage, WindowView};
pub use metrics::MetricsReport;
pub use noise::{corrupt_image, NoiseParams};
