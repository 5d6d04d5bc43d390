//! Pairwise distances between color vectors.
//!
//! Three families are provided:
//!
//! * Minkowski `L_p` distances on the raw RGB components;
//! * the angle between two vectors, computed either with the library `acos`
//!   or with a minimax polynomial inverse cosine ([`FastAcosTable`]);
//! * a Minkowski distance between chromaticity coordinates, which behaves
//!   almost linearly in the angle and can be mapped onto radians with a
//!   [`Calibration`].
//!
//! Zero vectors have no direction. Angular functions treat them as pointing
//! along the gray axis `(1, 1, 1)` and [`chromaticity`] maps them to
//! `(1/3, 1/3, 1/3)`, which is the limit along that axis.

use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::image::ColorVector;
use crate::math;

const FRAC_1_SQRT_3: f64 = 0.577_350_269_189_625_8;

/// Order `p >= 1` of a Minkowski distance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinkowskiOrder(f64);

impl MinkowskiOrder {
    pub const L1: MinkowskiOrder = MinkowskiOrder(1.0);
    pub const L2: MinkowskiOrder = MinkowskiOrder(2.0);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(MinkowskiOrder(p))
        } else {
            Err(Error::param(
                "p",
                alloc::format!("Minkowski order must be a finite value >= 1, got {p}"),
            ))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// Norm of a 3-component difference vector.
    #[inline(always)]
    pub(crate) fn norm3(self, dx: f64, dy: f64, dz: f64) -> f64 {
        if self.0 == 2.0 {
            math::sqrt(dx * dx + dy * dy + dz * dz)
        } else if self.0 == 1.0 {
            math::abs(dx) + math::abs(dy) + math::abs(dz)
        } else {
            let p = self.0;
            math::pow(
                math::pow(math::abs(dx), p)
                    + math::pow(math::abs(dy), p)
                    + math::pow(math::abs(dz), p),
                1.0 / p,
            )
        }
    }
}

impl Default for MinkowskiOrder {
    fn default() -> Self {
        MinkowskiOrder::L2
    }
}

impl fmt::Display for MinkowskiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `L_p(a, b) = (sum_k |a_k - b_k|^p)^(1/p)`.
pub fn minkowski_distance(a: &ColorVector, b: &ColorVector, p: MinkowskiOrder) -> f64 {
    p.norm3(a.0[0] - b.0[0], a.0[1] - b.0[1], a.0[2] - b.0[2])
}

/// Unit vector along `v`; the zero vector maps to the gray direction.
#[inline]
pub fn direction(v: &ColorVector) -> [f64; 3] {
    let len = v.norm();
    if len > 0.0 {
        [v.0[0] / len, v.0[1] / len, v.0[2] / len]
    } else {
        [FRAC_1_SQRT_3; 3]
    }
}

/// Cosines at or above this value are taken as exactly 1.
///
/// Normalizing parallel vectors leaves a few ulps of error in their cosine,
/// which `acos` would amplify to ~1e-8 rad. The closest non-parallel pair of
/// 8-bit vectors has a cosine deficit near 1e-11, far below this cutoff.
pub const PARALLEL_COSINE: f64 = 1.0 - 1e-13;

/// Cosine of the angle between two directions, clamped to `[0, 1]`.
#[inline(always)]
pub(crate) fn clamped_cosine(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    let z = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    // Nonnegative vectors have nonnegative cosines; the clamp only absorbs rounding.
    if z >= PARALLEL_COSINE {
        1.0
    } else {
        z.max(0.0)
    }
}

/// Angle between `a` and `b` in radians, using the library `acos`.
pub fn angular_distance_exact(a: &ColorVector, b: &ColorVector) -> f64 {
    math::acos(clamped_cosine(&direction(a), &direction(b)))
}

/// Which function a [`MinimaxPoly`] approximates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MinimaxRole {
    /// `g(t) = 2 asin(t / sqrt 2)` on `[0, 1/sqrt 2]`, with `t = sqrt(1 - z)`.
    AsinComposed,
    /// `acos(z)` on `[0, 0.5]`.
    AcosDirect,
}

impl MinimaxRole {
    pub fn domain(self) -> (f64, f64) {
        match self {
            MinimaxRole::AsinComposed => (0.0, FRAC_1_SQRT_2),
            MinimaxRole::AcosDirect => (0.0, 0.5),
        }
    }

    /// High-precision value of the approximated function.
    pub fn reference(self, x: f64) -> f64 {
        match self {
            MinimaxRole::AsinComposed => 2.0 * math::asin(x * FRAC_1_SQRT_2),
            MinimaxRole::AcosDirect => math::acos(x),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MinimaxRole::AsinComposed => "asin",
            MinimaxRole::AcosDirect => "acos",
        }
    }
}

impl FromStr for MinimaxRole {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "asin" | "asin_composed" => Ok(MinimaxRole::AsinComposed),
            "acos" | "acos_direct" => Ok(MinimaxRole::AcosDirect),
            _ => Err(Error::param(
                "role",
                alloc::format!("unknown minimax role `{s}`"),
            )),
        }
    }
}

impl fmt::Display for MinimaxRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A polynomial `a_0 + a_1 z + ... + a_q z^q` of degree `q <= 4` with its
/// guaranteed maximum absolute error on the role's domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimaxPoly {
    role: MinimaxRole,
    coeffs: [f64; 5],
    degree: usize,
    bound: f64,
}

/// Published minimax coefficients, indexed by degree `q - 2`.
const ASIN_ROWS: [(f64, [f64; 5]); 3] = [
    (
        1.830987519e-03,
        [1.829125e-03, 1.371117, 1.480266e-01, 0.0, 0.0],
    ),
    (
        1.358426903e-04,
        [-1.358425e-04, 1.419488, -3.090315e-02, 1.666491e-01, 0.0],
    ),
    (
        2.097813673e-05,
        [
            2.097797e-05,
            1.412840,
            1.429881e-02,
            6.704361e-02,
            6.909677e-02,
        ],
    ),
];

const ACOS_ROWS: [(f64, [f64; 5]); 3] = [
    (
        9.154936808e-04,
        [1.569882, -9.695260e-01, -1.480266e-01, 0.0, 0.0],
    ),
    (
        6.792158693e-05,
        [1.570864, -1.003730, 3.090318e-02, -2.356775e-01, 0.0],
    ),
    (
        1.048948667e-05,
        [
            1.570786,
            -9.990285e-01,
            -1.429899e-02,
            -9.481335e-02,
            -1.381942e-01,
        ],
    ),
];

impl MinimaxPoly {
    /// Degrees with published coefficients.
    pub const DEGREES: [usize; 3] = [2, 3, 4];

    /// Builds a polynomial from `degree + 1` coefficients, lowest order first.
    pub fn new(role: MinimaxRole, coefficients: &[f64], bound: f64) -> Result<Self> {
        if coefficients.is_empty() || coefficients.len() > 5 {
            return Err(Error::param(
                "coefficients",
                "expected between 1 and 5 coefficients",
            ));
        }
        if !coefficients.iter().all(|c| c.is_finite()) {
            return Err(Error::param("coefficients", "coefficients must be finite"));
        }
        if !(bound.is_finite() && bound >= 0.0) {
            return Err(Error::param(
                "bound",
                "error bound must be finite and nonnegative",
            ));
        }
        let mut coeffs = [0.0; 5];
        coeffs[..coefficients.len()].copy_from_slice(coefficients);
        Ok(MinimaxPoly {
            role,
            coeffs,
            degree: coefficients.len() - 1,
            bound,
        })
    }

    /// The built-in coefficients for `role` at degree `q` in {2, 3, 4}.
    pub fn builtin(role: MinimaxRole, q: usize) -> Result<Self> {
        if !Self::DEGREES.contains(&q) {
            return Err(Error::param(
                "q",
                alloc::format!("degree must be 2, 3 or 4, got {q}"),
            ));
        }
        let rows = match role {
            MinimaxRole::AsinComposed => &ASIN_ROWS,
            MinimaxRole::AcosDirect => &ACOS_ROWS,
        };
        let (bound, coeffs) = rows[q - 2];
        Ok(MinimaxPoly {
            role,
            coeffs,
            degree: q,
            bound,
        })
    }

    pub fn role(&self) -> MinimaxRole {
        self.role
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs[..=self.degree]
    }

    /// Guaranteed maximum absolute error on [`Self::domain`].
    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn domain(&self) -> (f64, f64) {
        self.role.domain()
    }

    /// Nested-multiplication evaluation.
    #[inline(always)]
    pub fn eval(&self, x: f64) -> f64 {
        // Unused high coefficients are zero, so the fixed five-term form is exact.
        let c = &self.coeffs;
        c[0] + x * (c[1] + x * (c[2] + x * (c[3] + x * c[4])))
    }
}

/// Minimax inverse cosine on `[0, 1]`: the direct `acos` polynomial below
/// `z = 0.5`, and `2 asin(sqrt((1 - z) / 2))` through the composed `asin`
/// polynomial of `sqrt(1 - z)` from `z = 0.5` up.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FastAcosTable {
    acos: MinimaxPoly,
    asin: MinimaxPoly,
}

impl FastAcosTable {
    pub const DEFAULT_DEGREE: usize = 4;

    /// Table using the built-in degree-`q` polynomials.
    pub fn new(q: usize) -> Result<Self> {
        Ok(FastAcosTable {
            acos: MinimaxPoly::builtin(MinimaxRole::AcosDirect, q)?,
            asin: MinimaxPoly::builtin(MinimaxRole::AsinComposed, q)?,
        })
    }

    pub fn from_polys(acos: MinimaxPoly, asin: MinimaxPoly) -> Result<Self> {
        if acos.role != MinimaxRole::AcosDirect || asin.role != MinimaxRole::AsinComposed {
            return Err(Error::param(
                "table",
                "expected one acos and one composed asin polynomial",
            ));
        }
        Ok(FastAcosTable { acos, asin })
    }

    pub fn acos_poly(&self) -> &MinimaxPoly {
        &self.acos
    }

    pub fn asin_poly(&self) -> &MinimaxPoly {
        &self.asin
    }

    /// Degree of the table when both polynomials share one.
    pub fn degree(&self) -> Option<usize> {
        (self.acos.degree == self.asin.degree).then_some(self.acos.degree)
    }

    /// Worst-case absolute error over `[0, 1]`.
    pub fn bound(&self) -> f64 {
        self.acos.bound.max(self.asin.bound)
    }

    /// Approximate `acos(z)`; `z` is clamped to `[0, 1]` first.
    ///
    /// Both branches are evaluated and one is selected, which keeps the
    /// function branch-free inside the vectorized filter kernels.
    #[inline(always)]
    pub fn eval(&self, z: f64) -> f64 {
        let z = z.clamp(0.0, 1.0);
        let direct = self.acos.eval(z);
        let composed = self.asin.eval(math::sqrt(1.0 - z));
        if z < 0.5 {
            direct
        } else {
            composed
        }
    }
}

impl Default for FastAcosTable {
    fn default() -> Self {
        FastAcosTable::new(Self::DEFAULT_DEGREE).expect("built-in degree")
    }
}

/// Approximate `acos(z)` with `table`.
pub fn fast_acos(z: f64, table: &FastAcosTable) -> f64 {
    table.eval(z)
}

/// Angle between `a` and `b` through the minimax inverse cosine.
pub fn angular_distance_minimax(a: &ColorVector, b: &ColorVector, table: &FastAcosTable) -> f64 {
    table.eval(clamped_cosine(&direction(a), &direction(b)))
}

/// Chromaticity coordinates `(r, g, b) = v / (v_1 + v_2 + v_3)`.
pub fn chromaticity(v: &ColorVector) -> [f64; 3] {
    let s = v.component_sum();
    if s > 0.0 {
        [v.0[0] / s, v.0[1] / s, v.0[2] / s]
    } else {
        [1.0 / 3.0; 3]
    }
}

/// The red and green chromaticity coordinates; blue is implied by `r + g + b = 1`.
#[inline]
pub(crate) fn chromaticity_rg(v: &ColorVector) -> [f64; 2] {
    let c = chromaticity(v);
    [c[0], c[1]]
}

/// `L_p` between two chromaticity points given by their red/green coordinates.
///
/// Since both points sum to one, the blue difference is `-(dr + dg)`.
#[inline(always)]
pub(crate) fn chromaticity_gap(a: [f64; 2], b: [f64; 2], p: MinkowskiOrder) -> f64 {
    let dr = a[0] - b[0];
    let dg = a[1] - b[1];
    p.norm3(dr, dg, dr + dg)
}

/// Minkowski distance between the chromaticity coordinates of `a` and `b`.
pub fn chromaticity_distance(a: &ColorVector, b: &ColorVector, p: MinkowskiOrder) -> f64 {
    chromaticity_gap(chromaticity_rg(a), chromaticity_rg(b), p)
}

/// Affine map from chromaticity distance onto the radian scale of the angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Calibration {
    pub slope: f64,
    pub intercept: f64,
}

impl Calibration {
    /// Published fit of angle against `L_2` chromaticity distance.
    pub const REFERENCE: Calibration = Calibration {
        slope: 1.436437,
        intercept: 0.027664,
    };

    /// The identity map: plain chromaticity distance.
    pub const IDENTITY: Calibration = Calibration {
        slope: 1.0,
        intercept: 0.0,
    };

    pub fn new(slope: f64, intercept: f64) -> Result<Self> {
        if !(slope.is_finite() && slope > 0.0) {
            return Err(Error::param("slope", "calibration slope must be positive"));
        }
        if !intercept.is_finite() {
            return Err(Error::param(
                "intercept",
                "calibration intercept must be finite",
            ));
        }
        Ok(Calibration { slope, intercept })
    }

    #[inline(always)]
    pub fn apply(&self, chroma_distance: f64) -> f64 {
        self.slope * chroma_distance + self.intercept
    }
}

impl Default for Calibration {
    fn default() -> Self {
        Calibration::REFERENCE
    }
}

/// `slope * B(a, b) + intercept`, an approximation of the angle between `a` and `b`.
///
/// The fit targets typical pairs. At the extremes it is loose: for two
/// orthogonal primaries it gives about 2.059 against the true `pi/2`.
pub fn calibrated_angular(
    a: &ColorVector,
    b: &ColorVector,
    slope: f64,
    intercept: f64,
    p: MinkowskiOrder,
) -> f64 {
    slope * chromaticity_distance(a, b, p) + intercept
}
