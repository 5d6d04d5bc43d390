//! Argmin rules shared by the per-window filters and the row engine.
//!
//! Callers supply aggregate sums and center terms through closures indexed
//! by window position: `angle_sum(i) = sum_j D(x_i, x_j)`,
//! `dist_sum(i) = sum_j L_p(x_i, x_j)`, `angle_to_center(i) = D(x_i, x_d)`
//! and `dist_to_center(i) = L_p(x_i, x_d)`.

use super::{AcwddfParams, Smoother};

/// Index of the smallest value; the lowest index wins ties.
#[inline(always)]
pub(crate) fn argmin(n: usize, value: impl Fn(usize) -> f64) -> usize {
    let mut best = 0;
    let mut best_value = value(0);
    for i in 1..n {
        let v = value(i);
        if v < best_value {
            best = i;
            best_value = v;
        }
    }
    best
}

/// `sum_j w_j x_j` given the unweighted sum and the center term.
#[inline(always)]
pub(crate) fn center_weighted(sum: f64, center_term: f64, center_weight: f64) -> f64 {
    sum + (center_weight - 1.0) * center_term
}

pub(crate) struct Aggregates<A, L, CA, CL> {
    pub angle_sum: A,
    pub dist_sum: L,
    pub angle_to_center: CA,
    pub dist_to_center: CL,
}

impl<A, L, CA, CL> Aggregates<A, L, CA, CL>
where
    A: Fn(usize) -> f64,
    L: Fn(usize) -> f64,
    CA: Fn(usize) -> f64,
    CL: Fn(usize) -> f64,
{
    #[inline(always)]
    pub fn ddf(&self, n: usize) -> usize {
        argmin(n, |i| (self.angle_sum)(i) * (self.dist_sum)(i))
    }

    #[inline(always)]
    pub fn center_weighted(&self, n: usize, center_weight: f64, smoother: Smoother) -> usize {
        match smoother {
            Smoother::Cwddf => argmin(n, |i| {
                center_weighted(
                    (self.angle_sum)(i),
                    (self.angle_to_center)(i),
                    center_weight,
                ) * center_weighted((self.dist_sum)(i), (self.dist_to_center)(i), center_weight)
            }),
            Smoother::Cwvmf => argmin(n, |i| {
                center_weighted((self.dist_sum)(i), (self.dist_to_center)(i), center_weight)
            }),
        }
    }

    /// Switching sum over smoothing levels `lambda..=lambda + 2`.
    #[inline(always)]
    pub fn switching_sum(&self, n: usize, params: &AcwddfParams) -> f64 {
        let mut total = 0.0;
        for k in params.lambda..=params.lambda + 2 {
            let weight = (n + 2 - 2 * k) as f64;
            let y = self.center_weighted(n, weight, params.smoother);
            total += (self.angle_to_center)(y) * (self.dist_to_center)(y);
        }
        total
    }

    #[inline(always)]
    pub fn acwddf(&self, n: usize, params: &AcwddfParams) -> usize {
        if self.switching_sum(n, params) > params.threshold {
            self.ddf(n)
        } else {
            n / 2
        }
    }
}
