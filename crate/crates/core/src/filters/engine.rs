//! Row-at-a-time filtering of whole images.
//!
//! Padded rows are converted into planar feature buffers (raw components
//! for Minkowski terms, unit vectors or chromaticities for angular terms),
//! holding only the rows the current windows cover. For an output row,
//! each unordered pair of window positions `(i, j)` is then one contiguous
//! loop over the row's columns, so the per-pair distance arithmetic runs
//! over long, uniform strides. Aggregate sums are accumulated in ascending partner
//! index, the same order the per-window filters use, which makes the two
//! routes bit-identical.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use super::kernel::{self, PairKernel, Raw, Scalar};
use super::select::center_weighted;
use super::{AcwddfParams, FilterFamily, FilterSpec, Smoother};
use crate::error::{Error, Result};
use crate::image::{BorderPolicy, ColorVector, RasterImage};

/// The last `side` padded rows of one feature kind, in planar layout.
/// Padded row `pr` lives in slot `pr % side`.
struct Ring<T> {
    width: usize,
    x: Vec<T>,
    y: Vec<T>,
    z: Vec<T>,
    held: Vec<Option<usize>>,
}

impl<T: Scalar> Ring<T> {
    fn new(side: usize, width: usize) -> Self {
        Ring {
            width,
            x: vec![T::default(); side * width],
            y: vec![T::default(); side * width],
            z: vec![T::default(); side * width],
            held: vec![None; side],
        }
    }

    /// Makes sure padded row `pr` is converted into its slot.
    fn load<K: PairKernel<Scalar = T>>(&mut self, kernel: &K, engine: &FilterEngine, pr: usize) {
        let slot = pr % self.held.len();
        if self.held[slot] == Some(pr) {
            return;
        }
        let src = engine.img.row(engine.row_map[pr]);
        let at = slot * self.width;
        let (x, y, z) = (
            &mut self.x[at..at + self.width],
            &mut self.y[at..at + self.width],
            &mut self.z[at..at + self.width],
        );
        for (pc, &c) in engine.col_map.iter().enumerate() {
            let f = kernel.feature(&src[c]);
            x[pc] = f[0];
            y[pc] = f[1];
            z[pc] = f[2];
        }
        self.held[slot] = Some(pr);
    }
}

/// Columns processed together. Sized so that a tile's sums and plane rows
/// stay in the L1 cache.
const TILE: usize = 128;

/// Per-thread sums for one tile, laid out `[i * len + c]` and each
/// `n * TILE` long, in the precision of their kernel.
struct Sums<T> {
    total: Vec<T>,
    to_center: Vec<T>,
}

impl<T: Scalar> Sums<T> {
    fn new(n: usize, cols: usize) -> Self {
        let len = n * TILE.min(cols);
        Sums {
            total: vec![T::default(); len],
            to_center: vec![T::default(); len],
        }
    }
}

/// The argmin rules of the per-window filters, run for every column of a
/// tile at once.
struct Selection<'s, T> {
    len: usize,
    angle: &'s [T],
    dist: &'s [f64],
    angle_center: &'s [T],
    dist_center: &'s [f64],
}

/// The sums of one window position across a tile, each exactly `len` long.
struct Row<'s, T> {
    a: &'s [T],
    ac: &'s [T],
    d: &'s [f64],
    dc: &'s [f64],
}

impl<T: Scalar> Row<'_, T> {
    #[inline(always)]
    fn a(&self, c: usize) -> f64 {
        self.a[c].into()
    }

    #[inline(always)]
    fn ac(&self, c: usize) -> f64 {
        self.ac[c].into()
    }
}

impl<'s, T: Scalar> Selection<'s, T> {
    #[inline(always)]
    fn row(&self, i: usize) -> Row<'s, T> {
        let r = i * self.len..(i + 1) * self.len;
        Row {
            a: &self.angle[r.clone()],
            ac: &self.angle_center[r.clone()],
            d: &self.dist[r.clone()],
            dc: &self.dist_center[r],
        }
    }

    #[inline(always)]
    fn argmin(
        &self,
        n: usize,
        best: &mut [usize],
        best_value: &mut [f64],
        value: impl Fn(&Row<T>, usize) -> f64,
    ) {
        let len = self.len;
        let (best, best_value) = (&mut best[..len], &mut best_value[..len]);
        let row = self.row(0);
        for c in 0..len {
            best[c] = 0;
            best_value[c] = value(&row, c);
        }
        for i in 1..n {
            let row = self.row(i);
            for c in 0..len {
                let v = value(&row, c);
                if v < best_value[c] {
                    best[c] = i;
                    best_value[c] = v;
                }
            }
        }
    }

    /// Runs the DDF argmin and the three smoothing-level argmins in one pass,
    /// then leaves the ACWDDF choice in `best[..len]`. `combine(angle, dist)`
    /// is the smoother's ordering value from its two weighted sums.
    #[inline(always)]
    fn acwddf(
        &self,
        n: usize,
        params: &AcwddfParams,
        best: &mut [usize],
        best_value: &mut [f64],
        combine: impl Fn(f64, f64) -> f64,
    ) {
        let len = self.len;
        let [w0, w1, w2]: [f64; 3] =
            core::array::from_fn(|m| (n + 2 - 2 * (params.lambda + m)) as f64);
        let (b0, rest) = best.split_at_mut(len);
        let (b1, rest) = rest.split_at_mut(len);
        let (b2, rest) = rest.split_at_mut(len);
        let b3 = &mut rest[..len];
        let (v0, rest) = best_value.split_at_mut(len);
        let (v1, rest) = rest.split_at_mut(len);
        let (v2, rest) = rest.split_at_mut(len);
        let v3 = &mut rest[..len];
        for i in 0..n {
            let row = self.row(i);
            for c in 0..len {
                let (a, ac, d, dc) = (row.a(c), row.ac(c), row.d[c], row.dc[c]);
                let cw = |w: f64| combine(center_weighted(a, ac, w), center_weighted(d, dc, w));
                let (x0, x1, x2, x3) = (a * d, cw(w0), cw(w1), cw(w2));
                if i == 0 || x0 < v0[c] {
                    b0[c] = i;
                    v0[c] = x0;
                }
                if i == 0 || x1 < v1[c] {
                    b1[c] = i;
                    v1[c] = x1;
                }
                if i == 0 || x2 < v2[c] {
                    b2[c] = i;
                    v2[c] = x2;
                }
                if i == 0 || x3 < v3[c] {
                    b3[c] = i;
                    v3[c] = x3;
                }
            }
        }
        let center = n / 2;
        for c in 0..len {
            let mut total = 0.0;
            for y in [b1[c], b2[c], b3[c]] {
                total += Into::<f64>::into(self.angle_center[y * len + c])
                    * self.dist_center[y * len + c];
            }
            let switch_to_ddf = total > params.threshold;
            if !switch_to_ddf {
                b0[c] = center;
            }
        }
    }

    #[inline(always)]
    fn ddf(&self, n: usize, best: &mut [usize], best_value: &mut [f64]) {
        self.argmin(n, best, best_value, |r, c| r.a(c) * r.d[c]);
    }

    #[inline(always)]
    fn center_weighted(
        &self,
        n: usize,
        weight: f64,
        smoother: Smoother,
        best: &mut [usize],
        best_value: &mut [f64],
    ) {
        match smoother {
            Smoother::Cwddf => self.argmin(n, best, best_value, |r, c| {
                center_weighted(r.a(c), r.ac(c), weight) * center_weighted(r.d[c], r.dc[c], weight)
            }),
            Smoother::Cwvmf => self.argmin(n, best, best_value, |r, c| {
                center_weighted(r.d[c], r.dc[c], weight)
            }),
        }
    }
}

/// A filter bound to one image, ready to produce any range of output rows.
///
/// [`FilterEngine::filter_rows`] keeps its buffers per call and only reads
/// the engine, so disjoint row ranges can be filtered from different
/// threads.
pub struct FilterEngine<'a> {
    img: &'a RasterImage,
    spec: FilterSpec,
    width: usize,
    /// Source row and column of each padded row and column.
    row_map: Vec<usize>,
    col_map: Vec<usize>,
    /// `(row, column)` of each window position within the window.
    positions: Vec<(usize, usize)>,
    pairs: Vec<(usize, usize)>,
}

impl<'a> FilterEngine<'a> {
    pub fn new(img: &'a RasterImage, spec: &FilterSpec, policy: BorderPolicy) -> Result<Self> {
        spec.validate()?;
        let side = spec.side;
        let half = side / 2;
        let width = img.cols() + 2 * half;
        let (rows, cols) = img.dimensions();
        let resolve = |len: usize| move |p: usize| policy.resolve(p as isize - half as isize, len);
        let row_map = (0..rows + 2 * half).map(resolve(rows)).collect();
        let col_map = (0..width).map(resolve(cols)).collect();
        let n = side * side;
        let positions = (0..n).map(|i| (i / side, i % side)).collect();
        let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        Ok(FilterEngine {
            img,
            spec: *spec,
            width,
            row_map,
            col_map,
            positions,
            pairs,
        })
    }

    pub fn spec(&self) -> &FilterSpec {
        &self.spec
    }

    /// Filters the whole image.
    pub fn run(&self) -> Result<RasterImage> {
        let (rows, cols) = self.img.dimensions();
        let mut out = vec![ColorVector::BLACK; rows * cols];
        self.filter_rows(0..rows, &mut out)?;
        RasterImage::new(rows, cols, out)
    }

    /// Writes output rows `rows` (0-based) into `out`, which must hold
    /// exactly `rows.len() * cols` pixels.
    pub fn filter_rows(&self, rows: Range<usize>, out: &mut [ColorVector]) -> Result<()> {
        let cols = self.img.cols();
        if rows.end > self.img.rows() || rows.start > rows.end {
            return Err(Error::param("rows", "row range outside the image"));
        }
        let expected = rows.len() * cols;
        if out.len() != expected {
            return Err(Error::PixelCount {
                expected,
                found: out.len(),
            });
        }
        if self.spec.family == FilterFamily::Identity {
            out.copy_from_slice(self.img.row_range(rows));
            return Ok(());
        }
        let order = self.spec.order;
        kernel::with_angular!(self.spec.strategy, |angle| {
            kernel::with_norm!(order, |norm| self.rows_with(
                angle,
                Raw(norm),
                rows.clone(),
                out
            ))
        });
        Ok(())
    }

    fn rows_with<A, L>(&self, angle: A, dist: L, rows: Range<usize>, out: &mut [ColorVector])
    where
        A: PairKernel,
        L: PairKernel<Scalar = f64>,
    {
        let cols = self.img.cols();
        let side = self.spec.side;
        let n = self.positions.len();
        let center = n / 2;
        let family = self.spec.family;
        let (needs_angle, needs_dist) = (family.is_directional(), family.uses_distance());
        let needs_center = matches!(family, FilterFamily::Cwddf { .. } | FilterFamily::Acwddf(_));
        let mut angle_ring = needs_angle.then(|| Ring::new(side, self.width));
        let mut dist_ring = needs_dist.then(|| Ring::new(side, self.width));
        let mut offsets = vec![0; n];
        let mut angle_sums = Sums::<A::Scalar>::new(n, cols);
        let mut dist_sums = Sums::<f64>::new(n, cols);
        let mut best = vec![0; 4 * TILE];
        let mut best_value = vec![0.0; 4 * TILE];

        for (row_out, r) in out.chunks_exact_mut(cols).zip(rows) {
            for pr in r..r + side {
                if let Some(ring) = angle_ring.as_mut() {
                    ring.load(&angle, self, pr);
                }
                if let Some(ring) = dist_ring.as_mut() {
                    ring.load(&dist, self, pr);
                }
            }
            for (o, &(dy, dx)) in offsets.iter_mut().zip(&self.positions) {
                *o = (r + dy) % side * self.width + dx;
            }
            for (t, tile_out) in row_out.chunks_mut(TILE).enumerate() {
                let base = t * TILE;
                let len = tile_out.len();
                if let Some(ring) = angle_ring.as_ref() {
                    self.accumulate(
                        angle,
                        ring,
                        &offsets,
                        base,
                        len,
                        &mut angle_sums.total,
                        needs_center.then_some(&mut angle_sums.to_center[..]),
                    );
                }
                if let Some(ring) = dist_ring.as_ref() {
                    self.accumulate(
                        dist,
                        ring,
                        &offsets,
                        base,
                        len,
                        &mut dist_sums.total,
                        needs_center.then_some(&mut dist_sums.to_center[..]),
                    );
                }

                let sel = Selection {
                    len,
                    angle: &angle_sums.total,
                    dist: &dist_sums.total,
                    angle_center: &angle_sums.to_center,
                    dist_center: &dist_sums.to_center,
                };
                let chosen = &mut best[..len];
                match family {
                    FilterFamily::Identity => chosen.fill(center),
                    FilterFamily::Vmf => sel.argmin(n, chosen, &mut best_value, |r, c| r.d[c]),
                    FilterFamily::Bvdf => sel.argmin(n, chosen, &mut best_value, |r, c| r.a(c)),
                    FilterFamily::Ddf => sel.ddf(n, chosen, &mut best_value),
                    FilterFamily::Cwddf { k, smoother } => sel.center_weighted(
                        n,
                        (n + 2 - 2 * k) as f64,
                        smoother,
                        chosen,
                        &mut best_value,
                    ),
                    FilterFamily::Acwddf(params) => match params.smoother {
                        Smoother::Cwddf => {
                            sel.acwddf(n, &params, &mut best, &mut best_value, |a, d| a * d)
                        }
                        Smoother::Cwvmf => {
                            sel.acwddf(n, &params, &mut best, &mut best_value, |_, d| d)
                        }
                    },
                }
                let col0 = t * TILE;
                for (c, (px, &idx)) in tile_out.iter_mut().zip(&best[..len]).enumerate() {
                    let (dy, dx) = self.positions[idx];
                    let src = self.img.row(self.row_map[r + dy]);
                    *px = src[self.col_map[col0 + c + dx]];
                }
            }
        }
    }

    /// For the `cols` windows whose top-left corners sit at padded column
    /// `base`, fills `sums[i * cols + c]` with `sum_j d(x_i, x_j)` and
    /// optionally `to_center[i * cols + c]` with `d(x_i, x_d)`. Window
    /// position `i` is found at `offsets[i]` within the ring.
    #[allow(clippy::too_many_arguments)]
    fn accumulate<K: PairKernel>(
        &self,
        kernel: K,
        planes: &Ring<K::Scalar>,
        offsets: &[usize],
        base: usize,
        cols: usize,
        sums: &mut [K::Scalar],
        to_center: Option<&mut [K::Scalar]>,
    ) {
        let n = offsets.len();
        let center = n / 2;
        let sums = &mut sums[..n * cols];
        sums.fill(K::Scalar::default());
        let mut to_center = to_center.map(|tc| &mut tc[..n * cols]);
        if let Some(tc) = to_center.as_deref_mut() {
            tc.fill(K::Scalar::default());
        }
        for &(i, j) in &self.pairs {
            let a = base + offsets[i];
            let b = base + offsets[j];
            let (ax, ay, az) = (
                &planes.x[a..a + cols],
                &planes.y[a..a + cols],
                &planes.z[a..a + cols],
            );
            let (bx, by, bz) = (
                &planes.x[b..b + cols],
                &planes.y[b..b + cols],
                &planes.z[b..b + cols],
            );
            let (head, tail) = sums.split_at_mut(j * cols);
            let si = &mut head[i * cols..(i + 1) * cols];
            let sj = &mut tail[..cols];
            let partner = if j == center {
                Some(i)
            } else if i == center {
                Some(j)
            } else {
                None
            };
            let fa = ax.iter().zip(ay).zip(az).map(|((x, y), z)| [*x, *y, *z]);
            let fb = bx.iter().zip(by).zip(bz).map(|((x, y), z)| [*x, *y, *z]);
            let acc = si.iter_mut().zip(sj.iter_mut());
            match (partner, to_center.as_deref_mut()) {
                (Some(p), Some(tc)) => {
                    let tp = &mut tc[p * cols..(p + 1) * cols];
                    for (((a, b), (si, sj)), t) in fa.zip(fb).zip(acc).zip(tp) {
                        let d = kernel.eval(a, b);
                        *si += d;
                        *sj += d;
                        *t = d;
                    }
                }
                _ => {
                    for ((a, b), (si, sj)) in fa.zip(fb).zip(acc) {
                        let d = kernel.eval(a, b);
                        *si += d;
                        *sj += d;
                    }
                }
            }
        }
    }
}
