//! Elastic dissimilarities: DTW, EDR, TWED and MJC.
//!
//! The dynamic-programming kernels keep two rolling rows of the
//! `(M+1) x (N+1)` accumulation grid, so memory is `O(N)` per call and every
//! call owns its buffers. Row index `i` runs over `x`, column index `j` over
//! `y`, both 1-based as in the recurrences; sample `x_i` is `x[i - 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// Minimum of two non-NaN values; cheaper than `f64::min` in the inner loops.
#[inline(always)]
fn min2(a: f64, b: f64) -> f64 {
    if a < b {
        a
    } else {
        b
    }
}

/// Inclusive column range `(lo, hi)` of the DTW band for each row `1..=M`.
///
/// Row `i` is centered on `i' = round(i·N/M)` (half rounds up) and spans
/// `max(1, i'-ω) ..= min(N, i'+ω)`. When `N > M` consecutive centers can be
/// more than one column apart; the row start is then pulled back to one past
/// the previous row's center, so an admissible path always exists and bands
/// stay nested as `ω` grows. For `M = N` that adjustment never triggers.
pub fn dtw_band(m: usize, n: usize, window: usize) -> Vec<(usize, usize)> {
    let mut band = Vec::with_capacity(m);
    let mut prev_center = 0;
    for i in 1..=m {
        let center = ((2 * i * n + m) / (2 * m)).clamp(1, n);
        let lo = center.saturating_sub(window).max(1).min(prev_center + 1);
        let hi = (center + window).min(n);
        band.push((lo, hi));
        prev_center = center;
    }
    band
}

/// Dynamic time warping with a Sakoe-Chiba style window `ω`.
///
/// Local cost is `(x_i - y_j)²`; the result is the total accumulated cost
/// `D(M, N)` without path-length normalization. `window >= N` is the
/// unconstrained DTW. With `M = N` and `window = 0` the value equals the
/// squared Euclidean distance.
pub fn dtw(x: &[f64], y: &[f64], window: usize) -> f64 {
    let (m, n) = (x.len(), y.len());
    if m == 0 || n == 0 {
        return f64::INFINITY;
    }
    let band = dtw_band(m, n, window);
    let mut prev = vec![f64::INFINITY; n + 1];
    let mut cur = vec![f64::INFINITY; n + 1];
    prev[0] = 0.0;
    // stale range held by `cur` (row i - 2)
    let mut stale = (0usize, 0usize);
    let mut last = (0usize, 0usize);
    for (i, &(lo, hi)) in band.iter().enumerate() {
        cur[stale.0..=stale.1].fill(f64::INFINITY);
        let xi = x[i];
        // cell (i, lo - 1) is outside the band
        let mut left = f64::INFINITY;
        for j in lo..=hi {
            let d = xi - y[j - 1];
            left = d * d + min2(left, min2(prev[j], prev[j - 1]));
            cur[j] = left;
        }
        std::mem::swap(&mut prev, &mut cur);
        stale = last;
        last = (lo, hi);
    }
    let result = prev[n];
    debug_assert!(result.is_finite(), "DTW band left no admissible path");
    result
}

/// Full DTW accumulation matrix, row-major `(M+1) x (N+1)`, with `+inf` for
/// cells outside the band. Meant for inspection and plotting; [`dtw`] is the
/// kernel used for classification.
pub fn dtw_cost_matrix(x: &[f64], y: &[f64], window: usize) -> Vec<f64> {
    let (m, n) = (x.len(), y.len());
    let w = n + 1;
    let mut d = vec![f64::INFINITY; (m + 1) * w];
    d[0] = 0.0;
    for (i, (lo, hi)) in dtw_band(m, n, window).into_iter().enumerate() {
        let i = i + 1;
        for j in lo..=hi {
            let c = (x[i - 1] - y[j - 1]).powi(2);
            let best = d[i * w + j - 1]
                .min(d[(i - 1) * w + j])
                .min(d[(i - 1) * w + j - 1]);
            d[i * w + j] = c + best;
        }
    }
    d
}

/// Backtrack an optimal warping path from a matrix produced by
/// [`dtw_cost_matrix`]. Returns 1-based `(i, j)` pairs from `(1, 1)` to
/// `(M, N)`.
pub fn warping_path(matrix: &[f64], m: usize, n: usize) -> Vec<(usize, usize)> {
    let w = n + 1;
    let at = |i: usize, j: usize| matrix[i * w + j];
    let mut path = vec![(m, n)];
    let (mut i, mut j) = (m, n);
    while (i, j) != (1, 1) {
        let candidates = [(i - 1, j - 1), (i - 1, j), (i, j - 1)];
        let (ni, nj) = candidates
            .into_iter()
            .filter(|&(a, b)| a >= 1 && b >= 1)
            .min_by(|&(a, b), &(c, d)| at(a, b).total_cmp(&at(c, d)))
            .unwrap_or((1, 1));
        i = ni;
        j = nj;
        path.push((i, j));
    }
    path.reverse();
    path
}

/// Edit distance on real sequences with match threshold `ε`.
///
/// Two samples match when `|x_i - y_j| <= ε`. The value is an integer count
/// of edits in `[|M - N|, max(M, N)]`.
pub fn edr(x: &[f64], y: &[f64], epsilon: f64) -> f64 {
    let (m, n) = (x.len(), y.len());
    let mut prev: Vec<u32> = (0..=n as u32).collect();
    let mut cur = vec![0u32; n + 1];
    for i in 1..=m {
        let mut left = i as u32;
        cur[0] = left;
        let xi = x[i - 1];
        for j in 1..=n {
            let diag = prev[j - 1];
            let edit = 1 + left.min(prev[j]).min(diag);
            // branch-free select: match outcomes are unpredictable
            let mask = 0u32.wrapping_sub(u32::from((xi - y[j - 1]).abs() <= epsilon));
            left = edit ^ ((edit ^ diag) & mask);
            cur[j] = left;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    f64::from(prev[n])
}

/// Time-warped edit distance for uniformly sampled series.
///
/// `nu` is the stiffness, `lambda` the deletion penalty, and the local cost
/// is `|a - b|`. Samples before the start are taken as `x_0 = y_0 = 0`.
/// The result is a metric for `nu > 0`.
pub fn twed(x: &[f64], y: &[f64], nu: f64, lambda: f64) -> Result<f64> {
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "TWED stiffness must be > 0, got {nu}"
        )));
    }
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "TWED penalty must be >= 0, got {lambda}"
        )));
    }
    Ok(twed_unchecked(x, y, nu, lambda))
}

pub(crate) fn twed_unchecked(x: &[f64], y: &[f64], nu: f64, lambda: f64) -> f64 {
    let n = y.len();
    let del_y: Vec<f64> = (0..n)
        .map(|j| (y[j] - if j > 0 { y[j - 1] } else { 0.0 }).abs() + nu + lambda)
        .collect();
    let mut prev = vec![f64::INFINITY; n + 1];
    let mut cur = vec![f64::INFINITY; n + 1];
    prev[0] = 0.0;
    // |x_{i-1} - y_{j-1}| for the previous row, with x_0 = y_0 = 0
    let mut dprev = vec![0.0; n + 1];
    let mut dcur = vec![0.0; n + 1];
    for j in 1..=n {
        dprev[j] = y[j - 1].abs();
    }
    let two_nu = 2.0 * nu;
    let mut xp = 0.0;
    for (k, &xi) in x.iter().enumerate() {
        let i = k + 1;
        let del_x = (xi - xp).abs() + nu + lambda;
        dcur[0] = xi.abs();
        let mut left = f64::INFINITY;
        cur[0] = left;
        for j in 1..=n {
            let dxy = (xi - y[j - 1]).abs();
            dcur[j] = dxy;
            let matched = prev[j - 1] + dxy + dprev[j - 1] + two_nu * i.abs_diff(j) as f64;
            left = min2(min2(matched, prev[j] + del_x), left + del_y[j - 1]);
            cur[j] = left;
        }
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut dprev, &mut dcur);
        xp = xi;
    }
    prev[n]
}

/// [`edr`] for `K` thresholds at once. Each lane follows exactly the
/// single-threshold arithmetic; the lanes only share the sweep.
pub fn edr_batch<const K: usize>(x: &[f64], y: &[f64], epsilons: [f64; K]) -> [f64; K] {
    let n = y.len();
    let mut prev: Vec<[u32; K]> = (0..=n as u32).map(|j| [j; K]).collect();
    let mut cur = vec![[0u32; K]; n + 1];
    for (k, &xi) in x.iter().enumerate() {
        let mut left = [k as u32 + 1; K];
        cur[0] = left;
        for j in 1..=n {
            let d = (xi - y[j - 1]).abs();
            let (diag, up) = (prev[j - 1], prev[j]);
            for l in 0..K {
                let edit = 1 + left[l].min(up[l]).min(diag[l]);
                let mask = 0u32.wrapping_sub(u32::from(d <= epsilons[l]));
                left[l] = edit ^ ((edit ^ diag[l]) & mask);
            }
            cur[j] = left;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[n].map(f64::from)
}

/// [`twed`] for one stiffness and `K` penalties at once, lane by lane
/// identical to the single-parameter kernel. Parameters are not validated.
pub fn twed_batch<const K: usize>(x: &[f64], y: &[f64], nu: f64, lambdas: [f64; K]) -> [f64; K] {
    let n = y.len();
    let step_y: Vec<f64> = (0..n)
        .map(|j| (y[j] - if j > 0 { y[j - 1] } else { 0.0 }).abs() + nu)
        .collect();
    let mut prev = vec![[f64::INFINITY; K]; n + 1];
    let mut cur = vec![[f64::INFINITY; K]; n + 1];
    prev[0] = [0.0; K];
    let mut dprev = vec![0.0; n + 1];
    let mut dcur = vec![0.0; n + 1];
    for j in 1..=n {
        dprev[j] = y[j - 1].abs();
    }
    let two_nu = 2.0 * nu;
    let mut xp = 0.0;
    for (k, &xi) in x.iter().enumerate() {
        let i = k + 1;
        let step_x = (xi - xp).abs() + nu;
        dcur[0] = xi.abs();
        let mut left = [f64::INFINITY; K];
        cur[0] = left;
        for j in 1..=n {
            let dxy = (xi - y[j - 1]).abs();
            dcur[j] = dxy;
            let gap = two_nu * i.abs_diff(j) as f64;
            let (diag, up) = (prev[j - 1], prev[j]);
            for l in 0..K {
                let matched = diag[l] + dxy + dprev[j - 1] + gap;
                let drop_x = up[l] + (step_x + lambdas[l]);
                let drop_y = left[l] + (step_y[j - 1] + lambdas[l]);
                left[l] = min2(min2(matched, drop_x), drop_y);
            }
            cur[j] = left;
        }
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut dprev, &mut dcur);
        xp = xi;
    }
    prev[n]
}

/// Which series a jump starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    X,
    Y,
}

/// One greedy jump of an MJC pass; indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub from: Side,
    pub source: usize,
    pub target: usize,
    pub cost: f64,
}

/// Minimum jump costs dissimilarity, `min(d_XY, d_YX)`.
///
/// Each directional pass jumps greedily from the current sample of one series
/// to the cheapest not-yet-passed sample of the other, paying
/// `(φΔ)² + (a - b)²` for a skip of `Δ` samples, then continues from the
/// other side. The advance cost is `φ = β·σ` with `σ = 1` for z-normalized
/// input, so `beta` is used directly. Very large `beta` forbids skipping and
/// the value becomes the squared Euclidean distance.
pub fn mjc(x: &[f64], y: &[f64], beta: f64) -> f64 {
    let xy = mjc_pass(x, y, beta, None);
    let yx = mjc_pass(y, x, beta, None);
    xy.min(yx)
}

/// Jumps of the cheaper directional pass, as used by [`mjc`]. Sides are
/// reported relative to the original `x`/`y`.
pub fn mjc_trace(x: &[f64], y: &[f64], beta: f64) -> (f64, Vec<Jump>) {
    let mut tx = Vec::new();
    let mut ty = Vec::new();
    let xy = mjc_pass(x, y, beta, Some(&mut tx));
    let yx = mjc_pass(y, x, beta, Some(&mut ty));
    if xy <= yx {
        (xy, tx)
    } else {
        let flipped = ty
            .into_iter()
            .map(|j| Jump {
                from: match j.from {
                    Side::X => Side::Y,
                    Side::Y => Side::X,
                },
                ..j
            })
            .collect();
        (yx, flipped)
    }
}

/// One directional pass starting at `a[0]`. Terminates as soon as the
/// jumping side is exhausted or no target remains on the other side; samples
/// left over at that point cost nothing.
fn mjc_pass(a: &[f64], b: &[f64], phi: f64, mut trace: Option<&mut Vec<Jump>>) -> f64 {
    let series = [a, b];
    // next unvisited position (0-based) on each side
    let mut pos = [0usize, 0usize];
    let mut side = 0usize;
    let mut total = 0.0;
    loop {
        let other = 1 - side;
        let (src, dst) = (series[side], series[other]);
        if pos[side] >= src.len() || pos[other] >= dst.len() {
            break;
        }
        let s = src[pos[side]];
        let mut best = f64::INFINITY;
        let mut best_delta = 0;
        for (delta, &t) in dst[pos[other]..].iter().enumerate() {
            let time = phi * delta as f64;
            let time = time * time;
            if time >= best {
                break;
            }
            let c = time + (s - t) * (s - t);
            if c < best {
                best = c;
                best_delta = delta;
            }
        }
        if let Some(trace) = trace.as_deref_mut() {
            trace.push(Jump {
                from: if side == 0 { Side::X } else { Side::Y },
                source: pos[side] + 1,
                target: pos[other] + best_delta + 1,
                cost: best,
            });
        }
        total += best;
        pos[side] += 1;
        pos[other] += best_delta + 1;
        side = other;
    }
    total
}

/// Random baseline: ignores the series and returns a uniform draw in `[0, 1)`.
pub fn random_measure(stream: &mut RandomStream) -> f64 {
    stream.draw_uniform()
}
