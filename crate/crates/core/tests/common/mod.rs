//! Slow reference implementations shared by the test targets.

use std::collections::HashMap;

/// Admissible cells of the windowed recursion, written out directly.
pub fn in_band(i: usize, j: usize, m: usize, n: usize, w: usize) -> bool {
    let center = |r: usize| {
        let exact = r as f64 * n as f64 / m as f64;
        ((exact + 0.5).floor() as usize).clamp(1, n)
    };
    let c = center(i);
    let prev = if i > 1 { center(i - 1) } else { 0 };
    let lo = (c as i64 - w as i64).max(1).min(prev as i64 + 1);
    (lo..=(c + w) as i64).contains(&(j as i64))
}

pub fn dtw_memo(x: &[f64], y: &[f64], w: usize) -> f64 {
    fn go(
        i: usize,
        j: usize,
        x: &[f64],
        y: &[f64],
        w: usize,
        memo: &mut HashMap<(usize, usize), f64>,
    ) -> f64 {
        if i == 0 && j == 0 {
            return 0.0;
        }
        if i == 0 || j == 0 || !in_band(i, j, x.len(), y.len(), w) {
            return f64::INFINITY;
        }
        if let Some(&v) = memo.get(&(i, j)) {
            return v;
        }
        let c = (x[i - 1] - y[j - 1]).powi(2);
        let best = [
            go(i - 1, j - 1, x, y, w, memo),
            go(i - 1, j, x, y, w, memo),
            go(i, j - 1, x, y, w, memo),
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
        let v = c + best;
        memo.insert((i, j), v);
        v
    }
    go(x.len(), y.len(), x, y, w, &mut HashMap::new())
}

pub fn edr_memo(x: &[f64], y: &[f64], eps: f64) -> f64 {
    fn go(
        i: usize,
        j: usize,
        x: &[f64],
        y: &[f64],
        eps: f64,
        memo: &mut HashMap<(usize, usize), u32>,
    ) -> u32 {
        if i == 0 {
            return j as u32;
        }
        if j == 0 {
            return i as u32;
        }
        if let Some(&v) = memo.get(&(i, j)) {
            return v;
        }
        let sub = u32::from((x[i - 1] - y[j - 1]).abs() > eps);
        let v = (go(i - 1, j - 1, x, y, eps, memo) + sub)
            .min(go(i - 1, j, x, y, eps, memo) + 1)
            .min(go(i, j - 1, x, y, eps, memo) + 1);
        memo.insert((i, j), v);
        v
    }
    f64::from(go(x.len(), y.len(), x, y, eps, &mut HashMap::new()))
}

pub fn twed_memo(x: &[f64], y: &[f64], nu: f64, lambda: f64) -> f64 {
    // padded so that index 0 is the zero sample before the start
    let xp: Vec<f64> = std::iter::once(0.0).chain(x.iter().copied()).collect();
    let yp: Vec<f64> = std::iter::once(0.0).chain(y.iter().copied()).collect();
    fn go(
        i: usize,
        j: usize,
        x: &[f64],
        y: &[f64],
        nu: f64,
        lambda: f64,
        memo: &mut HashMap<(usize, usize), f64>,
    ) -> f64 {
        if i == 0 && j == 0 {
            return 0.0;
        }
        if i == 0 || j == 0 {
            return f64::INFINITY;
        }
        if let Some(&v) = memo.get(&(i, j)) {
            return v;
        }
        let gap = (i as f64 - j as f64).abs();
        let a = go(i - 1, j - 1, x, y, nu, lambda, memo)
            + (x[i] - y[j]).abs()
            + (x[i - 1] - y[j - 1]).abs()
            + 2.0 * nu * gap;
        let b = go(i - 1, j, x, y, nu, lambda, memo) + (x[i] - x[i - 1]).abs() + nu + lambda;
        let c = go(i, j - 1, x, y, nu, lambda, memo) + (y[j] - y[j - 1]).abs() + nu + lambda;
        let v = a.min(b).min(c);
        memo.insert((i, j), v);
        v
    }
    go(x.len(), y.len(), &xp, &yp, nu, lambda, &mut HashMap::new())
}

/// p-value by enumerating all sign patterns of the nonzero differences.
pub fn enumerated_p(a: &[f64], b: &[f64]) -> Option<f64> {
    let d: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|v| *v != 0.0)
        .collect();
    let n = d.len();
    if n < 5 {
        return None;
    }
    // average rank by counting smaller and equal magnitudes
    let rank: Vec<f64> = d
        .iter()
        .map(|v| {
            let less = d.iter().filter(|u| u.abs() < v.abs()).count() as f64;
            let equal = d.iter().filter(|u| u.abs() == v.abs()).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect();
    let observed: f64 = d
        .iter()
        .zip(&rank)
        .filter(|(v, _)| **v > 0.0)
        .map(|(_, r)| r)
        .sum();
    let (mut le, mut ge) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        let w: f64 = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| rank[k]).sum();
        if w <= observed + 1e-9 {
            le += 1;
        }
        if w >= observed - 1e-9 {
            ge += 1;
        }
    }
    let total = (1u64 << n) as f64;
    Some((2.0 * (le.min(ge) as f64) / total).min(1.0))
}
