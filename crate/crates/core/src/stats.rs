//! Significance testing: Wilcoxon signed-rank, Holm-Bonferroni, and ranks.
//!
//! Zero differences are dropped before ranking, tied magnitudes share their
//! average rank, and all tests are two-sided. Up to [`EXACT_MAX_N`] nonzero
//! differences the null distribution is enumerated exactly (with ties, by
//! counting over doubled ranks); beyond that a tie-corrected normal
//! approximation with a 0.5 continuity correction is used.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::measure::Measure;

pub const EXACT_MAX_N: usize = 25;
pub const MIN_NONZERO: usize = 5;
pub const DEFAULT_ALPHA: f64 = 0.05;
/// Differences (and magnitudes) closer than this count as equal.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WilcoxonOutcome {
    Tested {
        p_value: f64,
        /// Sum of ranks of the positive differences.
        w_plus: f64,
        n: usize,
        exact: bool,
    },
    /// Every paired difference is zero.
    NoDifference,
    /// Fewer than [`MIN_NONZERO`] nonzero differences.
    InsufficientData { n: usize },
}

impl WilcoxonOutcome {
    /// p-value to feed into multiple-comparison correction; untestable
    /// comparisons count as `1`.
    pub fn p_value(&self) -> f64 {
        match self {
            WilcoxonOutcome::Tested { p_value, .. } => *p_value,
            _ => 1.0,
        }
    }
}

/// 1-based ranks of `values` with ties (within `tol`) averaged.
pub fn average_ranks(values: &[f64], tol: f64) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] - values[order[end - 1]] <= tol {
            end += 1;
        }
        // positions start..end hold ranks start+1 ..= end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Nonzero differences and their signed ranks, as used by the test.
pub fn signed_ranks(a: &[f64], b: &[f64]) -> Result<(Vec<f64>, Vec<bool>)> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|d| d.abs() > TIE_TOLERANCE)
        .collect();
    let magnitudes: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = average_ranks(&magnitudes, TIE_TOLERANCE);
    let positive = diffs.iter().map(|&d| d > 0.0).collect();
    Ok((ranks, positive))
}

/// Two-sided Wilcoxon signed-rank test on paired samples.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonOutcome> {
    let (ranks, positive) = signed_ranks(a, b)?;
    let n = ranks.len();
    if n == 0 {
        return Ok(WilcoxonOutcome::NoDifference);
    }
    if n < MIN_NONZERO {
        return Ok(WilcoxonOutcome::InsufficientData { n });
    }
    let w_plus: f64 = ranks
        .iter()
        .zip(&positive)
        .filter(|(_, &p)| p)
        .map(|(r, _)| r)
        .sum();
    let (p_value, exact) = if n <= EXACT_MAX_N {
        (exact_p_value(&ranks, w_plus), true)
    } else {
        (normal_p_value(&ranks, w_plus), false)
    };
    Ok(WilcoxonOutcome::Tested {
        p_value,
        w_plus,
        n,
        exact,
    })
}

/// Exact two-sided p-value: `2·min(P(W ≤ w), P(W ≥ w))` under the null of
/// independent fair signs. Ranks are doubled so averaged ties stay integral.
fn exact_p_value(ranks: &[f64], w_plus: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    let mut counts = vec![0f64; total + 1];
    counts[0] = 1.0;
    let mut reach = 0;
    for &r in &doubled {
        for s in (0..=reach).rev() {
            let c = counts[s];
            if c != 0.0 {
                counts[s + r] += c;
            }
        }
        reach += r;
    }
    let observed = (2.0 * w_plus).round() as usize;
    let all = 2f64.powi(ranks.len() as i32);
    let lower: f64 = counts[..=observed].iter().sum();
    let upper: f64 = counts[observed..].iter().sum();
    (2.0 * lower.min(upper) / all).min(1.0)
}

fn normal_p_value(ranks: &[f64], w_plus: f64) -> f64 {
    let n = ranks.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let mut var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    // tie correction: Σ (t³ - t) / 48 over groups of equal ranks
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        var -= (t * t * t - t) / 48.0;
        i = j;
    }
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((w_plus - mean).abs() - 0.5).max(0.0) / var.sqrt();
    erfc(z / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
}

/// Holm step-down: sort ascending, reject while `p_(i) <= α / (m - i + 1)`,
/// stop at the first failure. Flags come back in input order.
pub fn holm_bonferroni(ps: &[f64], alpha: f64) -> Result<Vec<bool>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be in (0, 1), got {alpha}"
        )));
    }
    if ps.is_empty() {
        return Err(Error::InvalidParameter("no p-values to correct".into()));
    }
    let m = ps.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| ps[a].total_cmp(&ps[b]));
    let mut reject = vec![false; m];
    for (k, &idx) in order.iter().enumerate() {
        if ps[idx] <= alpha / (m - k) as f64 {
            reject[idx] = true;
        } else {
            break;
        }
    }
    Ok(reject)
}

/// Per-dataset ranks of every measure, and the mean over datasets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub measures: Vec<Measure>,
    pub datasets: Vec<String>,
    /// `ranks[d][m]`: rank of measure `m` on dataset `d` (1 = lowest error).
    pub ranks: Vec<Vec<f64>>,
    pub average: Vec<f64>,
}

/// Rank measures by ascending mean error within each dataset, ties sharing
/// the average rank.
pub fn rank_measures(
    datasets: &[String],
    measures: &[Measure],
    error: impl Fn(&str, Measure) -> Option<f64>,
) -> Result<RankTable> {
    let mut ranks = Vec::with_capacity(datasets.len());
    for d in datasets {
        let errs = measures
            .iter()
            .map(|&m| {
                error(d, m).ok_or_else(|| Error::MissingCell {
                    dataset: d.clone(),
                    measure: m.to_string(),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        ranks.push(average_ranks(&errs, 1e-12));
    }
    let average = (0..measures.len())
        .map(|m| {
            if ranks.is_empty() {
                f64::NAN
            } else {
                ranks.iter().map(|r| r[m]).sum::<f64>() / ranks.len() as f64
            }
        })
        .collect();
    Ok(RankTable {
        measures: measures.to_vec(),
        datasets: datasets.to_vec(),
        ranks,
        average,
    })
}

/// One Holm-corrected pairwise comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub a: Measure,
    pub b: Measure,
    pub test: WilcoxonOutcome,
    pub rejected: bool,
}

/// Whether the lowest-error measure of a dataset beats all others.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestMeasureVerdict {
    pub dataset: String,
    pub best: Measure,
    pub comparisons: Vec<Comparison>,
    pub significant: bool,
}

/// Test the lowest-mean-error measure against every other one on matched
/// per-fold accuracies, Holm-corrected across those comparisons.
///
/// `fold_errors` holds one entry per measure, each with the same number of
/// matched fold error ratios.
pub fn best_measure_significance(
    dataset: &str,
    fold_errors: &[(Measure, Vec<f64>)],
    alpha: f64,
) -> Result<BestMeasureVerdict> {
    if fold_errors.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "dataset {dataset}: no measures"
        )));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;
    let mut best = 0;
    for (i, (_, errs)) in fold_errors.iter().enumerate() {
        if mean(errs) < mean(&fold_errors[best].1) {
            best = i;
        }
    }
    let acc = |v: &[f64]| v.iter().map(|e| 1.0 - e).collect::<Vec<_>>();
    let best_acc = acc(&fold_errors[best].1);
    let mut comparisons = Vec::new();
    for (i, (m, errs)) in fold_errors.iter().enumerate() {
        if i == best {
            continue;
        }
        comparisons.push(Comparison {
            a: fold_errors[best].0,
            b: *m,
            test: wilcoxon_signed_rank(&best_acc, &acc(errs))?,
            rejected: false,
        });
    }
    let significant = if comparisons.is_empty() {
        false
    } else {
        let ps: Vec<f64> = comparisons.iter().map(|c| c.test.p_value()).collect();
        let flags = holm_bonferroni(&ps, alpha)?;
        for (c, f) in comparisons.iter_mut().zip(&flags) {
            c.rejected = *f;
        }
        flags.iter().all(|&f| f)
    };
    Ok(BestMeasureVerdict {
        dataset: dataset.to_string(),
        best: fold_errors[best].0,
        comparisons,
        significant,
    })
}

/// All-pairs comparison on matched per-dataset mean accuracies, Holm-corrected
/// over the whole family. `mean_errors[m]` lists one value per dataset.
pub fn pairwise_significance(
    measures: &[Measure],
    mean_errors: &[Vec<f64>],
    alpha: f64,
) -> Result<Vec<Comparison>> {
    let mut out = Vec::new();
    for i in 0..measures.len() {
        for j in i + 1..measures.len() {
            let a: Vec<f64> = mean_errors[i].iter().map(|e| 1.0 - e).collect();
            let b: Vec<f64> = mean_errors[j].iter().map(|e| 1.0 - e).collect();
            out.push(Comparison {
                a: measures[i],
                b: measures[j],
                test: wilcoxon_signed_rank(&a, &b)?,
                rejected: false,
            });
        }
    }
    if !out.is_empty() {
        let ps: Vec<f64> = out.iter().map(|c| c.test.p_value()).collect();
        for (c, f) in out.iter_mut().zip(holm_bonferroni(&ps, alpha)?) {
            c.rejected = f;
        }
    }
    Ok(out)
}
