//! Lock-step, feature-based and model-based dissimilarities.
//!
//! The Lp family compares samples at identical positions. The Fourier and
//! autoregressive measures first map each series to a feature vector and then
//! take a Euclidean distance between features, so the features are meant to
//! be extracted once per series and reused.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// `(Σ |x_i - y_i|^n)^(1/n)`; `n = 2` is the Euclidean distance.
pub fn lp_distance(x: &[f64], y: &[f64], n: u32) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    match n {
        0 => Err(Error::InvalidParameter("Lp order must be >= 1".into())),
        1 => Ok(x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum()),
        2 => Ok(squared_euclidean(x, y).sqrt()),
        _ => {
            let sum: f64 = x
                .iter()
                .zip(y)
                .map(|(a, b)| (a - b).abs().powi(n as i32))
                .sum();
            Ok(sum.powf(1.0 / f64::from(n)))
        }
    }
}

/// Sum of squared differences over equal-length slices.
pub fn squared_euclidean(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Non-redundant half of an unnormalized forward DFT: bins `0..=M/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    coeffs: Vec<Complex64>,
    series_len: usize,
}

impl FourierSpectrum {
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Length `M` of the transformed series.
    pub fn series_len(&self) -> usize {
        self.series_len
    }

    /// Largest admissible coefficient count for [`fc_distance`].
    pub fn max_theta(&self) -> usize {
        self.series_len / 2
    }

    /// `Σ_k |X_k|²` over all `M` bins, rebuilt from the half spectrum via
    /// Hermitian symmetry. Equals `M · Σ x_i²` for a real input.
    pub fn full_energy(&self) -> f64 {
        let m = self.series_len;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let mirrored = k != 0 && !(m.is_multiple_of(2) && k == m / 2);
                let weight = if mirrored { 2.0 } else { 1.0 };
                weight * c.norm_sqr()
            })
            .sum()
    }
}

/// Unnormalized forward transform `X_k = Σ_t x_t e^{-2πikt/M}`.
pub fn dft(x: &[f64]) -> FourierSpectrum {
    let m = x.len();
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    if m > 0 {
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    }
    buf.truncate(m / 2 + 1);
    FourierSpectrum {
        coeffs: buf,
        series_len: m,
    }
}

/// Euclidean distance over the `theta` lowest non-DC coefficients (bins
/// `1..=theta`).
pub fn fc_distance(x: &FourierSpectrum, y: &FourierSpectrum, theta: usize) -> Result<f64> {
    if x.series_len != y.series_len {
        return Err(Error::LengthMismatch {
            left: x.series_len,
            right: y.series_len,
        });
    }
    if theta == 0 || theta > x.max_theta() {
        return Err(Error::InvalidParameter(format!(
            "theta must be in [1, {}], got {theta}",
            x.max_theta()
        )));
    }
    let sum: f64 = x.coeffs[1..=theta]
        .iter()
        .zip(&y.coeffs[1..=theta])
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    Ok(sum.sqrt())
}

/// AR coefficients `a_1..a_η` of `x_i ≈ Σ_j a_j x_{i-j}` (intercept dropped).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArCoefficients {
    coeffs: Vec<f64>,
}

impl ArCoefficients {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }
}

/// Biased (divide-by-M) autocovariance at lags `0..=max_lag` of the demeaned
/// series.
pub fn autocovariance(x: &[f64], max_lag: usize) -> Vec<f64> {
    let m = x.len();
    let mean = x.iter().sum::<f64>() / m as f64;
    let c: Vec<f64> = x.iter().map(|v| v - mean).collect();
    (0..=max_lag)
        .map(|lag| {
            if lag >= m {
                return 0.0;
            }
            c[..m - lag]
                .iter()
                .zip(&c[lag..])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / m as f64
        })
        .collect()
}

/// Yule-Walker estimate of order `order`, solved with the Levinson-Durbin
/// recursion.
///
/// A zero-variance (or constant-flagged) series yields all-zero
/// coefficients. If the prediction error vanishes before reaching `order`,
/// the higher-lag coefficients stay zero.
pub fn yule_walker(x: &[f64], order: usize) -> Result<ArCoefficients> {
    if order == 0 || order >= x.len() {
        return Err(Error::InvalidParameter(format!(
            "AR order must be in [1, {}), got {order}",
            x.len()
        )));
    }
    let r = autocovariance(x, order);
    let mut a = vec![0.0; order];
    if r[0] <= f64::EPSILON * x.iter().map(|v| v * v).sum::<f64>().max(1.0) {
        return Ok(ArCoefficients::new(a));
    }
    let mut err = r[0];
    let mut prev = vec![0.0; order];
    for k in 1..=order {
        let acc = r[k] - (1..k).map(|j| a[j - 1] * r[k - j]).sum::<f64>();
        let reflection = acc / err;
        prev[..k - 1].copy_from_slice(&a[..k - 1]);
        for j in 1..k {
            a[j - 1] = prev[j - 1] - reflection * prev[k - j - 1];
        }
        a[k - 1] = reflection;
        err *= 1.0 - reflection * reflection;
        if err <= r[0] * 1e-14 {
            break;
        }
    }
    Ok(ArCoefficients::new(a))
}

/// [`yule_walker`] honoring the constant flag set by z-normalization.
pub fn yule_walker_series(s: &TimeSeries, order: usize) -> Result<ArCoefficients> {
    if s.is_constant() {
        if order == 0 || order >= s.len() {
            return Err(Error::InvalidParameter(format!(
                "AR order must be in [1, {}), got {order}",
                s.len()
            )));
        }
        return Ok(ArCoefficients::new(vec![0.0; order]));
    }
    yule_walker(s.values(), order)
}

/// Euclidean distance between coefficient vectors of equal order.
pub fn ar_distance(a: &ArCoefficients, b: &ArCoefficients) -> Result<f64> {
    if a.order() != b.order() {
        return Err(Error::LengthMismatch {
            left: a.order(),
            right: b.order(),
        });
    }
    Ok(squared_euclidean(&a.coeffs, &b.coeffs).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    /// Direct O(M²) transform, full spectrum.
    fn naive_dft(x: &[f64]) -> Vec<Complex64> {
        let m = x.len();
        (0..m)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(t, &v)| {
                        let ang = -2.0 * std::f64::consts::PI * (k * t) as f64 / m as f64;
                        Complex64::new(v * ang.cos(), v * ang.sin())
                    })
                    .sum()
            })
            .collect()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn lp_examples() {
        let x = [0.3, -1.2, 4.0];
        assert_eq!(lp_distance(&x, &x, 2).unwrap(), 0.0);
        assert_eq!(lp_distance(&[0.0, 0.0], &[3.0, 4.0], 2).unwrap(), 5.0);
        assert!(close(
            lp_distance(&[1.0, 2.0], &[2.0, 4.0], 2).unwrap(),
            5f64.sqrt(),
            1e-12
        ));
        assert!(close(
            lp_distance(&[1.0, 2.0], &[2.0, 4.0], 1).unwrap(),
            3.0,
            1e-12
        ));
        assert!(close(
            lp_distance(&[0.0, 0.0], &[1.0, 2.0], 3).unwrap(),
            9f64.cbrt(),
            1e-12
        ));
    }

    #[test]
    fn lp_length_mismatch_names_lengths() {
        let err = lp_distance(&[0.0; 3], &[0.0; 4], 2).unwrap_err();
        assert!(err.to_string().contains('3') && err.to_string().contains('4'));
        assert!(lp_distance(&[0.0; 3], &[0.0; 3], 0).is_err());
    }

    #[test]
    fn dft_constant_is_dc_only() {
        let s = dft(&[2.5; 8]);
        assert!(close(s.coeffs()[0].re, 20.0, 1e-9));
        for c in &s.coeffs()[1..] {
            assert!(c.norm() < 1e-9);
        }
        assert_eq!(s.coeffs().len(), 5);
    }

    #[test]
    fn dft_cosine_single_bin() {
        let m = 16;
        let k = 3;
        let x: Vec<f64> = (0..m)
            .map(|t| (2.0 * std::f64::consts::PI * (k * t) as f64 / m as f64).cos())
            .collect();
        let s = dft(&x);
        for (bin, c) in s.coeffs().iter().enumerate() {
            if bin == k {
                assert!(close(c.re, m as f64 / 2.0, 1e-9));
            } else {
                assert!(c.norm() < 1e-9, "bin {bin} leaked {}", c.norm());
            }
        }
    }

    #[test]
    fn dft_matches_direct_summation_and_parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let normal = Normal::new(0.0, 1.0).unwrap();
        for m in [2usize, 5, 8, 17, 64] {
            let x: Vec<f64> = (0..m).map(|_| normal.sample(&mut rng)).collect();
            let fast = dft(&x);
            let slow = naive_dft(&x);
            for (a, b) in fast.coeffs().iter().zip(&slow) {
                assert!((a - b).norm() < 1e-9);
            }
            let energy: f64 = slow.iter().map(|c| c.norm_sqr()).sum();
            let time = m as f64 * x.iter().map(|v| v * v).sum::<f64>();
            assert!(((fast.full_energy() - time) / time).abs() < 1e-6);
            assert!(((energy - time) / time).abs() < 1e-6);
        }
    }

    #[test]
    fn fc_examples() {
        let x = dft(&[0.5, 1.0, -2.0, 0.0, 3.0, 1.0, 0.0, -1.0]);
        assert_eq!(fc_distance(&x, &x, 4).unwrap(), 0.0);

        // differ only in bin 1
        let mut y = x.clone();
        y.coeffs[1] += Complex64::new(3.0, -4.0);
        assert!(close(fc_distance(&x, &y, 1).unwrap(), 5.0, 1e-12));
        assert!(close(fc_distance(&x, &y, 4).unwrap(), 5.0, 1e-12));

        assert!(fc_distance(&x, &x, 0).is_err());
        assert!(fc_distance(&x, &x, 5).is_err());
    }

    #[test]
    fn fc_matches_brute_force_sum() {
        let a = [1.0, -0.5, 2.0, 0.25, -1.5, 0.0, 0.75, -2.0];
        let b = [0.0, 1.5, -1.0, 2.0, 0.5, -0.25, 1.0, 0.0];
        let (fa, fb) = (naive_dft(&a), naive_dft(&b));
        let oracle: f64 = (1..=4)
            .map(|i| (fa[i] - fb[i]).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let got = fc_distance(&dft(&a), &dft(&b), 4).unwrap();
        assert!(close(got, oracle, 1e-9), "{got} vs {oracle}");
    }

    #[test]
    fn yule_walker_white_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let x: Vec<f64> = (0..4096).map(|_| normal.sample(&mut rng)).collect();
        let a = yule_walker(&x, 2).unwrap();
        assert_eq!(a.order(), 2);
        for c in a.coeffs() {
            assert!(c.abs() < 0.08, "{c}");
        }
    }

    #[test]
    fn yule_walker_ar1() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let mut x = vec![0.0; 4096];
        for i in 1..x.len() {
            x[i] = 0.9 * x[i - 1] + normal.sample(&mut rng);
        }
        let a = yule_walker(&x, 1).unwrap();
        assert!((a.coeffs()[0] - 0.9).abs() < 0.05, "{:?}", a.coeffs());
    }

    #[test]
    fn yule_walker_ar2_orientation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let mut x = vec![0.0; 8192];
        for i in 2..x.len() {
            x[i] = 0.5 * x[i - 1] - 0.3 * x[i - 2] + normal.sample(&mut rng);
        }
        let a = yule_walker(&x, 2).unwrap();
        assert!((a.coeffs()[0] - 0.5).abs() < 0.05);
        assert!((a.coeffs()[1] + 0.3).abs() < 0.05);
    }

    #[test]
    fn yule_walker_degenerate() {
        let flat = TimeSeries::new(vec![3.0; 10]).unwrap().znormalize();
        assert_eq!(yule_walker_series(&flat, 3).unwrap().coeffs(), &[0.0; 3]);
        assert_eq!(yule_walker(&[1.0; 10], 2).unwrap().coeffs(), &[0.0; 2]);
        assert!(yule_walker(&[1.0, 2.0, 3.0], 3).is_err());
    }

    #[test]
    fn ar_distance_examples() {
        let a = ArCoefficients::new(vec![0.5]);
        assert_eq!(ar_distance(&a, &a).unwrap(), 0.0);
        assert!(close(
            ar_distance(&a, &ArCoefficients::new(vec![0.1])).unwrap(),
            0.4,
            1e-12
        ));
        let a = ArCoefficients::new(vec![0.3, -0.2]);
        let b = ArCoefficients::new(vec![0.1, 0.2]);
        assert!(close(ar_distance(&a, &b).unwrap(), 0.2f64.sqrt(), 1e-12));
        assert!(ar_distance(&a, &ArCoefficients::new(vec![0.1])).is_err());
    }
}
