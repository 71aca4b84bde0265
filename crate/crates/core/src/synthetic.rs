//! Generators for two classic synthetic benchmarks.
//!
//! Cylinder-bell-funnel: each series of length `n` carries one plateau,
//! rising ramp, or falling ramp of height `6 + η` on `[a, b]`, plus unit
//! Gaussian noise, with `a ~ U[n/8, n/4]` and `b - a ~ U[n/4, 3n/4]`.
//!
//! Control charts: noise around a level of 30 (`30 + 2r`, `r ~ U[-3, 3]`)
//! with a cyclic component, a linear trend, or a step added.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::rng::{Purpose, RandomStream, StreamId};
use crate::series::{LabeledDataset, TimeSeries};

pub const CBF_CLASSES: [&str; 3] = ["cylinder", "bell", "funnel"];

/// One series of class `class` (0 cylinder, 1 bell, 2 funnel).
pub fn cbf_series(class: usize, n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let nf = n as f64;
    let a = rng.random_range(nf / 8.0..=nf / 4.0);
    let b = a + rng.random_range(nf / 4.0..=3.0 * nf / 4.0);
    let eta: f64 = StandardNormal.sample(rng);
    let height = 6.0 + eta;
    (1..=n)
        .map(|t| {
            let t = t as f64;
            let noise: f64 = StandardNormal.sample(rng);
            let shape = if t < a || t > b {
                0.0
            } else {
                match class {
                    0 => 1.0,
                    1 => (t - a) / (b - a),
                    _ => (b - t) / (b - a),
                }
            };
            height * shape + noise
        })
        .collect()
}

/// `per_class` series of each class, interleaved cylinder, bell, funnel.
pub fn cbf_dataset(name: &str, per_class: usize, n: usize, seed: u64) -> Result<LabeledDataset> {
    let mut rng = RandomStream::new(seed, StreamId::new(0, 0, Purpose::Custom(0xCBF)));
    let mut series = Vec::with_capacity(3 * per_class);
    let mut labels = Vec::with_capacity(3 * per_class);
    for _ in 0..per_class {
        for class in 0..3 {
            series.push(TimeSeries::new(cbf_series(class, n, &mut rng))?);
            labels.push(class);
        }
    }
    LabeledDataset::new(
        name,
        series,
        labels,
        CBF_CLASSES.iter().map(|s| s.to_string()).collect(),
    )
}

pub const CONTROL_CLASSES: [&str; 6] = [
    "normal",
    "cyclic",
    "increasing",
    "decreasing",
    "upward-shift",
    "downward-shift",
];

/// One control-chart series of class `class` (order of [`CONTROL_CLASSES`]).
pub fn control_series(class: usize, n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let nf = n as f64;
    let amplitude = rng.random_range(10.0..=15.0);
    let period = rng.random_range(10.0..=15.0);
    let slope = rng.random_range(0.2..=0.5);
    let shift = rng.random_range(7.5..=20.0);
    let onset = rng.random_range(nf / 3.0..=2.0 * nf / 3.0);
    (1..=n)
        .map(|t| {
            let t = t as f64;
            let base = 30.0 + 2.0 * rng.random_range(-3.0..=3.0);
            let step = if t >= onset { shift } else { 0.0 };
            base + match class {
                0 => 0.0,
                1 => amplitude * (2.0 * std::f64::consts::PI * t / period).sin(),
                2 => slope * t,
                3 => -slope * t,
                4 => step,
                _ => -step,
            }
        })
        .collect()
}

/// `per_class` control-chart series of each of the six classes.
pub fn control_dataset(
    name: &str,
    per_class: usize,
    n: usize,
    seed: u64,
) -> Result<LabeledDataset> {
    let mut rng = RandomStream::new(seed, StreamId::new(0, 0, Purpose::Custom(0xC0C)));
    let mut series = Vec::with_capacity(6 * per_class);
    let mut labels = Vec::with_capacity(6 * per_class);
    for class in 0..6 {
        for _ in 0..per_class {
            series.push(TimeSeries::new(control_series(class, n, &mut rng))?);
            labels.push(class);
        }
    }
    LabeledDataset::new(
        name,
        series,
        labels,
        CONTROL_CLASSES.iter().map(|s| s.to_string()).collect(),
    )
}
