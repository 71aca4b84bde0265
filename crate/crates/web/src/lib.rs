//! Browser bindings: DTW alignment, MJC jumps, parameter sweeps, and
//! cylinder-bell-funnel samples to feed them.
//!
//! Every exported function returns JSON text; the plain Rust functions
//! underneath are what the tests exercise.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use tsmeasures::elastic::{self, Jump};
use tsmeasures::rng::{Purpose, RandomStream, StreamId};
use tsmeasures::{build_grid, GridOptions, Measure, MeasureConfig, TimeSeries};

#[derive(Debug, Serialize)]
pub struct Alignment {
    pub distance: f64,
    /// Row-major `(M+1) x (N+1)` accumulated costs; cells outside the band
    /// are `null`.
    pub matrix: Vec<Option<f64>>,
    pub rows: usize,
    pub cols: usize,
    /// 1-based `(i, j)` pairs.
    pub path: Vec<(usize, usize)>,
}

#[derive(Debug, Serialize)]
pub struct JumpTrace {
    pub cost: f64,
    pub jumps: Vec<Jump>,
}

#[derive(Debug, Serialize)]
pub struct SweepPoint {
    pub label: String,
    pub distance: f64,
}

fn znorm(values: &[f64]) -> tsmeasures::Result<Vec<f64>> {
    Ok(TimeSeries::new(values.to_vec())?
        .znormalize()
        .values()
        .to_vec())
}

pub fn align(x: &[f64], y: &[f64], window: usize) -> tsmeasures::Result<Alignment> {
    let (x, y) = (znorm(x)?, znorm(y)?);
    let matrix = elastic::dtw_cost_matrix(&x, &y, window);
    let path = elastic::warping_path(&matrix, x.len(), y.len());
    Ok(Alignment {
        distance: elastic::dtw(&x, &y, window),
        matrix: matrix.iter().map(|v| v.is_finite().then_some(*v)).collect(),
        rows: x.len() + 1,
        cols: y.len() + 1,
        path,
    })
}

pub fn jumps(x: &[f64], y: &[f64], beta: f64) -> tsmeasures::Result<JumpTrace> {
    let (x, y) = (znorm(x)?, znorm(y)?);
    let (cost, jumps) = elastic::mjc_trace(&x, &y, beta);
    Ok(JumpTrace { cost, jumps })
}

/// Distance at every grid point of `measure`, with the grid sized by the
/// longer series.
pub fn sweep(measure: Measure, x: &[f64], y: &[f64]) -> tsmeasures::Result<Vec<SweepPoint>> {
    let (mut x, mut y) = (znorm(x)?, znorm(y)?);
    let n = x.len().max(y.len());
    if !measure.is_elastic() && x.len() != y.len() {
        x = TimeSeries::new(x)?.resample(n)?.values().to_vec();
        y = TimeSeries::new(y)?.resample(n)?.values().to_vec();
    }
    build_grid(measure, n, GridOptions::default())?
        .points
        .into_iter()
        .map(|point| {
            let distance = MeasureConfig::new(measure, point)?.distance(&x, &y)?;
            Ok(SweepPoint {
                label: point.to_string(),
                distance,
            })
        })
        .collect()
}

pub fn cbf(class: usize, length: usize, seed: u64) -> Vec<f64> {
    let mut rng = RandomStream::new(seed, StreamId::new(0, class, Purpose::Custom(0xCBF)));
    tsmeasures::synthetic::cbf_series(class % 3, length.max(2), &mut rng)
}

fn to_js<T: Serialize>(r: tsmeasures::Result<T>) -> Result<String, JsError> {
    let value = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = dtwAlignment)]
pub fn dtw_alignment(x: &[f64], y: &[f64], window: usize) -> Result<String, JsError> {
    to_js(align(x, y, window))
}

#[wasm_bindgen(js_name = mjcJumps)]
pub fn mjc_jumps(x: &[f64], y: &[f64], beta: f64) -> Result<String, JsError> {
    to_js(jumps(x, y, beta))
}

#[wasm_bindgen(js_name = parameterSweep)]
pub fn parameter_sweep(measure: &str, x: &[f64], y: &[f64]) -> Result<String, JsError> {
    let measure: Measure = measure
        .parse()
        .map_err(|e: tsmeasures::Error| JsError::new(&e.to_string()))?;
    to_js(sweep(measure, x, y))
}

#[wasm_bindgen(js_name = cbfSample)]
pub fn cbf_sample(class: usize, length: usize, seed: u64) -> Vec<f64> {
    cbf(class, length, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alignment_path_spans_the_matrix() {
        let x = cbf(0, 40, 1);
        let y = cbf(0, 30, 2);
        let a = align(&x, &y, 40).unwrap();
        assert_eq!((a.rows, a.cols), (41, 31));
        assert_eq!(a.path.first(), Some(&(1, 1)));
        assert_eq!(a.path.last(), Some(&(40, 30)));
        assert_eq!(a.matrix[a.rows * a.cols - 1], Some(a.distance));
        let json = serde_json::to_string(&a).unwrap();
        assert!(json.contains("\"path\":[[1,1]"));
    }

    #[test]
    fn narrow_band_leaves_cells_out() {
        let x = cbf(1, 20, 3);
        let a = align(&x, &x, 1).unwrap();
        assert!(a.matrix.iter().any(Option::is_none));
        assert_eq!(a.distance, 0.0);
    }

    #[test]
    fn huge_beta_jumps_along_the_diagonal() {
        let x = cbf(2, 16, 4);
        let y = cbf(1, 16, 5);
        let t = jumps(&x, &y, 1e10).unwrap();
        assert!(t
            .jumps
            .iter()
            .all(|j| j.target == j.source || j.target == j.source + 1));
        let euclid: f64 = znorm(&x)
            .unwrap()
            .iter()
            .zip(znorm(&y).unwrap())
            .map(|(a, b)| (a - b).powi(2))
            .sum();
        assert!((t.cost - euclid).abs() < 1e-9 * euclid.max(1.0));
    }

    #[test]
    fn sweep_covers_the_grid() {
        let x = cbf(0, 100, 6);
        let y = cbf(1, 100, 7);
        let s = sweep(Measure::Dtw, &x, &y).unwrap();
        assert_eq!(s.len(), 25);
        assert!(s.windows(2).all(|w| w[1].distance <= w[0].distance));
        let edr = sweep(Measure::Edr, &x, &y).unwrap();
        assert!(edr.iter().all(|p| p.distance.fract() == 0.0));
    }

    #[test]
    fn lockstep_sweep_resamples_unequal_lengths() {
        let s = sweep(Measure::Euclidean, &cbf(0, 40, 8), &cbf(0, 50, 9)).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].distance.is_finite());
    }

    #[test]
    fn samples_are_reproducible() {
        assert_eq!(cbf(1, 32, 10), cbf(1, 32, 10));
        assert_ne!(cbf(1, 32, 10), cbf(1, 32, 11));
    }
}
