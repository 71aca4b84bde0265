//! Per-measure parameter grids.
//!
//! | measure | parameter | range                  | points            |
//! |---------|-----------|------------------------|-------------------|
//! | FC      | θ         | 2 ..= N/2 (integers)   | 25                |
//! | AR      | η         | 1 ..= N/4 (integers)   | 25                |
//! | DTW     | ω         | 0 ..= N/4 (integers)   | 24, plus ω = N    |
//! | EDR     | ε         | 0.02σ ..= σ            | 25                |
//! | TWED    | ν × λ     | 5 log-spaced × 0..=1   | 5 × 5             |
//! | MJC     | β         | 0 ..= 25               | 24, plus β = 1e10 |
//!
//! Integer ranges use `floor` for fractional upper endpoints, place points at
//! the ideal real positions rounded half-up, and drop repeats, so short
//! series get fewer than 25 distinct points. σ is 1 because every series is
//! z-normalized first.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Measure, ParamPoint};

pub const GRID_STEPS: usize = 25;
pub const MIN_SERIES_LEN: usize = 8;
pub const MJC_EUCLIDEAN_BETA: f64 = 1e10;

/// Lower end of the TWED stiffness range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum NuMin {
    /// ν ∈ {1e-4, 1e-3, 1e-2, 1e-1, 1}.
    #[default]
    #[serde(rename = "1e-4")]
    Decades,
    /// Five log-spaced values from 1e-5 to 1.
    #[serde(rename = "1e-5")]
    Wide,
}

impl NuMin {
    pub fn value(self) -> f64 {
        match self {
            NuMin::Decades => 1e-4,
            NuMin::Wide => 1e-5,
        }
    }

    pub fn nu_values(self) -> Vec<f64> {
        match self {
            NuMin::Decades => vec![1e-4, 1e-3, 1e-2, 1e-1, 1.0],
            NuMin::Wide => logspace(-5.0, 0.0, 5),
        }
    }
}

impl std::str::FromStr for NuMin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1e-4" | "0.0001" => Ok(NuMin::Decades),
            "1e-5" | "0.00001" => Ok(NuMin::Wide),
            other => Err(Error::InvalidParameter(format!(
                "nu minimum must be 1e-4 or 1e-5, got '{other}'"
            ))),
        }
    }
}

impl std::fmt::Display for NuMin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NuMin::Decades => "1e-4",
            NuMin::Wide => "1e-5",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GridOptions {
    pub nu_min: NuMin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterGrid {
    pub measure: Measure,
    pub points: Vec<ParamPoint>,
}

impl ParameterGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &ParamPoint) -> bool {
        self.points.contains(p)
    }

    pub fn position(&self, p: &ParamPoint) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }
}

/// `count` evenly spaced reals from `lo` to `hi`, both included.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => (0..count)
            .map(|k| {
                if k == count - 1 {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

fn logspace(lo_exp: f64, hi_exp: f64, count: usize) -> Vec<f64> {
    linspace(lo_exp, hi_exp, count)
        .into_iter()
        .map(|e| 10f64.powf(e))
        .collect()
}

/// Integers at evenly spaced real positions in `[lo, hi]`, rounded half-up,
/// repeats removed, order kept.
pub fn linspace_int(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(count);
    for v in linspace(lo as f64, hi as f64, count) {
        let r = (v + 0.5).floor() as usize;
        if out.last() != Some(&r) {
            out.push(r);
        }
    }
    out
}

/// The grid of `measure` for series of length `n`.
pub fn build_grid(measure: Measure, n: usize, options: GridOptions) -> Result<ParameterGrid> {
    if n < MIN_SERIES_LEN {
        return Err(Error::InvalidParameter(format!(
            "parameter grids need series length >= {MIN_SERIES_LEN}, got {n}"
        )));
    }
    let points = match measure {
        Measure::Random | Measure::Euclidean => vec![ParamPoint::None],
        Measure::Fc => linspace_int(2, n / 2, GRID_STEPS)
            .into_iter()
            .map(|theta| ParamPoint::Theta { theta })
            .collect(),
        Measure::Ar => linspace_int(1, n / 4, GRID_STEPS)
            .into_iter()
            .map(|eta| ParamPoint::Eta { eta })
            .collect(),
        Measure::Dtw => {
            let mut omegas = linspace_int(0, n / 4, GRID_STEPS - 1);
            if omegas.last() != Some(&n) {
                omegas.push(n);
            }
            omegas
                .into_iter()
                .map(|omega| ParamPoint::Omega { omega })
                .collect()
        }
        Measure::Edr => linspace(0.02, 1.0, GRID_STEPS)
            .into_iter()
            .map(|epsilon| ParamPoint::Epsilon { epsilon })
            .collect(),
        Measure::Twed => {
            let lambdas = linspace(0.0, 1.0, 5);
            options
                .nu_min
                .nu_values()
                .into_iter()
                .flat_map(|nu| {
                    lambdas
                        .iter()
                        .map(move |&lambda| ParamPoint::Twed { nu, lambda })
                })
                .collect()
        }
        Measure::Mjc => {
            let mut betas = linspace(0.0, 25.0, GRID_STEPS - 1);
            betas.push(MJC_EUCLIDEAN_BETA);
            betas
                .into_iter()
                .map(|beta| ParamPoint::Beta { beta })
                .collect()
        }
    };
    Ok(ParameterGrid { measure, points })
}
