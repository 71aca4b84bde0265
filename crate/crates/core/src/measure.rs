//! Measure identifiers, parameter points, and per-point pairwise kernels.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::elastic;
use crate::error::{Error, Result};
use crate::lockstep::{self, ArCoefficients, FourierSpectrum};
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Random,
    Euclidean,
    Fc,
    Ar,
    Dtw,
    Edr,
    Twed,
    Mjc,
}

impl Measure {
    pub const ALL: [Measure; 8] = [
        Measure::Random,
        Measure::Euclidean,
        Measure::Fc,
        Measure::Ar,
        Measure::Dtw,
        Measure::Edr,
        Measure::Twed,
        Measure::Mjc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Random => "random",
            Measure::Euclidean => "euclidean",
            Measure::Fc => "fc",
            Measure::Ar => "ar",
            Measure::Dtw => "dtw",
            Measure::Edr => "edr",
            Measure::Twed => "twed",
            Measure::Mjc => "mjc",
        }
    }

    /// Elastic measures accept series of different lengths; the others
    /// need a common length (resample first).
    pub fn is_elastic(self) -> bool {
        matches!(
            self,
            Measure::Dtw | Measure::Edr | Measure::Twed | Measure::Mjc
        )
    }

    /// Whether `d(a, b) = d(b, a)` holds for a pair with the given lengths.
    pub fn is_symmetric(self, len_a: usize, len_b: usize) -> bool {
        match self {
            Measure::Random => false,
            Measure::Dtw => len_a == len_b,
            _ => true,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == lower || (lower == "euc" && *m == Measure::Euclidean))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown measure '{s}'")))
    }
}

/// One point of a measure's parameter grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "param", rename_all = "lowercase")]
pub enum ParamPoint {
    None,
    Theta { theta: usize },
    Eta { eta: usize },
    Omega { omega: usize },
    Epsilon { epsilon: f64 },
    Twed { nu: f64, lambda: f64 },
    Beta { beta: f64 },
}

impl ParamPoint {
    /// Does this point belong to `measure`'s parameter space?
    pub fn fits(&self, measure: Measure) -> bool {
        matches!(
            (measure, self),
            (Measure::Random | Measure::Euclidean, ParamPoint::None)
                | (Measure::Fc, ParamPoint::Theta { .. })
                | (Measure::Ar, ParamPoint::Eta { .. })
                | (Measure::Dtw, ParamPoint::Omega { .. })
                | (Measure::Edr, ParamPoint::Epsilon { .. })
                | (Measure::Twed, ParamPoint::Twed { .. })
                | (Measure::Mjc, ParamPoint::Beta { .. })
        )
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamPoint::None => f.write_str("-"),
            ParamPoint::Theta { theta } => write!(f, "theta={theta}"),
            ParamPoint::Eta { eta } => write!(f, "eta={eta}"),
            ParamPoint::Omega { omega } => write!(f, "omega={omega}"),
            ParamPoint::Epsilon { epsilon } => write!(f, "epsilon={}", fmt_param(*epsilon)),
            ParamPoint::Twed { nu, lambda } => {
                write!(f, "nu={} lambda={}", fmt_param(*nu), fmt_param(*lambda))
            }
            ParamPoint::Beta { beta } => write!(f, "beta={}", fmt_param(*beta)),
        }
    }
}

impl FromStr for ParamPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" || s.is_empty() {
            return Ok(ParamPoint::None);
        }
        let bad = || Error::InvalidParameter(format!("cannot parse parameter point '{s}'"));
        let mut fields = std::collections::BTreeMap::new();
        for part in s.split_whitespace() {
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            fields.insert(k, v);
        }
        let real = |k: &str| -> Result<f64> {
            fields
                .get(k)
                .ok_or_else(bad)?
                .parse::<f64>()
                .map_err(|_| bad())
        };
        let int = |k: &str| -> Result<usize> {
            fields
                .get(k)
                .ok_or_else(bad)?
                .parse::<usize>()
                .map_err(|_| bad())
        };
        let point = match fields.keys().next().copied() {
            Some("theta") => ParamPoint::Theta {
                theta: int("theta")?,
            },
            Some("eta") => ParamPoint::Eta { eta: int("eta")? },
            Some("omega") => ParamPoint::Omega {
                omega: int("omega")?,
            },
            Some("epsilon") => ParamPoint::Epsilon {
                epsilon: real("epsilon")?,
            },
            Some("lambda") | Some("nu") => ParamPoint::Twed {
                nu: real("nu")?,
                lambda: real("lambda")?,
            },
            Some("beta") => ParamPoint::Beta {
                beta: real("beta")?,
            },
            _ => return Err(bad()),
        };
        Ok(point)
    }
}

/// Shortest decimal text that parses back to the same `f64`.
pub(crate) fn fmt_param(v: f64) -> String {
    format!("{v}")
}

/// A measure together with one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureConfig {
    pub measure: Measure,
    pub point: ParamPoint,
}

impl MeasureConfig {
    pub fn new(measure: Measure, point: ParamPoint) -> Result<Self> {
        if !point.fits(measure) {
            return Err(Error::InvalidParameter(format!(
                "parameter point '{point}' does not belong to measure {measure}"
            )));
        }
        match point {
            ParamPoint::Twed { nu, lambda }
                if nu.is_nan() || nu <= 0.0 || lambda.is_nan() || lambda < 0.0 =>
            {
                return Err(Error::InvalidParameter(format!(
                    "TWED needs nu > 0 and lambda >= 0, got nu={nu} lambda={lambda}"
                )))
            }
            ParamPoint::Epsilon { epsilon } if epsilon.is_nan() || epsilon < 0.0 => {
                return Err(Error::InvalidParameter(format!(
                    "EDR epsilon must be >= 0, got {epsilon}"
                )))
            }
            ParamPoint::Beta { beta } if beta.is_nan() || beta < 0.0 => {
                return Err(Error::InvalidParameter(format!(
                    "MJC beta must be >= 0, got {beta}"
                )))
            }
            ParamPoint::Theta { theta: 0 } | ParamPoint::Eta { eta: 0 } => {
                return Err(Error::InvalidParameter(format!("'{point}' must be >= 1")))
            }
            _ => {}
        }
        Ok(Self { measure, point })
    }

    /// Dissimilarity between two series. The random baseline has no
    /// pairwise definition here; draw from a stream instead.
    pub fn distance(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        match (self.measure, self.point) {
            (Measure::Euclidean, _) => lockstep::lp_distance(x, y, 2),
            (Measure::Fc, ParamPoint::Theta { theta }) => {
                lockstep::fc_distance(&lockstep::dft(x), &lockstep::dft(y), theta)
            }
            (Measure::Ar, ParamPoint::Eta { eta }) => lockstep::ar_distance(
                &lockstep::yule_walker(x, eta)?,
                &lockstep::yule_walker(y, eta)?,
            ),
            (Measure::Dtw, ParamPoint::Omega { omega }) => Ok(elastic::dtw(x, y, omega)),
            (Measure::Edr, ParamPoint::Epsilon { epsilon }) => Ok(elastic::edr(x, y, epsilon)),
            (Measure::Twed, ParamPoint::Twed { nu, lambda }) => elastic::twed(x, y, nu, lambda),
            (Measure::Mjc, ParamPoint::Beta { beta }) => Ok(elastic::mjc(x, y, beta)),
            (Measure::Random, _) => Err(Error::InvalidParameter(
                "the random baseline needs a random stream".into(),
            )),
            (m, p) => Err(Error::InvalidParameter(format!(
                "point '{p}' does not fit measure {m}"
            ))),
        }
    }
}

/// Pairwise kernel for one deterministic measure configuration over a fixed
/// set of series, with features extracted up front.
pub struct PairKernel<'a> {
    series: &'a [TimeSeries],
    kind: KernelKind<'a>,
}

enum KernelKind<'a> {
    Euclidean,
    Fc {
        spectra: &'a [FourierSpectrum],
        theta: usize,
    },
    Ar(Vec<ArCoefficients>),
    Dtw(usize),
    Edr(f64),
    Twed(f64, f64),
    Mjc(f64),
}

impl<'a> PairKernel<'a> {
    /// `spectra` must hold the DFT of every series when the measure is FC.
    pub fn new(
        config: MeasureConfig,
        series: &'a [TimeSeries],
        spectra: Option<&'a [FourierSpectrum]>,
    ) -> Result<Self> {
        let need_common_len = !config.measure.is_elastic();
        if need_common_len {
            if let Some(first) = series.first() {
                if let Some(other) = series.iter().find(|s| s.len() != first.len()) {
                    return Err(Error::LengthMismatch {
                        left: first.len(),
                        right: other.len(),
                    });
                }
            }
        }
        let kind = match (config.measure, config.point) {
            (Measure::Euclidean, _) => KernelKind::Euclidean,
            (Measure::Fc, ParamPoint::Theta { theta }) => {
                let spectra = spectra.ok_or_else(|| {
                    Error::InvalidParameter("FC kernel needs precomputed spectra".into())
                })?;
                if let Some(s) = spectra.first() {
                    if theta == 0 || theta > s.max_theta() {
                        return Err(Error::InvalidParameter(format!(
                            "theta must be in [1, {}], got {theta}",
                            s.max_theta()
                        )));
                    }
                }
                KernelKind::Fc { spectra, theta }
            }
            (Measure::Ar, ParamPoint::Eta { eta }) => KernelKind::Ar(
                series
                    .iter()
                    .map(|s| lockstep::yule_walker_series(s, eta))
                    .collect::<Result<_>>()?,
            ),
            (Measure::Dtw, ParamPoint::Omega { omega }) => KernelKind::Dtw(omega),
            (Measure::Edr, ParamPoint::Epsilon { epsilon }) => KernelKind::Edr(epsilon),
            (Measure::Twed, ParamPoint::Twed { nu, lambda }) => {
                elastic::twed(&[0.0], &[0.0], nu, lambda)?;
                KernelKind::Twed(nu, lambda)
            }
            (Measure::Mjc, ParamPoint::Beta { beta }) => KernelKind::Mjc(beta),
            (m, p) => {
                return Err(Error::InvalidParameter(format!(
                    "no deterministic kernel for {m} at '{p}'"
                )))
            }
        };
        Ok(Self { series, kind })
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    /// Distance between items `a` and `b`.
    pub fn pair(&self, a: usize, b: usize) -> f64 {
        let (x, y) = (self.series[a].values(), self.series[b].values());
        match &self.kind {
            KernelKind::Euclidean => lockstep::squared_euclidean(x, y).sqrt(),
            KernelKind::Fc { spectra, theta } => {
                let (sa, sb) = (
                    &spectra[a].coeffs()[1..=*theta],
                    &spectra[b].coeffs()[1..=*theta],
                );
                sa.iter()
                    .zip(sb)
                    .map(|(p, q)| (p - q).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            }
            KernelKind::Ar(coeffs) => {
                lockstep::squared_euclidean(coeffs[a].coeffs(), coeffs[b].coeffs()).sqrt()
            }
            KernelKind::Dtw(w) => elastic::dtw(x, y, *w),
            KernelKind::Edr(e) => elastic::edr(x, y, *e),
            KernelKind::Twed(nu, lambda) => elastic::twed_unchecked(x, y, *nu, *lambda),
            KernelKind::Mjc(beta) => elastic::mjc(x, y, *beta),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_names_round_trip() {
        for m in Measure::ALL {
            assert_eq!(m.name().parse::<Measure>().unwrap(), m);
        }
        assert!("cosine".parse::<Measure>().is_err());
    }

    #[test]
    fn param_point_text_round_trip() {
        let points = [
            ParamPoint::None,
            ParamPoint::Theta { theta: 7 },
            ParamPoint::Eta { eta: 3 },
            ParamPoint::Omega { omega: 12 },
            ParamPoint::Epsilon { epsilon: 0.1025 },
            ParamPoint::Twed {
                nu: 1e-4,
                lambda: 0.25,
            },
            ParamPoint::Beta { beta: 1e10 },
            ParamPoint::Beta { beta: 25.0 / 23.0 },
        ];
        for p in points {
            assert_eq!(p.to_string().parse::<ParamPoint>().unwrap(), p, "{p}");
        }
    }

    #[test]
    fn config_validation() {
        assert!(MeasureConfig::new(Measure::Dtw, ParamPoint::Beta { beta: 1.0 }).is_err());
        assert!(MeasureConfig::new(
            Measure::Twed,
            ParamPoint::Twed {
                nu: 0.0,
                lambda: 1.0
            }
        )
        .is_err());
        assert!(MeasureConfig::new(Measure::Fc, ParamPoint::Theta { theta: 0 }).is_err());
        assert!(MeasureConfig::new(Measure::Euclidean, ParamPoint::None).is_ok());
    }

    #[test]
    fn pair_kernel_matches_one_off_distance() {
        let series: Vec<TimeSeries> = [
            vec![0.0, 1.0, 3.0, 2.0, 1.0, 0.5, -1.0, 0.0],
            vec![1.0, 0.0, 2.0, 2.5, 0.0, -0.5, 1.0, 0.2],
        ]
        .into_iter()
        .map(|v| TimeSeries::new(v).unwrap().znormalize())
        .collect();
        let spectra: Vec<_> = series.iter().map(|s| lockstep::dft(s.values())).collect();
        let configs = [
            MeasureConfig::new(Measure::Euclidean, ParamPoint::None).unwrap(),
            MeasureConfig::new(Measure::Fc, ParamPoint::Theta { theta: 3 }).unwrap(),
            MeasureConfig::new(Measure::Ar, ParamPoint::Eta { eta: 2 }).unwrap(),
            MeasureConfig::new(Measure::Dtw, ParamPoint::Omega { omega: 1 }).unwrap(),
            MeasureConfig::new(Measure::Edr, ParamPoint::Epsilon { epsilon: 0.3 }).unwrap(),
            MeasureConfig::new(
                Measure::Twed,
                ParamPoint::Twed {
                    nu: 0.01,
                    lambda: 0.5,
                },
            )
            .unwrap(),
            MeasureConfig::new(Measure::Mjc, ParamPoint::Beta { beta: 2.0 }).unwrap(),
        ];
        for c in configs {
            let k = PairKernel::new(c, &series, Some(&spectra)).unwrap();
            let direct = c.distance(series[0].values(), series[1].values()).unwrap();
            assert!((k.pair(0, 1) - direct).abs() < 1e-12, "{:?}", c);
        }
    }
}
