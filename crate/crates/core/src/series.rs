//! Time series and labeled datasets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite, uniformly sampled, real-valued sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    normalized: bool,
    constant: bool,
}

impl TimeSeries {
    pub const MIN_LEN: usize = 2;

    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < Self::MIN_LEN {
            return Err(Error::TooShort {
                len: values.len(),
                min: Self::MIN_LEN,
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            values,
            normalized: false,
            constant: false,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True once the series went through [`TimeSeries::znormalize`].
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// True if z-normalization found zero variance and produced all zeros.
    pub fn is_constant(&self) -> bool {
        self.constant
    }

    /// Zero mean, unit population standard deviation.
    ///
    /// A constant series maps to all zeros and is flagged with
    /// [`TimeSeries::is_constant`] instead of dividing by zero.
    pub fn znormalize(&self) -> TimeSeries {
        let (mean, std) = mean_std(&self.values);
        let scale = mean.abs().max(1.0);
        if std <= 1e-12 * scale {
            return TimeSeries {
                values: vec![0.0; self.values.len()],
                normalized: true,
                constant: true,
            };
        }
        TimeSeries {
            values: self.values.iter().map(|v| (v - mean) / std).collect(),
            normalized: true,
            constant: false,
        }
    }

    /// Linear interpolation onto `target_len` uniformly spaced positions.
    /// Both endpoints are kept.
    pub fn resample(&self, target_len: usize) -> Result<TimeSeries> {
        if target_len < Self::MIN_LEN {
            return Err(Error::InvalidParameter(format!(
                "resample target length must be >= {}, got {target_len}",
                Self::MIN_LEN
            )));
        }
        let src = &self.values;
        let span_src = src.len() - 1;
        let span_dst = target_len - 1;
        // Position k maps to k * span_src / span_dst; integer arithmetic keeps
        // grid-aligned positions exact.
        let values = (0..target_len)
            .map(|k| {
                let num = k * span_src;
                let idx = num / span_dst;
                let rem = num % span_dst;
                if rem == 0 {
                    src[idx]
                } else {
                    let frac = rem as f64 / span_dst as f64;
                    src[idx] + (src[idx + 1] - src[idx]) * frac
                }
            })
            .collect();
        Ok(TimeSeries {
            values,
            normalized: false,
            constant: self.constant,
        })
    }
}

impl AsRef<[f64]> for TimeSeries {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// Population mean and standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Dense class id. Original label text lives in [`LabeledDataset::class_names`].
pub type Label = usize;

/// A named collection of labeled series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    name: String,
    series: Vec<TimeSeries>,
    labels: Vec<Label>,
    class_names: Vec<String>,
}

impl LabeledDataset {
    pub fn new(
        name: impl Into<String>,
        series: Vec<TimeSeries>,
        labels: Vec<Label>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        let name = name.into();
        let invalid = |reason: String| Error::InvalidDataset {
            name: name.clone(),
            reason,
        };
        if series.is_empty() {
            return Err(invalid("no items".into()));
        }
        if series.len() != labels.len() {
            return Err(invalid(format!(
                "{} series but {} labels",
                series.len(),
                labels.len()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(invalid(format!(
                "label id {bad} outside class inventory of {}",
                class_names.len()
            )));
        }
        let mut seen = vec![false; class_names.len()];
        for &l in &labels {
            seen[l] = true;
        }
        if seen.iter().filter(|&&s| s).count() < 2 {
            return Err(invalid("fewer than 2 distinct classes".into()));
        }
        Ok(Self {
            name,
            series,
            labels,
            class_names,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn series(&self) -> &[TimeSeries] {
        &self.series
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Item count per class id.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.class_names.len()];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn max_len(&self) -> usize {
        self.series.iter().map(TimeSeries::len).max().unwrap_or(0)
    }

    pub fn is_equal_length(&self) -> bool {
        let first = self.series[0].len();
        self.series.iter().all(|s| s.len() == first)
    }

    /// Copy with every series z-normalized independently.
    pub fn znormalized(&self) -> Self {
        Self {
            series: self.series.iter().map(TimeSeries::znormalize).collect(),
            ..self.clone()
        }
    }

    /// Copy with every series resampled to `len`. Normalization flags are
    /// dropped; renormalize afterwards if needed.
    pub fn resampled(&self, len: usize) -> Result<Self> {
        Ok(Self {
            series: self
                .series
                .iter()
                .map(|s| s.resample(len))
                .collect::<Result<_>>()?,
            ..self.clone()
        })
    }

    /// Append `other`, remapping its labels by class-name text. Classes only
    /// present in `other` are added at the end of the inventory.
    pub fn concat(&self, other: &LabeledDataset) -> Self {
        let mut class_names = self.class_names.clone();
        let remap: Vec<Label> = other
            .class_names
            .iter()
            .map(|c| match class_names.iter().position(|n| n == c) {
                Some(i) => i,
                None => {
                    class_names.push(c.clone());
                    class_names.len() - 1
                }
            })
            .collect();
        let mut series = self.series.clone();
        series.extend(other.series.iter().cloned());
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().map(|&l| remap[l]));
        Self {
            name: self.name.clone(),
            series,
            labels,
            class_names,
        }
    }

    /// Relabel `other` onto this dataset's class inventory (used for a
    /// provided test split whose file saw classes in a different order).
    pub fn align_classes(&self, other: &LabeledDataset) -> Result<LabeledDataset> {
        let mut class_names = self.class_names.clone();
        let mut labels = Vec::with_capacity(other.len());
        for &l in &other.labels {
            let text = &other.class_names[l];
            let id = match class_names.iter().position(|n| n == text) {
                Some(i) => i,
                None => {
                    class_names.push(text.clone());
                    class_names.len() - 1
                }
            };
            labels.push(id);
        }
        Ok(LabeledDataset {
            name: other.name.clone(),
            series: other.series.clone(),
            labels,
            class_names,
        })
    }
}
