//! Reading and writing the plain-text archive format: one series per line,
//! class label first, then the values. Fields are comma-separated when the
//! first non-blank line contains a comma, whitespace-separated otherwise.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::series::{LabeledDataset, TimeSeries};

fn parse_err(path: &Path, line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        reason: reason.into(),
    }
}

/// Parse archive text. Labels become dense ids in order of first appearance;
/// the original label text is kept as the class name.
pub fn parse_ucr(name: &str, text: &str, path: &Path) -> Result<LabeledDataset> {
    let comma = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .is_some_and(|l| l.contains(','));
    let mut series = Vec::new();
    let mut labels = Vec::new();
    let mut class_names: Vec<String> = Vec::new();
    let mut width = None;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = if comma {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        if fields.len() < 3 {
            return Err(parse_err(
                path,
                line_no,
                "need a label and at least 2 values",
            ));
        }
        match width {
            None => width = Some(fields.len()),
            Some(w) if w != fields.len() => {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("expected {} values, found {}", w - 1, fields.len() - 1),
                ))
            }
            _ => {}
        }
        let label = canonical_label(fields[0]);
        let id = match class_names.iter().position(|c| *c == label) {
            Some(i) => i,
            None => {
                class_names.push(label);
                class_names.len() - 1
            }
        };
        let values = fields[1..]
            .iter()
            .enumerate()
            .map(|(j, f)| {
                f.parse::<f64>().map_err(|_| {
                    parse_err(
                        path,
                        line_no,
                        format!("value {} is not a number: '{f}'", j + 1),
                    )
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let ts = TimeSeries::new(values).map_err(|e| parse_err(path, line_no, e.to_string()))?;
        series.push(ts);
        labels.push(id);
    }
    if series.is_empty() {
        return Err(parse_err(path, 0, "no series found"));
    }
    LabeledDataset::new(name, series, labels, class_names)
}

/// Numeric labels like `1.0000000e+00` and `1` name the same class.
fn canonical_label(field: &str) -> String {
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() && v.fract() == 0.0 && v.abs() < 1e15 => format!("{}", v as i64),
        _ => field.to_string(),
    }
}

/// Load one archive file. The dataset is named after the file stem.
pub fn load_ucr(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    parse_ucr(&name, &text, path)
}

/// Paths of `NAME_TRAIN` and `NAME_TEST` (with or without a `.txt`/`.tsv`
/// extension) inside `dir`.
pub fn split_paths(dir: impl AsRef<Path>, name: &str) -> Result<(PathBuf, PathBuf)> {
    let dir = dir.as_ref();
    let find = |suffix: &str| -> Result<PathBuf> {
        for ext in ["", ".txt", ".tsv", ".csv"] {
            let p = dir.join(format!("{name}_{suffix}{ext}"));
            if p.is_file() {
                return Ok(p);
            }
        }
        Err(Error::InvalidDataset {
            name: name.to_string(),
            reason: format!("no {name}_{suffix} file in {}", dir.display()),
        })
    };
    Ok((find("TRAIN")?, find("TEST")?))
}

/// Load a provided train/test split. Both parts are named `name`; the test
/// part is relabeled onto the training class inventory.
pub fn load_split(dir: impl AsRef<Path>, name: &str) -> Result<(LabeledDataset, LabeledDataset)> {
    let (tr, te) = split_paths(dir, name)?;
    let train = rename(load_ucr(&tr)?, name)?;
    let test = rename(load_ucr(&te)?, name)?;
    let test = train.align_classes(&test)?;
    Ok((train, test))
}

fn rename(ds: LabeledDataset, name: &str) -> Result<LabeledDataset> {
    LabeledDataset::new(
        name,
        ds.series().to_vec(),
        ds.labels().to_vec(),
        ds.class_names().to_vec(),
    )
}

/// Write `ds` in the comma-separated archive format with full precision.
pub fn write_ucr(ds: &LabeledDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut buf = String::new();
    for (s, &l) in ds.series().iter().zip(ds.labels()) {
        buf.push_str(&ds.class_names()[l]);
        for v in s.values() {
            buf.push(',');
            buf.push_str(&format!("{v:?}"));
        }
        buf.push('\n');
    }
    out.write_all(buf.as_bytes())
        .map_err(|e| Error::io(path, e))
}
