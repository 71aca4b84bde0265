//! Run reports: aggregation of cell results, significance analysis, and
//! emission as delimited text plus one JSON summary.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{NuMin, ParameterGrid};
use crate::harness::{CellResult, Mode};
use crate::measure::{Measure, ParamPoint};
use crate::series::LabeledDataset;
use crate::stats::{self, BestMeasureVerdict, Comparison, RankTable, WilcoxonOutcome};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub name: String,
    pub items: usize,
    /// Items kept after class balancing (all items in fixed-split mode).
    pub balanced_items: usize,
    /// Original label text, indexed by dense label id.
    pub class_names: Vec<String>,
    pub series_len: usize,
    pub equal_length: bool,
}

impl DatasetSummary {
    pub fn new(ds: &LabeledDataset, balanced_items: usize) -> Self {
        Self {
            name: ds.name().to_string(),
            items: ds.len(),
            balanced_items,
            class_names: ds.class_names().to_vec(),
            series_len: ds.max_len(),
            equal_length: ds.is_equal_length(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEntry {
    pub dataset: String,
    pub grid: ParameterGrid,
}

/// Everything needed to reproduce a run. The worker count is deliberately
/// absent: results do not depend on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub repetitions: usize,
    pub folds: usize,
    pub mode: Mode,
    pub nu_min: NuMin,
    pub alpha: f64,
    pub measures: Vec<Measure>,
    pub datasets: Vec<DatasetSummary>,
    pub grids: Vec<GridEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamCount {
    pub point: ParamPoint,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSummary {
    pub dataset: String,
    pub measure: Measure,
    pub mean_train_error: f64,
    pub mean_test_error: f64,
    /// How often each grid point was chosen, in grid order.
    pub histogram: Vec<ParamCount>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpshooterPoint {
    pub dataset: String,
    /// `train_error(baseline) - train_error(candidate)`.
    pub train_gain: f64,
    /// `test_error(baseline) - test_error(candidate)`.
    pub test_gain: f64,
}

impl SharpshooterPoint {
    /// Both gains have the same strict sign.
    pub fn agrees(&self) -> bool {
        (self.train_gain > 0.0 && self.test_gain > 0.0)
            || (self.train_gain < 0.0 && self.test_gain < 0.0)
    }
}

/// Train/test error gains of `candidate` over `baseline`, one point per
/// dataset. Positive gain means the candidate has lower error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpshooterTable {
    pub candidate: Measure,
    pub baseline: Measure,
    pub points: Vec<SharpshooterPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub ranks: RankTable,
    /// All pairs of measures over per-dataset mean accuracies.
    pub pairwise: Vec<Comparison>,
    pub best: Vec<BestMeasureVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub manifest: Manifest,
    pub summaries: Vec<MeasureSummary>,
    pub cells: Vec<CellResult>,
    pub analysis: Analysis,
    pub sharpshooter: Vec<SharpshooterTable>,
}

impl RunReport {
    pub fn summary(&self, dataset: &str, measure: Measure) -> Option<&MeasureSummary> {
        self.summaries
            .iter()
            .find(|s| s.dataset == dataset && s.measure == measure)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

fn cells_of<'a>(
    cells: &'a [CellResult],
    dataset: &'a str,
    measure: Measure,
) -> impl Iterator<Item = &'a CellResult> {
    cells
        .iter()
        .filter(move |c| c.dataset == dataset && c.measure == measure)
}

/// Ranks, pairwise significance, and best-measure verdicts from cell
/// results alone. Cells of every (dataset, measure) must be present and
/// listed in the same (repetition, fold) order.
pub fn analyze(
    cells: &[CellResult],
    datasets: &[String],
    measures: &[Measure],
    alpha: f64,
) -> Result<Analysis> {
    let mean_test = |d: &str, m: Measure| -> Option<f64> {
        let errs: Vec<f64> = cells_of(cells, d, m).map(|c| c.test_error()).collect();
        (!errs.is_empty()).then(|| mean(errs.into_iter()))
    };
    let ranks = stats::rank_measures(datasets, measures, mean_test)?;
    let mean_errors: Vec<Vec<f64>> = measures
        .iter()
        .map(|&m| {
            datasets
                .iter()
                .map(|d| mean_test(d, m).unwrap_or(f64::NAN))
                .collect()
        })
        .collect();
    let pairwise = stats::pairwise_significance(measures, &mean_errors, alpha)?;
    let best = datasets
        .iter()
        .map(|d| {
            let per_measure: Vec<(Measure, Vec<f64>)> = measures
                .iter()
                .map(|&m| (m, cells_of(cells, d, m).map(|c| c.test_error()).collect()))
                .collect();
            stats::best_measure_significance(d, &per_measure, alpha)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Analysis {
        ranks,
        pairwise,
        best,
    })
}

/// Build the full report from the manifest and all cells.
pub fn assemble(
    manifest: Manifest,
    cells: Vec<CellResult>,
    pairs: &[(Measure, Measure)],
) -> Result<RunReport> {
    let datasets: Vec<String> = manifest.datasets.iter().map(|d| d.name.clone()).collect();
    let mut summaries = Vec::new();
    for d in &datasets {
        for &m in &manifest.measures {
            let grid = manifest
                .grids
                .iter()
                .find(|g| &g.dataset == d && g.grid.measure == m)
                .ok_or_else(|| Error::MissingCell {
                    dataset: d.clone(),
                    measure: m.to_string(),
                })?;
            let mine: Vec<&CellResult> = cells_of(&cells, d, m).collect();
            if mine.is_empty() {
                return Err(Error::MissingCell {
                    dataset: d.clone(),
                    measure: m.to_string(),
                });
            }
            let histogram = grid
                .grid
                .points
                .iter()
                .map(|p| ParamCount {
                    point: *p,
                    count: mine.iter().filter(|c| c.point == *p).count(),
                })
                .collect();
            summaries.push(MeasureSummary {
                dataset: d.clone(),
                measure: m,
                mean_train_error: mean(mine.iter().map(|c| c.train_error())),
                mean_test_error: mean(mine.iter().map(|c| c.test_error())),
                histogram,
            });
        }
    }
    let analysis = analyze(&cells, &datasets, &manifest.measures, manifest.alpha)?;
    let find = |d: &str, m: Measure| summaries.iter().find(|s| s.dataset == d && s.measure == m);
    let sharpshooter = pairs
        .iter()
        .filter(|(a, b)| manifest.measures.contains(a) && manifest.measures.contains(b))
        .map(|&(candidate, baseline)| SharpshooterTable {
            candidate,
            baseline,
            points: datasets
                .iter()
                .filter_map(|d| {
                    let (a, b) = (find(d, candidate)?, find(d, baseline)?);
                    Some(SharpshooterPoint {
                        dataset: d.clone(),
                        train_gain: b.mean_train_error - a.mean_train_error,
                        test_gain: b.mean_test_error - a.mean_test_error,
                    })
                })
                .collect(),
        })
        .collect();
    Ok(RunReport {
        manifest,
        summaries,
        cells,
        analysis,
        sharpshooter,
    })
}

/// Fixed three-decimal text.
pub fn fmt_error(v: f64) -> String {
    format!("{v:.3}")
}

/// Four significant digits in plain decimal notation.
pub fn fmt_p(p: f64) -> String {
    if !p.is_finite() {
        return "NA".into();
    }
    if p == 0.0 {
        return "0.000".into();
    }
    let decimals = (3 - p.abs().log10().floor() as i32).max(0) as usize;
    format!("{p:.decimals$}")
}

const CELL_HEADER: [&str; 11] = [
    "dataset",
    "measure",
    "repetition",
    "fold",
    "point",
    "train_errors",
    "train_total",
    "test_errors",
    "test_total",
    "train_error",
    "test_error",
];

fn write_csv(dir: &Path, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let path = dir.join(name);
    let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush().map_err(|e| Error::io(&path, e))
}

fn strings<const N: usize>(xs: [&str; N]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn outcome_fields(t: &WilcoxonOutcome) -> [String; 4] {
    match t {
        WilcoxonOutcome::Tested {
            p_value,
            w_plus,
            n,
            exact,
        } => [
            if *exact { "exact" } else { "normal" }.into(),
            n.to_string(),
            format!("{w_plus:.1}"),
            fmt_p(*p_value),
        ],
        WilcoxonOutcome::NoDifference => [
            "no-difference".into(),
            "0".into(),
            String::new(),
            fmt_p(1.0),
        ],
        WilcoxonOutcome::InsufficientData { n } => [
            "insufficient".into(),
            n.to_string(),
            String::new(),
            fmt_p(1.0),
        ],
    }
}

fn comparison_rows(comparisons: &[Comparison]) -> Vec<Vec<String>> {
    comparisons
        .iter()
        .map(|c| {
            let mut row = vec![c.a.to_string(), c.b.to_string()];
            row.extend(outcome_fields(&c.test));
            row.push(c.rejected.to_string());
            row
        })
        .collect()
}

/// Write the significance tables for `analysis` into `dir`.
pub fn emit_analysis(analysis: &Analysis, dir: &Path) -> Result<()> {
    let header = strings([
        "measure_a",
        "measure_b",
        "method",
        "n",
        "w_plus",
        "p_value",
        "rejected",
    ]);
    write_csv(
        dir,
        "significance.csv",
        &header,
        &comparison_rows(&analysis.pairwise),
    )?;

    let mut best_rows = Vec::new();
    for v in &analysis.best {
        if v.comparisons.is_empty() {
            best_rows.push(vec![
                v.dataset.clone(),
                v.best.to_string(),
                v.significant.to_string(),
            ]);
        }
        for r in comparison_rows(&v.comparisons) {
            let mut row = vec![
                v.dataset.clone(),
                v.best.to_string(),
                v.significant.to_string(),
            ];
            row.extend(r.into_iter().skip(1));
            best_rows.push(row);
        }
    }
    let header = strings([
        "dataset",
        "best",
        "significant",
        "against",
        "method",
        "n",
        "w_plus",
        "p_value",
        "rejected",
    ]);
    let best_rows: Vec<Vec<String>> = best_rows
        .into_iter()
        .map(|mut r| {
            r.resize(header.len(), String::new());
            r
        })
        .collect();
    write_csv(dir, "best_measure.csv", &header, &best_rows)?;

    let r = &analysis.ranks;
    let mut header = vec!["dataset".to_string()];
    header.extend(r.measures.iter().map(|m| m.to_string()));
    let mut rows: Vec<Vec<String>> = r
        .datasets
        .iter()
        .zip(&r.ranks)
        .map(|(d, ranks)| {
            let mut row = vec![d.clone()];
            row.extend(ranks.iter().map(|x| format!("{x:.3}")));
            row
        })
        .collect();
    let mut avg = vec!["average".to_string()];
    avg.extend(r.average.iter().map(|x| format!("{x:.3}")));
    rows.push(avg);
    write_csv(dir, "ranks.csv", &header, &rows)
}

/// Write every report table and `report.json` into `dir` (created if
/// missing). Output is a pure function of the report.
pub fn emit_report(report: &RunReport, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let m = &report.manifest;

    let mut header = vec!["dataset".to_string()];
    header.extend(m.measures.iter().map(|x| x.to_string()));
    let rows: Vec<Vec<String>> = m
        .datasets
        .iter()
        .map(|d| {
            let mut row = vec![d.name.clone()];
            row.extend(m.measures.iter().map(|&x| {
                report
                    .summary(&d.name, x)
                    .map(|s| fmt_error(s.mean_test_error))
                    .unwrap_or_default()
            }));
            row
        })
        .collect();
    write_csv(dir, "error_table.csv", &header, &rows)?;

    let rows: Vec<Vec<String>> = m
        .datasets
        .iter()
        .map(|d| {
            let mut row = vec![d.name.clone()];
            row.extend(m.measures.iter().map(|&x| {
                report
                    .summary(&d.name, x)
                    .map(|s| fmt_error(s.mean_train_error))
                    .unwrap_or_default()
            }));
            row
        })
        .collect();
    write_csv(dir, "train_error_table.csv", &header, &rows)?;

    write_csv(
        dir,
        "cells.csv",
        &strings(CELL_HEADER),
        &cell_rows(&report.cells),
    )?;

    emit_analysis(&report.analysis, dir)?;

    for t in &report.sharpshooter {
        let rows: Vec<Vec<String>> = t
            .points
            .iter()
            .map(|p| {
                vec![
                    p.dataset.clone(),
                    fmt_error(p.train_gain),
                    fmt_error(p.test_gain),
                    p.agrees().to_string(),
                ]
            })
            .collect();
        write_csv(
            dir,
            &format!("sharpshooter_{}_vs_{}.csv", t.candidate, t.baseline),
            &strings(["dataset", "train_gain", "test_gain", "agree"]),
            &rows,
        )?;
    }

    let mut rows = Vec::new();
    for s in &report.summaries {
        let total: usize = s.histogram.iter().map(|h| h.count).sum();
        for h in &s.histogram {
            rows.push(vec![
                s.dataset.clone(),
                s.measure.to_string(),
                h.point.to_string(),
                h.count.to_string(),
                format!("{:.3}", 100.0 * h.count as f64 / total.max(1) as f64),
            ]);
        }
    }
    write_csv(
        dir,
        "param_histogram.csv",
        &strings(["dataset", "measure", "point", "count", "percent"]),
        &rows,
    )?;

    write_text(dir, "manifest.json", &serde_json::to_string_pretty(m)?)?;
    write_text(dir, "report.json", &report.to_json()?)
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, format!("{text}\n")).map_err(|e| Error::io(&path, e))
}

fn cell_rows(cells: &[CellResult]) -> Vec<Vec<String>> {
    cells
        .iter()
        .map(|c| {
            vec![
                c.dataset.clone(),
                c.measure.to_string(),
                c.repetition.to_string(),
                c.fold.to_string(),
                c.point.to_string(),
                c.train_errors.to_string(),
                c.train_total.to_string(),
                c.test_errors.to_string(),
                c.test_total.to_string(),
                fmt_error(c.train_error()),
                fmt_error(c.test_error()),
            ]
        })
        .collect()
}

/// Parse a `cells.csv` written by [`emit_report`]. Error ratios are rebuilt
/// from the integer counts, so they are bit-identical to the run's.
pub fn read_cells(path: impl AsRef<Path>) -> Result<Vec<CellResult>> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Parse {
                path: path.display().to_string(),
                line: 1,
                reason: format!("missing column '{name}'"),
            })
    };
    let idx: Vec<usize> = CELL_HEADER[..9]
        .iter()
        .map(|h| col(h))
        .collect::<Result<_>>()?;
    let mut cells = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = k + 2;
        let bad = |reason: String| Error::Parse {
            path: path.display().to_string(),
            line,
            reason,
        };
        let field = |i: usize| rec.get(idx[i]).unwrap_or("");
        let int = |i: usize| -> Result<usize> {
            field(i).parse().map_err(|_| {
                bad(format!(
                    "{} is not an integer: '{}'",
                    CELL_HEADER[i],
                    field(i)
                ))
            })
        };
        cells.push(CellResult {
            dataset: field(0).to_string(),
            measure: field(1).parse().map_err(|e: Error| bad(e.to_string()))?,
            repetition: int(2)?,
            fold: int(3)?,
            point: field(4).parse().map_err(|e: Error| bad(e.to_string()))?,
            train_errors: int(5)?,
            train_total: int(6)?,
            test_errors: int(7)?,
            test_total: int(8)?,
        });
    }
    Ok(cells)
}

/// Datasets and measures in order of first appearance.
pub fn cell_axes(cells: &[CellResult]) -> (Vec<String>, Vec<Measure>) {
    let mut datasets: Vec<String> = Vec::new();
    let mut measures: Vec<Measure> = Vec::new();
    for c in cells {
        if !datasets.contains(&c.dataset) {
            datasets.push(c.dataset.clone());
        }
        if !measures.contains(&c.measure) {
            measures.push(c.measure);
        }
    }
    (datasets, measures)
}
