//! Evaluation protocol: balanced, stratified k-fold cross-validation repeated
//! several times, with a leave-one-out grid search on each training split.
//!
//! A plan runs dataset by dataset. Fold assignments depend only on the seed,
//! the dataset and the repetition, so every measure sees the same splits and
//! per-fold results are matched across measures. For deterministic measures
//! the full pairwise distance matrix of a dataset is computed once per grid
//! point and every cell reads from it; the random baseline draws fresh
//! tables per cell from its own keyed streams.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elastic;
use crate::error::{Error, Result};
use crate::grid::{build_grid, GridOptions, ParameterGrid};
use crate::lockstep::{self, FourierSpectrum};
use crate::measure::{Measure, MeasureConfig, PairKernel, ParamPoint};
use crate::nn::{count_errors_1nn, count_errors_loo, DistanceTable};
use crate::report::{self, RunReport};
use crate::rng::{Purpose, RandomStream, StreamId};
use crate::series::{Label, LabeledDataset, TimeSeries};

pub const DEFAULT_REPETITIONS: usize = 20;
pub const DEFAULT_FOLDS: usize = 3;
/// Grid points whose full tables are computed together.
const BATCH: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    CrossValidation,
    FixedSplit,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cv" | "cross-validation" => Ok(Mode::CrossValidation),
            "fixed" | "fixed-split" => Ok(Mode::FixedSplit),
            _ => Err(Error::InvalidParameter(format!("unknown mode '{s}'"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::CrossValidation => "cross-validation",
            Mode::FixedSplit => "fixed-split",
        })
    }
}

/// A dataset as handed to the harness: either one pool of items, or the
/// provided train/test split. Cross-validation pools a split.
#[derive(Debug, Clone)]
pub enum PlanDataset {
    Pooled(LabeledDataset),
    Split {
        train: LabeledDataset,
        test: LabeledDataset,
    },
}

impl PlanDataset {
    pub fn name(&self) -> &str {
        match self {
            PlanDataset::Pooled(d) => d.name(),
            PlanDataset::Split { train, .. } => train.name(),
        }
    }

    pub fn pooled(&self) -> LabeledDataset {
        match self {
            PlanDataset::Pooled(d) => d.clone(),
            PlanDataset::Split { train, test } => train.concat(test),
        }
    }
}

/// Everything that determines a run.
#[derive(Debug, Clone)]
pub struct EvaluationPlan {
    pub datasets: Vec<PlanDataset>,
    pub measures: Vec<Measure>,
    pub grid: GridOptions,
    pub repetitions: usize,
    pub folds: usize,
    pub seed: u64,
    pub mode: Mode,
    /// Worker threads; `0` uses the global rayon pool.
    pub workers: usize,
    pub alpha: f64,
    /// `(candidate, baseline)` pairs for train/test gain tables.
    pub sharpshooter_pairs: Vec<(Measure, Measure)>,
}

impl EvaluationPlan {
    pub fn new(datasets: Vec<PlanDataset>, measures: Vec<Measure>, seed: u64) -> Self {
        Self {
            datasets,
            measures,
            grid: GridOptions::default(),
            repetitions: DEFAULT_REPETITIONS,
            folds: DEFAULT_FOLDS,
            seed,
            mode: Mode::CrossValidation,
            workers: 0,
            alpha: crate::stats::DEFAULT_ALPHA,
            sharpshooter_pairs: default_sharpshooter_pairs(&Measure::ALL),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions < 1 {
            return Err(Error::InvalidParameter("repetitions must be >= 1".into()));
        }
        if self.folds < 2 {
            return Err(Error::InvalidParameter("folds must be >= 2".into()));
        }
        if self.measures.is_empty() {
            return Err(Error::InvalidParameter("no measures requested".into()));
        }
        if self.datasets.is_empty() {
            return Err(Error::InvalidParameter("no datasets given".into()));
        }
        if self.mode == Mode::FixedSplit {
            if let Some(d) = self
                .datasets
                .iter()
                .find(|d| matches!(d, PlanDataset::Pooled(_)))
            {
                return Err(Error::InvalidDataset {
                    name: d.name().to_string(),
                    reason: "fixed-split mode needs a provided train/test split".into(),
                });
            }
        }
        Ok(())
    }
}

/// TWED against DTW and against Euclidean, when those measures are present.
pub fn default_sharpshooter_pairs(measures: &[Measure]) -> Vec<(Measure, Measure)> {
    [
        (Measure::Twed, Measure::Dtw),
        (Measure::Twed, Measure::Euclidean),
    ]
    .into_iter()
    .filter(|(a, b)| measures.contains(a) && measures.contains(b))
    .collect()
}

/// Z-normalize every series; for non-elastic measures, first resample
/// unequal-length datasets to their longest length.
pub fn preprocess(ds: &LabeledDataset, measure: Measure) -> Result<LabeledDataset> {
    if !measure.is_elastic() && !ds.is_equal_length() {
        return Ok(ds.resampled(ds.max_len())?.znormalized());
    }
    Ok(ds.znormalized())
}

/// Balanced subsample of one repetition and its fold of every kept item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub repetition: usize,
    pub folds: usize,
    /// `None` for items dropped by balancing.
    pub fold_of: Vec<Option<usize>>,
}

impl FoldAssignment {
    /// Indices in fold `f`, ascending.
    pub fn test_indices(&self, f: usize) -> Vec<usize> {
        self.fold_of
            .iter()
            .enumerate()
            .filter_map(|(i, &g)| (g == Some(f)).then_some(i))
            .collect()
    }

    /// Kept indices outside fold `f`, ascending.
    pub fn train_indices(&self, f: usize) -> Vec<usize> {
        self.fold_of
            .iter()
            .enumerate()
            .filter_map(|(i, &g)| matches!(g, Some(h) if h != f).then_some(i))
            .collect()
    }

    pub fn balanced_len(&self) -> usize {
        self.fold_of.iter().filter(|g| g.is_some()).count()
    }
}

/// Subsample every class uniformly at random down to the smallest class
/// size, then deal each class's kept items round-robin over the folds.
///
/// The dealing position carries over from one class to the next, so the
/// per-class remainders land on different folds and fold sizes stay within
/// one of each other overall as well as per class.
pub fn balance_and_fold(
    ds: &LabeledDataset,
    folds: usize,
    repetition: usize,
    stream: &mut RandomStream,
) -> Result<FoldAssignment> {
    if folds < 2 {
        return Err(Error::InvalidParameter("folds must be >= 2".into()));
    }
    let sizes = ds.class_sizes();
    for (class, &n) in sizes.iter().enumerate() {
        if n > 0 && n < folds {
            return Err(Error::ClassTooSmall {
                label: ds.class_names()[class].clone(),
                count: n,
                min: folds,
            });
        }
    }
    let keep = sizes.iter().copied().filter(|&n| n > 0).min().unwrap_or(0);
    let mut fold_of = vec![None; ds.len()];
    let mut deal = 0usize;
    for class in 0..sizes.len() {
        let mut members: Vec<usize> = ds
            .labels()
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == class).then_some(i))
            .collect();
        if members.is_empty() {
            continue;
        }
        members.shuffle(stream);
        for &i in &members[..keep] {
            fold_of[i] = Some(deal % folds);
            deal += 1;
        }
    }
    Ok(FoldAssignment {
        repetition,
        folds,
        fold_of,
    })
}

/// Stream used for balancing repetition `repetition` of dataset `dataset`.
pub fn balance_stream(seed: u64, dataset: usize, repetition: usize) -> RandomStream {
    RandomStream::new(
        seed,
        StreamId::new(repetition, 0, Purpose::Balance(dataset as u32)),
    )
}

/// Result of one (dataset, measure, repetition, fold) evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub dataset: String,
    pub measure: Measure,
    pub repetition: usize,
    pub fold: usize,
    pub point: ParamPoint,
    pub train_errors: usize,
    pub train_total: usize,
    pub test_errors: usize,
    pub test_total: usize,
}

impl CellResult {
    /// Leave-one-out error ratio on the training split at the chosen point.
    pub fn train_error(&self) -> f64 {
        self.train_errors as f64 / self.train_total as f64
    }

    pub fn test_error(&self) -> f64 {
        self.test_errors as f64 / self.test_total as f64
    }
}

/// Distances for one measure over one dataset, across its grid.
pub struct MeasureEngine<'a> {
    measure: Measure,
    grid: ParameterGrid,
    series: &'a [TimeSeries],
    spectra: Option<Vec<FourierSpectrum>>,
    seed: u64,
    dataset_index: usize,
}

impl<'a> MeasureEngine<'a> {
    /// `series` must already be preprocessed.
    pub fn new(
        measure: Measure,
        grid: ParameterGrid,
        series: &'a [TimeSeries],
        seed: u64,
        dataset_index: usize,
    ) -> Result<Self> {
        if grid.measure != measure {
            return Err(Error::InvalidParameter(format!(
                "grid for {} used with measure {measure}",
                grid.measure
            )));
        }
        let spectra = (measure == Measure::Fc)
            .then(|| series.iter().map(|s| lockstep::dft(s.values())).collect());
        Ok(Self {
            measure,
            grid,
            series,
            spectra,
            seed,
            dataset_index,
        })
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn grid(&self) -> &ParameterGrid {
        &self.grid
    }

    fn kernel(&self, point: usize) -> Result<PairKernel<'_>> {
        let config = MeasureConfig::new(self.measure, self.grid.points[point])?;
        PairKernel::new(config, self.series, self.spectra.as_deref())
    }

    fn random_table(&self, rows: usize, cols: usize, key: StreamId) -> DistanceTable {
        let mut stream = RandomStream::new(self.seed, key);
        DistanceTable::from_fn(rows, cols, |_, _| stream.draw_uniform())
    }

    /// `rows x cols` table at grid point `point`. `key` selects the random
    /// stream for the random baseline and is ignored otherwise.
    pub fn table(
        &self,
        point: usize,
        rows: &[usize],
        cols: &[usize],
        key: StreamId,
    ) -> Result<DistanceTable> {
        if self.measure == Measure::Random {
            return Ok(self.random_table(rows.len(), cols.len(), key));
        }
        let kernel = self.kernel(point)?;
        let data: Vec<f64> = rows
            .par_iter()
            .flat_map_iter(|&r| cols.iter().map(|&c| kernel.pair(r, c)).collect::<Vec<_>>())
            .collect();
        DistanceTable::new(rows.len(), cols.len(), data)
    }

    /// All-pairs table over the whole dataset at `point`. Symmetric pairs are
    /// computed once.
    pub fn full_table(&self, point: usize) -> Result<DistanceTable> {
        let kernel = self.kernel(point)?;
        let n = self.series.len();
        let upper: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|r| {
                let lr = self.series[r].len();
                (0..n)
                    .map(|c| {
                        if c < r && self.measure.is_symmetric(lr, self.series[c].len()) {
                            f64::NAN
                        } else {
                            kernel.pair(r, c)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut data = Vec::with_capacity(n * n);
        for (r, row) in upper.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                data.push(if v.is_nan() { upper[c][r] } else { v });
            }
        }
        DistanceTable::new(n, n, data)
    }

    /// Full tables for several grid points. Five EDR thresholds, or five
    /// TWED penalties sharing one stiffness, go through the batched kernels;
    /// the values are identical to [`MeasureEngine::full_table`].
    pub fn full_tables(&self, points: &[usize]) -> Result<Vec<DistanceTable>> {
        let pts: Vec<ParamPoint> = points.iter().map(|&p| self.grid.points[p]).collect();
        match (self.measure, pts.as_slice()) {
            (Measure::Edr, [_, _, _, _, _]) => {
                let eps: [f64; BATCH] = std::array::from_fn(|k| match pts[k] {
                    ParamPoint::Epsilon { epsilon } => epsilon,
                    _ => unreachable!("EDR grid holds thresholds"),
                });
                Ok(self.fill_batch(|x, y| elastic::edr_batch(x, y, eps)))
            }
            (Measure::Twed, [ParamPoint::Twed { nu, .. }, ..])
                if pts.len() == BATCH
                    && pts
                        .iter()
                        .all(|p| matches!(p, ParamPoint::Twed { nu: v, .. } if v == nu)) =>
            {
                let nu = *nu;
                let lambdas: [f64; BATCH] = std::array::from_fn(|k| match pts[k] {
                    ParamPoint::Twed { lambda, .. } => lambda,
                    _ => unreachable!(),
                });
                for &p in &pts {
                    MeasureConfig::new(Measure::Twed, p)?;
                }
                Ok(self.fill_batch(|x, y| elastic::twed_batch(x, y, nu, lambdas)))
            }
            _ => points.iter().map(|&p| self.full_table(p)).collect(),
        }
    }

    fn fill_batch<const K: usize>(
        &self,
        f: impl Fn(&[f64], &[f64]) -> [f64; K] + Sync,
    ) -> Vec<DistanceTable> {
        let n = self.series.len();
        let rows: Vec<Vec<[f64; K]>> = (0..n)
            .into_par_iter()
            .map(|r| {
                (0..n)
                    .map(|c| {
                        if c < r {
                            [f64::NAN; K]
                        } else {
                            f(self.series[r].values(), self.series[c].values())
                        }
                    })
                    .collect()
            })
            .collect();
        (0..K)
            .map(|k| {
                DistanceTable::from_fn(
                    n,
                    n,
                    |r, c| if c < r { rows[c][r][k] } else { rows[r][c][k] },
                )
            })
            .collect()
    }

    fn stream_key(&self, repetition: usize, fold: usize, test: bool) -> StreamId {
        let tag = self.dataset_index as u32;
        let purpose = if test {
            Purpose::RandomTest(tag)
        } else {
            Purpose::RandomTrain(tag)
        };
        StreamId::new(repetition, fold, purpose)
    }
}

fn sub_table(full: &DistanceTable, rows: &[usize], cols: &[usize]) -> DistanceTable {
    DistanceTable::from_fn(rows.len(), cols.len(), |r, c| full.get(rows[r], cols[c]))
}

fn pick<T: Copy>(items: &[T], idx: &[usize]) -> Vec<T> {
    idx.iter().map(|&i| items[i]).collect()
}

/// Earliest grid point with the fewest leave-one-out errors.
fn argmin_first(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c < counts[best] {
            best = i;
        }
    }
    best
}

/// Grid search on `train` by leave-one-out, then 1NN evaluation of `test`
/// against `train` at the chosen point.
#[allow(clippy::too_many_arguments)]
pub fn evaluate_split(
    engine: &MeasureEngine<'_>,
    dataset: &str,
    labels: &[Label],
    train: &[usize],
    test: &[usize],
    repetition: usize,
    fold: usize,
) -> Result<CellResult> {
    let train_labels = pick(labels, train);
    let test_labels = pick(labels, test);
    let train_key = engine.stream_key(repetition, fold, false);
    let mut counts = Vec::with_capacity(engine.grid.len());
    for p in 0..engine.grid.len() {
        let t = engine.table(p, train, train, train_key)?;
        counts.push(count_errors_loo(&train_labels, &t)?);
    }
    let best = argmin_first(&counts);
    let t = engine.table(best, test, train, engine.stream_key(repetition, fold, true))?;
    let test_errors = count_errors_1nn(&test_labels, &train_labels, &t)?;
    Ok(CellResult {
        dataset: dataset.to_string(),
        measure: engine.measure,
        repetition,
        fold,
        point: engine.grid.points[best],
        train_errors: counts[best],
        train_total: train.len(),
        test_errors,
        test_total: test.len(),
    })
}

/// One cross-validation cell: fold `fold` is the test split, the remaining
/// kept items train.
pub fn run_cell(
    engine: &MeasureEngine<'_>,
    ds: &LabeledDataset,
    assignment: &FoldAssignment,
    fold: usize,
) -> Result<CellResult> {
    let train = assignment.train_indices(fold);
    let test = assignment.test_indices(fold);
    evaluate_split(
        engine,
        ds.name(),
        ds.labels(),
        &train,
        &test,
        assignment.repetition,
        fold,
    )
}

/// Grid search and evaluation on a provided train/test split. Both sets must
/// already be preprocessed and share a class inventory.
pub fn run_fixed_split(
    train: &LabeledDataset,
    test: &LabeledDataset,
    measure: Measure,
    grid: &ParameterGrid,
    seed: u64,
) -> Result<CellResult> {
    let test = train.align_classes(test)?;
    let mut series = train.series().to_vec();
    series.extend(test.series().iter().cloned());
    let mut labels = train.labels().to_vec();
    labels.extend(test.labels());
    let engine = MeasureEngine::new(measure, grid.clone(), &series, seed, 0)?;
    let tr: Vec<usize> = (0..train.len()).collect();
    let te: Vec<usize> = (train.len()..series.len()).collect();
    evaluate_split(&engine, train.name(), &labels, &tr, &te, 0, 0)
}

/// All cells of one measure on one dataset, in (repetition, fold) order.
///
/// Deterministic measures go grid point by grid point: one full table, then
/// every cell's leave-one-out count and test count at that point. The chosen
/// point and its counts are identical to what [`run_cell`] produces.
pub fn run_measure_cells(
    engine: &MeasureEngine<'_>,
    ds: &LabeledDataset,
    assignments: &[FoldAssignment],
) -> Result<Vec<CellResult>> {
    let cells: Vec<(usize, usize)> = assignments
        .iter()
        .enumerate()
        .flat_map(|(a, fa)| (0..fa.folds).map(move |f| (a, f)))
        .collect();
    let wrap = |a: usize, f: usize, e: Error| Error::Cell {
        dataset: ds.name().to_string(),
        measure: engine.measure.to_string(),
        repetition: assignments[a].repetition,
        fold: f,
        source: Box::new(e),
    };
    if engine.measure == Measure::Random {
        return cells
            .par_iter()
            .map(|&(a, f)| run_cell(engine, ds, &assignments[a], f).map_err(|e| wrap(a, f, e)))
            .collect();
    }
    let splits: Vec<(Vec<usize>, Vec<usize>)> = cells
        .iter()
        .map(|&(a, f)| {
            (
                assignments[a].train_indices(f),
                assignments[a].test_indices(f),
            )
        })
        .collect();
    let labels = ds.labels();
    // per cell, per point: (loo errors, test errors)
    let mut counts: Vec<Vec<(usize, usize)>> =
        vec![Vec::with_capacity(engine.grid.len()); cells.len()];
    let all_points: Vec<usize> = (0..engine.grid.len()).collect();
    for chunk in all_points.chunks(BATCH) {
        let tables = engine.full_tables(chunk).map_err(|e| wrap(0, 0, e))?;
        for full in &tables {
            let at_point: Vec<(usize, usize)> = splits
                .par_iter()
                .map(|(train, test)| {
                    let train_labels = pick(labels, train);
                    let loo = count_errors_loo(&train_labels, &sub_table(full, train, train))?;
                    let out = count_errors_1nn(
                        &pick(labels, test),
                        &train_labels,
                        &sub_table(full, test, train),
                    )?;
                    Ok((loo, out))
                })
                .collect::<Result<_>>()?;
            for (c, v) in counts.iter_mut().zip(at_point) {
                c.push(v);
            }
        }
    }
    Ok(cells
        .iter()
        .zip(&splits)
        .zip(&counts)
        .map(|((&(a, f), (train, test)), per_point)| {
            let loo: Vec<usize> = per_point.iter().map(|&(l, _)| l).collect();
            let best = argmin_first(&loo);
            CellResult {
                dataset: ds.name().to_string(),
                measure: engine.measure,
                repetition: assignments[a].repetition,
                fold: f,
                point: engine.grid.points[best],
                train_errors: per_point[best].0,
                train_total: train.len(),
                test_errors: per_point[best].1,
                test_total: test.len(),
            }
        })
        .collect())
}

/// Run the whole plan and assemble the report.
pub fn run_plan(plan: &EvaluationPlan) -> Result<RunReport> {
    plan.validate()?;
    if plan.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(plan.workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;
        pool.install(|| run_plan_inner(plan))
    } else {
        run_plan_inner(plan)
    }
}

fn run_plan_inner(plan: &EvaluationPlan) -> Result<RunReport> {
    let mut cells = Vec::new();
    let mut datasets = Vec::new();
    let mut grids = Vec::new();
    for (d_idx, pd) in plan.datasets.iter().enumerate() {
        let (summary, ds_cells, ds_grids) = match plan.mode {
            Mode::CrossValidation => run_cv_dataset(plan, d_idx, &pd.pooled())?,
            Mode::FixedSplit => match pd {
                PlanDataset::Split { train, test } => run_fixed_dataset(plan, train, test)?,
                PlanDataset::Pooled(_) => unreachable!("validated"),
            },
        };
        datasets.push(summary);
        cells.extend(ds_cells);
        grids.extend(ds_grids);
    }
    let manifest = report::Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: plan.seed,
        repetitions: plan.repetitions,
        folds: plan.folds,
        mode: plan.mode,
        nu_min: plan.grid.nu_min,
        alpha: plan.alpha,
        measures: plan.measures.clone(),
        datasets,
        grids,
    };
    report::assemble(manifest, cells, &plan.sharpshooter_pairs)
}

type DatasetRun = (
    report::DatasetSummary,
    Vec<CellResult>,
    Vec<report::GridEntry>,
);

fn run_cv_dataset(plan: &EvaluationPlan, d_idx: usize, ds: &LabeledDataset) -> Result<DatasetRun> {
    let assignments = (0..plan.repetitions)
        .map(|rep| {
            balance_and_fold(
                ds,
                plan.folds,
                rep,
                &mut balance_stream(plan.seed, d_idx, rep),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = report::DatasetSummary::new(ds, assignments[0].balanced_len());
    let mut cells = Vec::new();
    let mut grids = Vec::new();
    for &m in &plan.measures {
        let prepared = preprocess(ds, m)?;
        let grid = build_grid(m, prepared.max_len(), plan.grid)?;
        grids.push(report::GridEntry {
            dataset: ds.name().to_string(),
            grid: grid.clone(),
        });
        let engine = MeasureEngine::new(m, grid, prepared.series(), plan.seed, d_idx)?;
        cells.extend(run_measure_cells(&engine, &prepared, &assignments)?);
    }
    Ok((summary, cells, grids))
}

fn run_fixed_dataset(
    plan: &EvaluationPlan,
    train: &LabeledDataset,
    test: &LabeledDataset,
) -> Result<DatasetRun> {
    let pooled = train.concat(test);
    let summary = report::DatasetSummary::new(&pooled, pooled.len());
    let mut cells = Vec::new();
    let mut grids = Vec::new();
    for &m in &plan.measures {
        // resample both splits to one common length if needed
        let prepared = preprocess(&pooled, m)?;
        let (ptrain, ptest) = split_back(&prepared, train.len(), test.name())?;
        let grid = build_grid(m, prepared.max_len(), plan.grid)?;
        grids.push(report::GridEntry {
            dataset: train.name().to_string(),
            grid: grid.clone(),
        });
        let cell =
            run_fixed_split(&ptrain, &ptest, m, &grid, plan.seed).map_err(|e| Error::Cell {
                dataset: train.name().to_string(),
                measure: m.to_string(),
                repetition: 0,
                fold: 0,
                source: Box::new(e),
            })?;
        cells.push(cell);
    }
    Ok((summary, cells, grids))
}

fn split_back(
    pooled: &LabeledDataset,
    n_train: usize,
    test_name: &str,
) -> Result<(LabeledDataset, LabeledDataset)> {
    let part = |range: std::ops::Range<usize>, name: &str| {
        LabeledDataset::new(
            name,
            pooled.series()[range.clone()].to_vec(),
            pooled.labels()[range].to_vec(),
            pooled.class_names().to_vec(),
        )
    };
    Ok((
        part(0..n_train, pooled.name())?,
        part(n_train..pooled.len(), test_name)?,
    ))
}
