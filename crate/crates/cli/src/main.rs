use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use tsmeasures::grid::{build_grid, GridOptions, NuMin};
use tsmeasures::harness::{
    default_sharpshooter_pairs, run_plan, EvaluationPlan, Mode, PlanDataset,
};
use tsmeasures::measure::{Measure, MeasureConfig, ParamPoint};
use tsmeasures::report::{self, analyze, cell_axes, emit_analysis, emit_report, read_cells};
use tsmeasures::stats::DEFAULT_ALPHA;
use tsmeasures::{synthetic, ucr};

#[derive(Parser)]
#[command(
    name = "tsmeasures",
    version,
    about = "Evaluate time series dissimilarity measures with 1NN classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the evaluation protocol and write report files.
    Run(RunArgs),
    /// Compute one dissimilarity between two series files.
    Distance(DistanceArgs),
    /// Print the parameter grid of each measure for series length N.
    Grids(GridsArgs),
    /// Recompute ranks and significance tables from a cells.csv file.
    Stats(StatsArgs),
    /// Write a synthetic dataset in the archive format.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Dataset locations: a directory holding NAME_TRAIN and NAME_TEST
    /// (NAME is the directory name), or a single archive-format file.
    #[arg(required = true)]
    datasets: Vec<PathBuf>,
    /// Comma-separated measures.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "random,euclidean,fc,ar,dtw,edr,twed,mjc"
    )]
    measures: Vec<Measure>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores). Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// `cv` (balanced repeated cross-validation) or `fixed` (provided split).
    #[arg(long, default_value = "cv")]
    mode: Mode,
    /// Lower end of the TWED stiffness grid.
    #[arg(long = "nu-min", default_value = "1e-4")]
    nu_min: NuMin,
    #[arg(long, default_value_t = 20)]
    repetitions: usize,
    #[arg(long, default_value_t = 3)]
    folds: usize,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Measure pairs `candidate:baseline` for gain tables.
    #[arg(long, value_delimiter = ',', value_parser = parse_pair)]
    pairs: Option<Vec<(Measure, Measure)>>,
    /// Output directory.
    #[arg(long, short, default_value = "report")]
    out: PathBuf,
}

#[derive(Args)]
struct DistanceArgs {
    #[arg(long)]
    measure: Measure,
    #[arg(long)]
    theta: Option<usize>,
    #[arg(long)]
    eta: Option<usize>,
    #[arg(long)]
    omega: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Z-normalize both series first.
    #[arg(long)]
    znorm: bool,
    /// Files of numbers separated by commas or whitespace.
    a: PathBuf,
    b: PathBuf,
}

#[derive(Args)]
struct GridsArgs {
    #[arg(long)]
    n: usize,
    /// Only this measure; values are printed one per line.
    #[arg(long)]
    measure: Option<Measure>,
    #[arg(long = "nu-min", default_value = "1e-4")]
    nu_min: NuMin,
}

#[derive(Args)]
struct StatsArgs {
    /// cells.csv from a previous run.
    cells: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, short, default_value = ".")]
    out: PathBuf,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Generator {
    /// Cylinder-bell-funnel, 3 classes.
    Cbf,
    /// Control charts, 6 classes.
    Control,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: Generator,
    #[arg(long, default_value_t = 100)]
    per_class: usize,
    /// Series length (default 128 for cbf, 60 for control).
    #[arg(long)]
    length: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file.
    #[arg(long, short)]
    out: PathBuf,
}

fn parse_pair(s: &str) -> Result<(Measure, Measure), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected candidate:baseline, got '{s}'"))?;
    Ok((
        a.parse().map_err(|e: tsmeasures::Error| e.to_string())?,
        b.parse().map_err(|e: tsmeasures::Error| e.to_string())?,
    ))
}

fn load_dataset(path: &Path) -> anyhow::Result<PlanDataset> {
    if path.is_dir() {
        let name = path
            .file_name()
            .and_then(|n| n.to_str())
            .context("dataset directory has no usable name")?;
        let (train, test) = ucr::load_split(path, name)?;
        Ok(PlanDataset::Split { train, test })
    } else {
        Ok(PlanDataset::Pooled(ucr::load_ucr(path)?))
    }
}

fn run(args: RunArgs) -> anyhow::Result<()> {
    let datasets = args
        .datasets
        .iter()
        .map(|p| load_dataset(p).with_context(|| format!("loading {}", p.display())))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut plan = EvaluationPlan::new(datasets, args.measures.clone(), args.seed);
    plan.grid = GridOptions {
        nu_min: args.nu_min,
    };
    plan.repetitions = args.repetitions;
    plan.folds = args.folds;
    plan.mode = args.mode;
    plan.workers = args.workers;
    plan.alpha = args.alpha;
    plan.sharpshooter_pairs = args
        .pairs
        .unwrap_or_else(|| default_sharpshooter_pairs(&args.measures));
    let report = run_plan(&plan)?;
    emit_report(&report, &args.out)?;
    for s in &report.summaries {
        println!(
            "{}\t{}\ttrain {}\ttest {}",
            s.dataset,
            s.measure,
            report::fmt_error(s.mean_train_error),
            report::fmt_error(s.mean_test_error)
        );
    }
    Ok(())
}

fn read_series(path: &Path) -> anyhow::Result<Vec<f64>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .with_context(|| format!("{}: '{t}' is not a number", path.display()))
        })
        .collect()
}

fn point_for(args: &DistanceArgs) -> anyhow::Result<ParamPoint> {
    let need = |name: &str| anyhow::anyhow!("--measure {} needs --{name}", args.measure);
    Ok(match args.measure {
        Measure::Euclidean => ParamPoint::None,
        Measure::Fc => ParamPoint::Theta {
            theta: args.theta.ok_or_else(|| need("theta"))?,
        },
        Measure::Ar => ParamPoint::Eta {
            eta: args.eta.ok_or_else(|| need("eta"))?,
        },
        Measure::Dtw => ParamPoint::Omega {
            omega: args.omega.ok_or_else(|| need("omega"))?,
        },
        Measure::Edr => ParamPoint::Epsilon {
            epsilon: args.epsilon.ok_or_else(|| need("epsilon"))?,
        },
        Measure::Twed => ParamPoint::Twed {
            nu: args.nu.ok_or_else(|| need("nu"))?,
            lambda: args.lambda.ok_or_else(|| need("lambda"))?,
        },
        Measure::Mjc => ParamPoint::Beta {
            beta: args.beta.ok_or_else(|| need("beta"))?,
        },
        Measure::Random => bail!("the random baseline has no pairwise distance"),
    })
}

fn distance(args: DistanceArgs) -> anyhow::Result<()> {
    let config = MeasureConfig::new(args.measure, point_for(&args)?)?;
    let mut a = tsmeasures::TimeSeries::new(read_series(&args.a)?)?;
    let mut b = tsmeasures::TimeSeries::new(read_series(&args.b)?)?;
    if args.znorm {
        a = a.znormalize();
        b = b.znormalize();
    }
    println!("{}", config.distance(a.values(), b.values())?);
    Ok(())
}

fn point_values(p: &ParamPoint) -> String {
    match p {
        ParamPoint::None => "-".into(),
        ParamPoint::Theta { theta: v }
        | ParamPoint::Eta { eta: v }
        | ParamPoint::Omega { omega: v } => v.to_string(),
        ParamPoint::Epsilon { epsilon: v } | ParamPoint::Beta { beta: v } => v.to_string(),
        ParamPoint::Twed { nu, lambda } => format!("{nu} {lambda}"),
    }
}

fn grids(args: GridsArgs) -> anyhow::Result<()> {
    let options = GridOptions {
        nu_min: args.nu_min,
    };
    match args.measure {
        Some(m) => {
            for p in &build_grid(m, args.n, options)?.points {
                println!("{}", point_values(p));
            }
        }
        None => {
            for m in Measure::ALL {
                let g = build_grid(m, args.n, options)?;
                let text: Vec<String> = g.points.iter().map(|p| p.to_string()).collect();
                println!("{m}\t{}", text.join(", "));
            }
        }
    }
    Ok(())
}

fn stats(args: StatsArgs) -> anyhow::Result<()> {
    let cells = read_cells(&args.cells)?;
    if cells.is_empty() {
        bail!("{} holds no cells", args.cells.display());
    }
    let (datasets, measures) = cell_axes(&cells);
    let analysis = analyze(&cells, &datasets, &measures, args.alpha)?;
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    emit_analysis(&analysis, &args.out)?;
    for (m, r) in analysis.ranks.measures.iter().zip(&analysis.ranks.average) {
        println!("{m}\t{r:.3}");
    }
    Ok(())
}

fn generate(args: GenerateArgs) -> anyhow::Result<()> {
    let name = args
        .out
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("synthetic")
        .to_string();
    let ds = match args.kind {
        Generator::Cbf => {
            synthetic::cbf_dataset(&name, args.per_class, args.length.unwrap_or(128), args.seed)?
        }
        Generator::Control => {
            synthetic::control_dataset(&name, args.per_class, args.length.unwrap_or(60), args.seed)?
        }
    };
    if let Some(dir) = args.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    ucr::write_ucr(&ds, &args.out)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Distance(a) => distance(a),
        Command::Grids(a) => grids(a),
        Command::Stats(a) => stats(a),
        Command::Generate(a) => generate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
