//! Dissimilarity measures for time series classification and the protocol
//! for comparing them fairly.
//!
//! * lock-step and feature measures: [`lockstep`]
//! * elastic measures: [`elastic`]
//! * measure identifiers, parameter points, grids: [`measure`], [`grid`]
//! * 1NN classification: [`nn`]
//! * cross-validated evaluation: [`harness`]
//! * significance testing and ranks: [`stats`]
//! * file formats and reports: [`ucr`], [`report`]

pub mod elastic;
pub mod error;
pub mod grid;
pub mod harness;
pub mod lockstep;
pub mod measure;
pub mod nn;
pub mod report;
pub mod rng;
pub mod series;
pub mod stats;
pub mod synthetic;
pub mod ucr;

pub use error::{Error, Result};
pub use grid::{build_grid, GridOptions, NuMin, ParameterGrid};
pub use harness::{run_plan, CellResult, EvaluationPlan, Mode, PlanDataset};
pub use measure::{Measure, MeasureConfig, ParamPoint};
pub use nn::DistanceTable;
pub use report::RunReport;
pub use rng::{Purpose, RandomStream, StreamId};
pub use series::{Label, LabeledDataset, TimeSeries};
