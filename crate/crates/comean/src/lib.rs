//! Common-mean estimation for two samples with ordered variances, with
//! jackknife, bootstrap, and plug-in variance estimates, normal-theory
//! confidence intervals, and a Monte Carlo coverage harness.
//!
//! The resampling and simulation loops run on rayon by default; build with
//! `--no-default-features` to drop the dependency and run sequentially.

pub mod datasets;
pub mod error;
pub mod estimators;
pub mod exec;
pub mod inference;
pub mod resampling;
pub mod simulation;
pub mod stats;

pub use error::{Error, Result};
pub use estimators::{
    estimate_common_mean, Branch, CommonMeanEstimate, EstimatorSpec, GammaInputs, GammaWeight,
    PooledMean, PsiFn, TildeRule, TwoSampleData, TwoSampleStatistic, WeightRule,
};
pub use exec::{map_indexed, Parallelism};
pub use inference::{
    asymptotic_variance_formula, clt_variance, confidence_interval, normal_quantile, z_value,
    CltConvention, CltEstimate, ConfidenceInterval, PopulationParams, VarianceMethod, ZStyle,
};
pub use resampling::{
    bootstrap_variance, delete_d_jackknife, jackknife_paired, jackknife_unequal, BootstrapReport,
    Grouping, JackknifeMode, JackknifeReport, Norming, PseudoValues,
};
pub use simulation::{
    coverage_experiment, draw_sample, misordering_probability, replication_rng, CoverageResult,
    CoverageTable, SimulationModel,
};
pub use stats::{summarize, Sample, SummaryStats};
