//! Seeded Monte-Carlo runs over a parameter grid.

use std::io::Write;

use clap::ValueEnum;
use qestim_core::baseline::{encoded_mean, exact_mean, exact_median};
use qestim_core::estimators::{
    mean1_error_bound, mean1_with_backend, mean2_error_bound, mean2_with_mode, median, MeanParams,
    MedianConfig, RowMean,
};
use qestim_core::instances::Instance;
use qestim_core::oracle::{BooleanOracle, DistanceOracle, RealOracle};
use qestim_core::primitives::{
    count_error_bound, count_with_backend, find_minimum, grover_search, Backend, MajorityMode,
    MinimumConfig, PhaseRegister, SearchConfig,
};
use qestim_core::RngStream;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Mean1,
    Mean2,
    Count,
    Search,
    Minimum,
    Median,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Mean1 => "mean1",
            Algorithm::Mean2 => "mean2",
            Algorithm::Count => "count",
            Algorithm::Search => "search",
            Algorithm::Minimum => "minimum",
            Algorithm::Median => "median",
        }
    }
}

/// Row-mean estimator used by the median algorithm.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    #[default]
    Mean1,
    Mean2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    /// Requested Grover iteration counts. One parameter point per entry for
    /// mean1, count and median with the mean1 variant.
    pub t: Vec<u64>,
    /// Bit precision for mean2 and the mean2 median variant. Values are
    /// rounded to this many bits first.
    pub ell: Option<u32>,
    pub variant: Variant,
    pub mode: MajorityMode,
    pub trials: u64,
    pub seed: u64,
    pub backend: Backend,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            t: Vec::new(),
            ell: None,
            variant: Variant::default(),
            mode: MajorityMode::default(),
            trials: 1,
            seed: 0,
            backend: Backend::default(),
        }
    }
}

/// One trial. `bound` is the error the algorithm promises for this instance;
/// for search and minimum finding it is 0, so `within_bound` marks an exact
/// answer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub trial: u64,
    pub algorithm: Algorithm,
    /// Grover applications actually made (`M - 1`).
    pub t: Option<u64>,
    #[serde(rename = "M")]
    pub register: Option<usize>,
    pub ell: Option<u32>,
    pub n: usize,
    pub estimate: f64,
    pub truth: f64,
    pub abs_error: f64,
    pub bound: f64,
    pub within_bound: bool,
    /// Oracle evaluations charged during the trial.
    pub queries: u64,
    pub seed: u64,
}

pub const CSV_HEADER: &str =
    "trial,algorithm,t,M,ell,n,estimate,truth,abs_error,bound,within_bound,queries,seed";

/// What a trial needs, computed once per run.
enum Prepared {
    Mean1 {
        oracle: RealOracle,
        truth: f64,
    },
    Mean2 {
        oracle: RealOracle,
        truth: f64,
        bound: f64,
    },
    Count {
        pred: BooleanOracle,
    },
    Search {
        pred: BooleanOracle,
    },
    Minimum {
        oracle: RealOracle,
        truth: f64,
    },
    Median {
        dist: DistanceOracle,
        d_min: f64,
        /// Bound of one row-mean estimate at the true median, mean2 only.
        mean2_bound: Option<f64>,
    },
}

fn real(instance: &Instance, algorithm: Algorithm) -> Result<&RealOracle> {
    match instance {
        Instance::Real(oracle) => Ok(oracle),
        Instance::Distance(_) => Err(HarnessError::validation(
            "kind",
            format!("{} needs a real oracle", algorithm.name()),
        )),
    }
}

fn require_ell(ell: Option<u32>, fallback: Option<u32>, algorithm: Algorithm) -> Result<u32> {
    ell.or(fallback).ok_or_else(|| {
        HarnessError::validation("ell", format!("{} needs a bit precision", algorithm.name()))
    })
}

fn prepare(instance: &Instance, config: &RunConfig) -> Result<Prepared> {
    let algorithm = config.algorithm;
    let needs_t = match algorithm {
        Algorithm::Mean1 | Algorithm::Count => true,
        Algorithm::Median => config.variant == Variant::Mean1,
        _ => false,
    };
    if needs_t && config.t.is_empty() {
        return Err(HarnessError::validation(
            "t",
            format!("{} needs at least one iteration count", algorithm.name()),
        ));
    }
    if !needs_t && !config.t.is_empty() {
        return Err(HarnessError::validation(
            "t",
            format!("{} chooses its own iteration count", algorithm.name()),
        ));
    }
    if config.t.contains(&0) {
        return Err(HarnessError::validation(
            "t",
            "iteration counts must be >= 1",
        ));
    }
    if config.backend == Backend::Statevector
        && !matches!(algorithm, Algorithm::Mean1 | Algorithm::Count)
    {
        return Err(HarnessError::validation(
            "backend",
            format!("{} only runs on the subspace backend", algorithm.name()),
        ));
    }
    if config.trials > u32::MAX as u64 {
        return Err(HarnessError::validation(
            "trials",
            "at most 2^32 - 1 trials",
        ));
    }

    Ok(match algorithm {
        Algorithm::Mean1 => {
            let oracle = real(instance, algorithm)?.clone();
            Prepared::Mean1 {
                truth: exact_mean(&oracle),
                oracle,
            }
        }
        Algorithm::Mean2 => {
            let source = real(instance, algorithm)?;
            let ell = require_ell(config.ell, source.ell(), algorithm)?;
            let oracle = if source.ell() == Some(ell) {
                source.clone()
            } else {
                RealOracle::quantized(source.values().to_vec(), ell)?
            };
            Prepared::Mean2 {
                truth: encoded_mean(&oracle)?,
                bound: mean2_error_bound(&oracle)?,
                oracle,
            }
        }
        Algorithm::Count => Prepared::Count {
            pred: BooleanOracle::from_real(real(instance, algorithm)?)?,
        },
        Algorithm::Search => Prepared::Search {
            pred: BooleanOracle::from_real(real(instance, algorithm)?)?,
        },
        Algorithm::Minimum => {
            let oracle = real(instance, algorithm)?.clone();
            let truth = oracle
                .values()
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min);
            Prepared::Minimum { oracle, truth }
        }
        Algorithm::Median => {
            let Instance::Distance(dist) = instance else {
                return Err(HarnessError::validation(
                    "kind",
                    "median needs a distance oracle",
                ));
            };
            let (argmin, d_min) = exact_median(dist);
            let mean2_bound = match config.variant {
                Variant::Mean1 => None,
                Variant::Mean2 => {
                    let ell = require_ell(config.ell, None, algorithm)?;
                    let row = RealOracle::quantized(dist.row(argmin).to_vec(), ell)?;
                    Some(mean2_error_bound(&row)?)
                }
            };
            Prepared::Median {
                dist: dist.clone(),
                d_min,
                mean2_bound,
            }
        }
    })
}

struct Outcome {
    t: Option<u64>,
    register: Option<usize>,
    ell: Option<u32>,
    n: usize,
    estimate: f64,
    truth: f64,
    bound: f64,
    queries: u64,
}

fn register_shape(params: MeanParams) -> (Option<u64>, Option<usize>) {
    match params {
        MeanParams::Mean2 {
            count_t, register, ..
        } => (Some(count_t), Some(register)),
        MeanParams::Mean1 {
            effective_t,
            register,
        } => (Some(effective_t), Some(register)),
    }
}

fn run_trial(
    prepared: &Prepared,
    config: &RunConfig,
    t: Option<u64>,
    rng: &mut RngStream,
) -> Result<Outcome> {
    Ok(match prepared {
        Prepared::Mean1 { oracle, truth } => {
            let oracle = oracle.with_fresh_counter();
            let est = mean1_with_backend(&oracle, t.unwrap_or(1), config.backend, rng)?;
            let (t, register) = register_shape(est.params);
            Outcome {
                t,
                register,
                ell: oracle.ell(),
                n: oracle.len(),
                estimate: est.estimate,
                truth: *truth,
                bound: est.bound,
                queries: oracle.counter().tally(),
            }
        }
        Prepared::Mean2 {
            oracle,
            truth,
            bound,
        } => {
            let oracle = oracle.with_fresh_counter();
            let est = mean2_with_mode(&oracle, config.mode, rng)?;
            let (t, register) = register_shape(est.params);
            Outcome {
                t,
                register,
                ell: oracle.ell(),
                n: oracle.len(),
                estimate: est.estimate,
                truth: *truth,
                bound: *bound,
                queries: oracle.counter().tally(),
            }
        }
        Prepared::Count { pred } => {
            let pred = pred.with_fresh_counter();
            let out = count_with_backend(&pred, t.unwrap_or(1), config.backend, rng)?;
            let s = pred.marked_count() as u64;
            Outcome {
                t: Some(out.ae.effective_t),
                register: Some(out.ae.register),
                ell: None,
                n: pred.len(),
                estimate: out.estimate as f64,
                truth: s as f64,
                bound: count_error_bound(s, pred.len(), out.ae.effective_t),
                queries: pred.counter().tally(),
            }
        }
        Prepared::Search { pred } => {
            let pred = pred.with_fresh_counter();
            let found = grover_search(&pred, rng, &SearchConfig::default()).found;
            Outcome {
                t: None,
                register: None,
                ell: None,
                n: pred.len(),
                estimate: if found.is_some() { 1.0 } else { 0.0 },
                truth: if pred.marked_count() > 0 { 1.0 } else { 0.0 },
                bound: 0.0,
                queries: pred.counter().tally(),
            }
        }
        Prepared::Minimum { oracle, truth } => {
            let mut oracle = oracle.with_fresh_counter();
            let found = find_minimum(&mut oracle, rng, &MinimumConfig::default());
            Outcome {
                t: None,
                register: None,
                ell: oracle.ell(),
                n: oracle.len(),
                estimate: found.value,
                truth: *truth,
                bound: 0.0,
                queries: oracle.counter().tally(),
            }
        }
        Prepared::Median {
            dist,
            d_min,
            mean2_bound,
        } => {
            let dist = dist.with_fresh_counter();
            let n = dist.len();
            let row_mean = match config.variant {
                Variant::Mean1 => RowMean::Mean1 { t: t.unwrap_or(1) },
                Variant::Mean2 => RowMean::Mean2 {
                    ell: config.ell.unwrap_or(1),
                    mode: config.mode,
                },
            };
            let result = median(&dist, &MedianConfig::new(row_mean), rng)?;
            let (t_eff, register, ell, bound) = match row_mean {
                RowMean::Mean1 { t } => {
                    let reg = PhaseRegister::for_iterations(t)?;
                    let t_eff = reg.effective_t();
                    (t_eff, reg.size(), None, mean1_error_bound(*d_min, t_eff))
                }
                RowMean::Mean2 { ell, .. } => {
                    let reg = PhaseRegister::for_iterations(
                        qestim_core::estimators::mean2_count_iterations(n),
                    )?;
                    (
                        reg.effective_t(),
                        reg.size(),
                        Some(ell),
                        mean2_bound.unwrap_or(0.0),
                    )
                }
            };
            Outcome {
                t: Some(t_eff),
                register: Some(register),
                ell,
                n,
                estimate: dist.row_mean(result.index),
                truth: *d_min,
                // a boosted row estimate may be off by up to twice its
                // radius, and the comparison involves two rows
                bound: 3.0 * bound,
                queries: dist.counter().tally(),
            }
        }
    })
}

/// Runs every (parameter point, trial) pair. Trial `j` of point `i` draws
/// from stream `(i << 32) | j` of `seed`, so the output does not depend on
/// scheduling. Records come back ordered by point, then trial.
pub fn run_experiment(instance: &Instance, config: &RunConfig) -> Result<Vec<ExperimentRecord>> {
    let prepared = prepare(instance, config)?;
    let points: Vec<Option<u64>> = if config.t.is_empty() {
        vec![None]
    } else {
        config.t.iter().copied().map(Some).collect()
    };
    let jobs: Vec<(u64, Option<u64>, u64)> = points
        .iter()
        .enumerate()
        .flat_map(|(i, &t)| (0..config.trials).map(move |trial| (i as u64, t, trial)))
        .collect();
    let mut records = jobs
        .into_par_iter()
        .map(|(point, t, trial)| {
            let mut rng = RngStream::new(config.seed, (point << 32) | trial);
            let out = run_trial(&prepared, config, t, &mut rng)?;
            let abs_error = (out.estimate - out.truth).abs();
            Ok((
                point,
                ExperimentRecord {
                    trial,
                    algorithm: config.algorithm,
                    t: out.t,
                    register: out.register,
                    ell: out.ell,
                    n: out.n,
                    estimate: out.estimate,
                    truth: out.truth,
                    abs_error,
                    bound: out.bound,
                    within_bound: abs_error <= out.bound,
                    queries: out.queries,
                    seed: config.seed,
                },
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|(point, r)| (*point, r.trial));
    Ok(records.into_iter().map(|(_, r)| r).collect())
}

/// Writes the header even when there are no records.
pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    writer.write_record(CSV_HEADER.split(','))?;
    for record in records {
        writer.serialize(record)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(records: &[ExperimentRecord], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, records)?;
    out.write_all(b"\n")?;
    Ok(())
}
