use alloc::vec::Vec;

use super::mean::{mean1_queries, Mean2Plan};
use crate::error::Result;
use crate::oracle::{DistanceOracle, RealOracle};
use crate::primitives::{
    find_minimum, majority_boost, repetitions_for, Majority, MajorityMode, MinimumConfig,
    PhaseRegister, Queryable, StochasticEstimator,
};
use crate::rng::RngStream;
use crate::simcore::{OutcomeSampler, SubspaceAEProblem};

/// Which mean estimator approximates each row mean `d_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowMean {
    Mean1 {
        t: u64,
    },
    /// Rows are rounded to `ell` bits before estimation.
    Mean2 {
        ell: u32,
        mode: MajorityMode,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MedianConfig {
    pub row_mean: RowMean,
    pub minimum: MinimumConfig,
}

impl MedianConfig {
    pub fn new(row_mean: RowMean) -> Self {
        Self {
            row_mean,
            minimum: MinimumConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MedianResult {
    pub index: usize,
    /// Boosted estimate `d~` of the returned row.
    pub estimated_row_mean: f64,
    pub dist_queries: u64,
    /// Queries minimum finding made to the boosted row-mean oracle.
    pub minimum_queries: u64,
    /// Boosted estimates `d~_i` of every row, as memoized.
    pub row_estimates: Vec<f64>,
}

enum RowState {
    Mean1(OutcomeSampler),
    Mean2(Mean2Plan),
}

/// Unboosted estimate of row `i`'s mean. Row oracles get scratch counters;
/// distance queries are charged analytically by [`median`].
struct RowEstimator<'a> {
    dist: &'a DistanceOracle,
    kind: RowMean,
    rows: Vec<Option<RowState>>,
}

impl RowEstimator<'_> {
    fn state(&mut self, i: usize) -> Result<&mut RowState> {
        if self.rows[i].is_none() {
            let row = self.dist.row(i).to_vec();
            let state = match self.kind {
                RowMean::Mean1 { t } => {
                    let register = PhaseRegister::for_iterations(t)?;
                    let d = (row.iter().sum::<f64>() / row.len() as f64).clamp(0.0, 1.0);
                    RowState::Mean1(OutcomeSampler::new(SubspaceAEProblem::new(
                        d,
                        register.size(),
                    )?))
                }
                RowMean::Mean2 { ell, mode } => {
                    RowState::Mean2(Mean2Plan::new(&RealOracle::quantized(row, ell)?, mode)?)
                }
            };
            self.rows[i] = Some(state);
        }
        Ok(self.rows[i].as_mut().expect("just filled"))
    }
}

impl StochasticEstimator for RowEstimator<'_> {
    fn sample(&mut self, index: usize, rng: &mut RngStream) -> f64 {
        match self.state(index).expect("validated before sampling") {
            RowState::Mean1(sampler) => sampler.sample(rng).estimate,
            RowState::Mean2(plan) => plan.sample(rng),
        }
    }
}

/// Boosted row means, one draw per row on first access, cached thereafter.
struct MemoRows<'a> {
    boosted: Majority<RowEstimator<'a>>,
    memo: Vec<Option<f64>>,
    rng: RngStream,
    charged: u64,
}

impl Queryable for MemoRows<'_> {
    fn len(&self) -> usize {
        self.memo.len()
    }

    fn peek(&mut self, x: usize) -> f64 {
        if let Some(v) = self.memo[x] {
            return v;
        }
        let v = self.boosted.sample(x, &mut self.rng);
        self.memo[x] = Some(v);
        v
    }

    fn charge(&mut self, queries: u64) {
        self.charged += queries;
    }
}

/// Distance queries per evaluation of one (unboosted) row-mean estimate.
pub fn row_mean_queries(n: usize, row_mean: RowMean) -> Result<u64> {
    match row_mean {
        RowMean::Mean1 { t } => Ok(mean1_queries(PhaseRegister::for_iterations(t)?.size())),
        RowMean::Mean2 { ell, .. } => super::mean::mean2_queries(n, ell),
    }
}

/// Approximate median (medoid): the point whose average distance to all
/// points is smallest.
///
/// Each row mean is estimated by the chosen mean estimator, boosted with
/// median voting at confidence parameter `N^2`, and minimum finding runs over
/// the boosted estimates. One boosted estimate per row is drawn on first
/// access and reused.
///
/// `dist` is charged `k * c` per minimum-finding query, where `k` is the
/// majority repetition count and `c` the cost of one row-mean estimate.
pub fn median(
    dist: &DistanceOracle,
    config: &MedianConfig,
    rng: &mut RngStream,
) -> Result<MedianResult> {
    let n = dist.len();
    let per_estimate = row_mean_queries(n, config.row_mean)?;
    let mut rows = RowEstimator {
        dist,
        kind: config.row_mean,
        rows: (0..n).map(|_| None).collect(),
    };
    // build every row up front so sampling cannot fail later
    for i in 0..n {
        rows.state(i)?;
    }
    let boosted = majority_boost(rows, (n as u64) * (n as u64), MajorityMode::Median)?;
    let repetitions = boosted.repetitions();
    let mut memo = MemoRows {
        boosted,
        memo: alloc::vec![None; n],
        rng: rng.fork(),
        charged: 0,
    };
    let found = find_minimum(&mut memo, rng, &config.minimum);
    let dist_queries = memo.charged * repetitions * per_estimate;
    dist.counter().charge(dist_queries);
    Ok(MedianResult {
        index: found.index,
        estimated_row_mean: found.value,
        dist_queries,
        minimum_queries: found.f_queries,
        row_estimates: memo
            .memo
            .into_iter()
            .map(|v| v.unwrap_or(f64::NAN))
            .collect(),
    })
}

/// Cost of one boosted row-mean evaluation, for closed-form accounting.
pub fn boosted_row_mean_queries(n: usize, row_mean: RowMean) -> Result<u64> {
    Ok(repetitions_for((n as u64) * (n as u64)) * row_mean_queries(n, row_mean)?)
}
