use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::oracle::{bit_oracle, RealOracle};
use crate::primitives::{
    ae_error_bound, amplitude_estimation, amplitude_estimation_with, majority_boost,
    repetitions_for, Backend, CountSampler, Majority, MajorityMode, PhaseRegister, QueryCost,
    StochasticEstimator,
};
use crate::rng::RngStream;
use crate::simcore::GroverOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeanVariant {
    Mean1,
    Mean2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeanParams {
    Mean1 {
        effective_t: u64,
        register: usize,
    },
    Mean2 {
        ell: u32,
        /// Grover applications per count, after register rounding.
        count_t: u64,
        register: usize,
        /// Majority confidence parameter `n = ceil(3 ell / 2)`.
        majority_n: u64,
        repetitions: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanEstimate {
    pub estimate: f64,
    /// Error bound for this instance, evaluated with the exact mean (mean1)
    /// or the exact bit counts (mean2).
    pub bound: f64,
    pub f_queries: u64,
    pub variant: MeanVariant,
    pub params: MeanParams,
}

/// `2 pi sqrt(m(1-m)) / t + pi^2 / t^2`.
pub fn mean1_error_bound(m: f64, t: u64) -> f64 {
    ae_error_bound(m, t)
}

/// Queries made by [`mean1`] with a phase register of size `register`.
pub fn mean1_queries(register: usize) -> u64 {
    QueryCost::MEAN_OPERATOR.total(register)
}

fn exact_mean(oracle: &RealOracle) -> f64 {
    oracle.values().iter().sum::<f64>() / oracle.len() as f64
}

/// Mean estimation by amplitude estimation on `A|0>`, whose good-state
/// weight is exactly the mean of `F`.
pub fn mean1(oracle: &RealOracle, t: u64, rng: &mut RngStream) -> Result<MeanEstimate> {
    mean1_with_backend(oracle, t, Backend::Subspace, rng)
}

pub fn mean1_with_backend(
    oracle: &RealOracle,
    t: u64,
    backend: Backend,
    rng: &mut RngStream,
) -> Result<MeanEstimate> {
    let m = exact_mean(oracle).clamp(0.0, 1.0);
    let ae = match backend {
        Backend::Subspace => amplitude_estimation(m, t, QueryCost::MEAN_OPERATOR, rng)?,
        Backend::Statevector => {
            // state preparation is accounted below with the rest of the run
            let op = GroverOperator::for_mean(&oracle.with_fresh_counter())?;
            amplitude_estimation_with(&op, t, QueryCost::MEAN_OPERATOR, backend, rng)?
        }
    };
    oracle.counter().charge(ae.f_queries);
    Ok(MeanEstimate {
        estimate: ae.estimate,
        bound: mean1_error_bound(m, ae.effective_t),
        f_queries: ae.f_queries,
        variant: MeanVariant::Mean1,
        params: MeanParams::Mean1 {
            effective_t: ae.effective_t,
            register: ae.register,
        },
    })
}

/// Requested count iterations per bit column, `ceil(5 pi sqrt(N))`.
pub fn mean2_count_iterations(n: usize) -> u64 {
    libm::ceil(5.0 * PI * libm::sqrt(n as f64)) as u64
}

/// Majority parameter for each bit column, `ceil(3 ell / 2)`.
pub fn mean2_majority_n(ell: u32) -> u64 {
    (3 * ell as u64).div_ceil(2)
}

/// Queries made by [`mean2`] on a domain of size `n` at `ell` bits.
pub fn mean2_queries(n: usize, ell: u32) -> Result<u64> {
    let register = PhaseRegister::for_iterations(mean2_count_iterations(n))?;
    Ok(ell as u64 * repetitions_for(mean2_majority_n(ell)) * register.effective_t())
}

fn bit_counts(oracle: &RealOracle) -> Result<Vec<usize>> {
    let ell = oracle
        .ell()
        .ok_or_else(|| Error::configuration("mean2 needs an oracle with a fixed bit precision"))?;
    (1..=ell)
        .map(|i| bit_oracle(oracle, i).map(|b| b.marked_count()))
        .collect()
}

/// `(1/N) sum_i sqrt(m_i) 2^-i`, with `m_i` the exact number of ones in bit
/// column `i`. Does not charge.
pub fn mean2_error_bound(oracle: &RealOracle) -> Result<f64> {
    let n = oracle.len() as f64;
    Ok(bit_counts(oracle)?
        .iter()
        .enumerate()
        .map(|(i, &m)| libm::sqrt(m as f64) * libm::ldexp(1.0, -(i as i32 + 1)))
        .sum::<f64>()
        / n)
}

/// Count of one bit column as a stochastic estimator.
struct ColumnCount {
    sampler: CountSampler,
    delta: Option<f64>,
}

impl StochasticEstimator for ColumnCount {
    fn sample(&mut self, _index: usize, rng: &mut RngStream) -> f64 {
        self.sampler.sample(rng).estimate as f64
    }

    fn delta(&self) -> Option<f64> {
        self.delta
    }
}

/// Boosted column counters for one oracle, reusable across runs.
pub(crate) struct Mean2Plan {
    n: usize,
    ell: u32,
    columns: Vec<Majority<ColumnCount>>,
    register: usize,
    majority_n: u64,
}

impl Mean2Plan {
    pub(crate) fn new(oracle: &RealOracle, mode: MajorityMode) -> Result<Self> {
        let counts = bit_counts(oracle)?;
        let ell = counts.len() as u32;
        let n = oracle.len();
        let count_t = mean2_count_iterations(n);
        let majority_n = mean2_majority_n(ell);
        let mut columns = Vec::with_capacity(counts.len());
        for (i, &m_i) in counts.iter().enumerate() {
            let pred = bit_oracle(oracle, i as u32 + 1)?;
            // Interval voting needs the radius of a single count, which
            // depends on the exact column count.
            let delta = match mode {
                MajorityMode::Interval => Some(0.4 * libm::sqrt(m_i as f64) + 0.04),
                MajorityMode::Median => None,
            };
            let base = ColumnCount {
                sampler: CountSampler::new(&pred, count_t)?,
                delta,
            };
            columns.push(majority_boost(base, majority_n, mode)?);
        }
        let register = PhaseRegister::for_iterations(count_t)?.size();
        Ok(Self {
            n,
            ell,
            columns,
            register,
            majority_n,
        })
    }

    pub(crate) fn params(&self) -> MeanParams {
        MeanParams::Mean2 {
            ell: self.ell,
            count_t: self.register as u64 - 1,
            register: self.register,
            majority_n: self.majority_n,
            repetitions: repetitions_for(self.majority_n),
        }
    }

    pub(crate) fn queries(&self) -> u64 {
        self.ell as u64 * repetitions_for(self.majority_n) * (self.register as u64 - 1)
    }

    pub(crate) fn sample(&mut self, rng: &mut RngStream) -> f64 {
        let n = self.n as f64;
        let total: f64 = self
            .columns
            .iter_mut()
            .enumerate()
            .map(|(i, col)| col.sample(0, rng).clamp(0.0, n) * libm::ldexp(1.0, -(i as i32 + 1)))
            .sum();
        total / n
    }
}

/// Bitwise mean estimation: counts the ones in every bit column with
/// majority-boosted quantum counting and recombines the counts.
///
/// Columns are boosted with median voting.
pub fn mean2(oracle: &RealOracle, rng: &mut RngStream) -> Result<MeanEstimate> {
    mean2_with_mode(oracle, MajorityMode::Median, rng)
}

/// As [`mean2`], choosing how each column's repeated counts are combined.
///
/// Interval mode takes each column's error radius from its exact count.
pub fn mean2_with_mode(
    oracle: &RealOracle,
    mode: MajorityMode,
    rng: &mut RngStream,
) -> Result<MeanEstimate> {
    let mut plan = Mean2Plan::new(oracle, mode)?;
    let estimate = plan.sample(rng);
    Ok(MeanEstimate {
        estimate,
        bound: mean2_error_bound(oracle)?,
        f_queries: plan.queries(),
        variant: MeanVariant::Mean2,
        params: plan.params(),
    })
}
