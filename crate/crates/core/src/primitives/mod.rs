//! Search, counting, amplitude estimation, minimum finding and majority
//! boosting, each with its success-probability and query-cost contract.

mod amplitude;
mod majority;
mod minimum;
mod search;

pub use crate::simcore::{AEOutcome, QueryCost};
pub use amplitude::{
    ae_error_bound, amplitude_estimation, amplitude_estimation_with, count, count_error_bound,
    count_with_backend, Backend, CountOutcome, CountSampler, PhaseRegister,
};
pub use majority::{
    interval_vote, kl_divergence_bits, majority_boost, median_vote, repetitions_for, FnEstimator,
    Majority, MajorityMode, StochasticEstimator,
};
pub use minimum::{find_minimum, MinResult, MinimumConfig, Queryable, ValueTable};
pub use search::{grover_search, SearchConfig, SearchResult};
