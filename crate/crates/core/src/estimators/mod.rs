//! Mean estimation (amplitude-based and bitwise) and the approximate
//! median of a point set under a black-box distance.

mod mean;
mod median;

pub use mean::{
    mean1, mean1_error_bound, mean1_queries, mean1_with_backend, mean2, mean2_count_iterations,
    mean2_error_bound, mean2_majority_n, mean2_queries, mean2_with_mode, MeanEstimate, MeanParams,
    MeanVariant,
};
pub use median::{
    boosted_row_mean_queries, median, row_mean_queries, MedianConfig, MedianResult, RowMean,
};
