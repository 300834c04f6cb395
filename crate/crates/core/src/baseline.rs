//! Classical reference computations. None of them charge a counter unless
//! stated.

use alloc::vec::Vec;
use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::{DistanceOracle, RealOracle};
use crate::rng::RngStream;

/// Exact mean `(1/N) sum_x F(x)`.
pub fn exact_mean(oracle: &RealOracle) -> f64 {
    oracle.values().iter().sum::<f64>() / oracle.len() as f64
}

/// Exact mean of the `ell`-bit encodings, i.e. what the bitwise estimator
/// targets. Values equal to 1 count as `1 - 2^-ell`.
pub fn encoded_mean(oracle: &RealOracle) -> Result<f64> {
    let mut total = 0.0;
    for x in 0..oracle.len() {
        total += oracle.encoded(x)?.value();
    }
    Ok(total / oracle.len() as f64)
}

/// Naive `O(N^2)` median: the index with the smallest average distance,
/// lowest index on ties, together with that average.
pub fn exact_median(dist: &DistanceOracle) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, row) in dist.rows().enumerate() {
        let d = row.iter().sum::<f64>() / dist.len() as f64;
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

/// How [`classical_sample_mean`] draws its indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    WithReplacement,
    /// Requires `q <= N`.
    WithoutReplacement,
}

/// Mean of `q` uniformly random evaluations. Charges `q` queries.
pub fn classical_sample_mean(
    oracle: &RealOracle,
    q: usize,
    sampling: Sampling,
    rng: &mut RngStream,
) -> Result<f64> {
    if q == 0 {
        return Err(Error::validation("q", "need at least one sample"));
    }
    let n = oracle.len();
    let indices: Vec<usize> = match sampling {
        Sampling::WithReplacement => (0..q).map(|_| rng.gen_range(0..n)).collect(),
        Sampling::WithoutReplacement => {
            if q > n {
                return Err(Error::validation(
                    "q",
                    alloc::format!("{q} samples without replacement from {n} points"),
                ));
            }
            index::sample(rng, n, q).into_vec()
        }
    };
    let mut total = 0.0;
    for x in indices {
        total += oracle.query(x)?;
    }
    Ok(total / q as f64)
}
