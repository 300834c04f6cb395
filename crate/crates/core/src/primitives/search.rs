use rand::Rng;

use crate::oracle::BooleanOracle;
use crate::rng::RngStream;

/// Parameters of the randomized search schedule for an unknown number of
/// solutions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    /// Hard cap on total queries, as a multiple of `sqrt(N)`.
    pub cap_factor: f64,
    /// Growth rate of the iteration-count range after each failure.
    pub growth: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            cap_factor: 9.0,
            growth: 6.0 / 5.0,
        }
    }
}

impl SearchConfig {
    pub fn budget(&self, n: usize) -> u64 {
        (self.cap_factor * libm::sqrt(n as f64)) as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub found: Option<usize>,
    pub f_queries: u64,
}

/// Simulates the exponential-schedule search over a domain of size `n`
/// whose solutions are `solutions`, spending at most `budget` queries.
///
/// Each round draws an iteration count `j` uniformly from `0..=r` with
/// `r = min(ceil(growth^round), ceil(sqrt(n)))`, applies `j` Grover steps
/// (`j` queries), measures, and verifies the measured index (1 query).
/// A round that would overrun the budget is not started.
pub(crate) fn bbht_search(
    n: usize,
    solutions: &[usize],
    budget: u64,
    growth: f64,
    rng: &mut RngStream,
) -> SearchResult {
    let theta = libm::asin(libm::sqrt(solutions.len() as f64 / n as f64));
    let ceiling = libm::ceil(libm::sqrt(n as f64));
    let mut used = 0u64;
    let mut range = 1.0f64;
    loop {
        let r = libm::ceil(range).min(ceiling) as u64;
        let iterations = rng.gen_range(0..=r);
        if used + iterations + 1 > budget {
            return SearchResult {
                found: None,
                f_queries: used,
            };
        }
        used += iterations + 1;
        let s = libm::sin((2 * iterations + 1) as f64 * theta);
        if !solutions.is_empty() && rng.gen::<f64>() < s * s {
            let x = solutions[rng.gen_range(0..solutions.len())];
            return SearchResult {
                found: Some(x),
                f_queries: used,
            };
        }
        range *= growth;
    }
}

/// Finds a solution of `pred` without knowing how many exist.
///
/// Charges the predicate for every Grover step and every verification.
/// Never returns an index that is not a solution.
pub fn grover_search(
    pred: &BooleanOracle,
    rng: &mut RngStream,
    config: &SearchConfig,
) -> SearchResult {
    let solutions = pred.marked_indices();
    let result = bbht_search(
        pred.len(),
        &solutions,
        config.budget(pred.len()),
        config.growth,
        rng,
    );
    pred.counter().charge(result.f_queries);
    result
}
