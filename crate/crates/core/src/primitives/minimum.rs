use alloc::vec::Vec;
use rand::Rng;

use super::search::bbht_search;
use crate::oracle::{QueryCounter, RealOracle};
use crate::rng::RngStream;

/// A function over `0..len()` that minimum finding can query.
///
/// `peek` is the simulator's view and must not charge; `charge` records
/// evaluations made by the algorithm.
pub trait Queryable {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn peek(&mut self, x: usize) -> f64;
    fn charge(&mut self, queries: u64);
}

impl Queryable for RealOracle {
    fn len(&self) -> usize {
        RealOracle::len(self)
    }

    fn peek(&mut self, x: usize) -> f64 {
        self.values()[x]
    }

    fn charge(&mut self, queries: u64) {
        self.counter().charge(queries)
    }
}

/// Arbitrary real values of any length, with a counter.
#[derive(Clone, Debug)]
pub struct ValueTable<'a> {
    values: &'a [f64],
    counter: QueryCounter,
}

impl<'a> ValueTable<'a> {
    pub fn new(values: &'a [f64]) -> Self {
        Self {
            values,
            counter: QueryCounter::new(),
        }
    }

    pub fn counter(&self) -> &QueryCounter {
        &self.counter
    }
}

impl Queryable for ValueTable<'_> {
    fn len(&self) -> usize {
        self.values.len()
    }

    fn peek(&mut self, x: usize) -> f64 {
        self.values[x]
    }

    fn charge(&mut self, queries: u64) {
        self.counter.charge(queries)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimumConfig {
    /// Total query budget as a multiple of `sqrt(N)`.
    pub budget_factor: f64,
    /// Growth rate of the inner search schedule.
    pub growth: f64,
}

impl Default for MinimumConfig {
    fn default() -> Self {
        Self {
            budget_factor: 22.5,
            growth: 6.0 / 5.0,
        }
    }
}

impl MinimumConfig {
    pub fn budget(&self, n: usize) -> u64 {
        ((self.budget_factor * libm::sqrt(n as f64)) as u64).max(1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinResult {
    pub index: usize,
    pub value: f64,
    pub f_queries: u64,
}

/// `(value, index)` lexicographic order: ties go to the lower index.
fn better(a: (f64, usize), b: (f64, usize)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Threshold search for the minimum.
///
/// Starts from a uniformly random index, then repeatedly searches for an
/// index that is strictly better than the current one until the budget of
/// `budget_factor * sqrt(N)` queries is spent. Returns the best index seen.
///
/// # Panics
///
/// If `values` is empty.
pub fn find_minimum<Q: Queryable + ?Sized>(
    values: &mut Q,
    rng: &mut RngStream,
    config: &MinimumConfig,
) -> MinResult {
    let n = values.len();
    assert!(n > 0, "minimum of an empty function");
    let budget = config.budget(n);

    let mut best = rng.gen_range(0..n);
    let mut best_value = values.peek(best);
    let mut used = 1u64;

    let mut table: Vec<f64> = Vec::with_capacity(n);
    for x in 0..n {
        table.push(values.peek(x));
    }

    while used < budget {
        let smaller: Vec<usize> = (0..n)
            .filter(|&x| better((table[x], x), (best_value, best)))
            .collect();
        let r = bbht_search(n, &smaller, budget - used, config.growth, rng);
        used += r.f_queries;
        match r.found {
            Some(x) => {
                best = x;
                best_value = table[x];
            }
            None => break,
        }
    }
    values.charge(used);
    MinResult {
        index: best,
        value: best_value,
        f_queries: used,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::seq::SliceRandom;

    #[test]
    fn small_example() {
        let values = [3.0, 1.0, 2.0];
        let mut rng = RngStream::new(31, 0);
        let hits = (0..10_000)
            .filter(|_| {
                let mut f = ValueTable::new(&values);
                let r = find_minimum(&mut f, &mut rng, &MinimumConfig::default());
                assert_eq!(r.value, values[r.index]);
                assert_eq!(f.counter().tally(), r.f_queries);
                r.index == 1
            })
            .count();
        assert!(hits as f64 / 1e4 >= 0.75);
    }

    #[test]
    fn constant_function() {
        let values = [0.5; 16];
        let mut rng = RngStream::new(32, 0);
        for _ in 0..100 {
            let r = find_minimum(
                &mut ValueTable::new(&values),
                &mut rng,
                &MinimumConfig::default(),
            );
            assert_eq!(r.value, 0.5);
        }
    }

    #[test]
    fn permutation_of_64() {
        let mut rng = RngStream::new(33, 0);
        let mut values: Vec<f64> = (0..64).map(|x| x as f64).collect();
        let mut hits = 0;
        for _ in 0..2000 {
            values.shuffle(&mut rng);
            let argmin = values.iter().position(|&v| v == 0.0).unwrap();
            let r = find_minimum(
                &mut ValueTable::new(&values),
                &mut rng,
                &MinimumConfig::default(),
            );
            assert!(r.f_queries <= MinimumConfig::default().budget(64));
            hits += (r.index == argmin) as usize;
        }
        assert!(hits as f64 / 2000.0 >= 0.75);
    }

    #[test]
    fn returns_minimum_on_real_oracle() {
        let mut f = RealOracle::arbitrary(vec![0.9, 0.2, 0.4, 0.05]).unwrap();
        let mut rng = RngStream::new(34, 0);
        let r = find_minimum(&mut f, &mut rng, &MinimumConfig::default());
        assert_eq!(f.counter().tally(), r.f_queries);
        assert_eq!(r.value, f.values()[r.index]);
    }

    #[test]
    fn single_point() {
        let mut rng = RngStream::new(35, 0);
        let r = find_minimum(
            &mut ValueTable::new(&[0.3]),
            &mut rng,
            &MinimumConfig::default(),
        );
        assert_eq!((r.index, r.value), (0, 0.3));
    }
}
