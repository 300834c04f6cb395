use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// `D(p || q)` in bits, for `p, q` strictly inside `(0, 1)`.
pub fn kl_divergence_bits(p: f64, q: f64) -> Result<f64> {
    for (name, v) in [("p", p), ("q", q)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::validation(name, format!("{v} is not in (0, 1)")));
        }
    }
    Ok(p * libm::log2(p / q) + (1.0 - p) * libm::log2((1.0 - p) / (1.0 - q)))
}

fn boost_divergence() -> f64 {
    kl_divergence_bits(3.0 / 5.0, 2.0 / 3.0).expect("constant arguments")
}

/// Repetitions needed to lift a 2/3-confident estimator to `1 - 1/n`:
/// `ceil(lg n / D(3/5 || 2/3))`. Always at least 1.
pub fn repetitions_for(n: u64) -> u64 {
    let k = libm::ceil(libm::log2(n.max(1) as f64) / boost_divergence()) as u64;
    k.max(1)
}

/// A randomized approximation of `F(index)` that can be re-sampled.
///
/// Implementations charge their own oracle on every `sample`.
pub trait StochasticEstimator {
    fn sample(&mut self, index: usize, rng: &mut RngStream) -> f64;

    /// Known error radius, if any.
    fn delta(&self) -> Option<f64> {
        None
    }
}

impl<E: StochasticEstimator + ?Sized> StochasticEstimator for &mut E {
    fn sample(&mut self, index: usize, rng: &mut RngStream) -> f64 {
        (**self).sample(index, rng)
    }

    fn delta(&self) -> Option<f64> {
        (**self).delta()
    }
}

/// Closure-backed estimator.
pub struct FnEstimator<F> {
    f: F,
    delta: Option<f64>,
}

impl<F: FnMut(usize, &mut RngStream) -> f64> FnEstimator<F> {
    pub fn new(f: F, delta: Option<f64>) -> Self {
        Self { f, delta }
    }
}

impl<F: FnMut(usize, &mut RngStream) -> f64> StochasticEstimator for FnEstimator<F> {
    fn sample(&mut self, index: usize, rng: &mut RngStream) -> f64 {
        (self.f)(index, rng)
    }

    fn delta(&self) -> Option<f64> {
        self.delta
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MajorityMode {
    /// Midpoint of a width-`2 delta` window holding 3/5 of the samples.
    Interval,
    /// Lower sample median; needs no `delta`.
    #[default]
    Median,
}

/// Midpoint of the first width-`2 delta` window (in sorted order) holding at
/// least 3/5 of the samples, or 0 if none exists. Sorts `samples`.
pub fn interval_vote(samples: &mut [f64], delta: f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let k = samples.len();
    let mut hi = 0;
    for lo in 0..k {
        hi = hi.max(lo);
        while hi + 1 < k && samples[hi + 1] - samples[lo] <= 2.0 * delta {
            hi += 1;
        }
        if 5 * (hi - lo + 1) >= 3 * k {
            return 0.5 * (samples[lo] + samples[hi]);
        }
    }
    0.0
}

/// Lower median, `samples[(k - 1) / 2]` after sorting. Sorts `samples`.
pub fn median_vote(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    samples[(samples.len() - 1) / 2]
}

/// `B_n`: `repetitions_for(n)` samples of the base estimator combined by
/// interval or median vote.
pub struct Majority<E> {
    base: E,
    repetitions: u64,
    mode: MajorityMode,
    scratch: Vec<f64>,
}

/// Boosts `base` to confidence `1 - 1/n`.
///
/// Interval mode requires the base to report its error radius.
pub fn majority_boost<E: StochasticEstimator>(
    base: E,
    n: u64,
    mode: MajorityMode,
) -> Result<Majority<E>> {
    if mode == MajorityMode::Interval && base.delta().is_none() {
        return Err(Error::configuration(
            "interval majority needs an estimator with a known error radius",
        ));
    }
    let repetitions = repetitions_for(n);
    Ok(Majority {
        base,
        repetitions,
        mode,
        scratch: Vec::with_capacity(repetitions as usize),
    })
}

impl<E> Majority<E> {
    pub fn repetitions(&self) -> u64 {
        self.repetitions
    }

    pub fn mode(&self) -> MajorityMode {
        self.mode
    }

    pub fn base(&self) -> &E {
        &self.base
    }

    pub fn into_base(self) -> E {
        self.base
    }
}

impl<E: StochasticEstimator> StochasticEstimator for Majority<E> {
    fn sample(&mut self, index: usize, rng: &mut RngStream) -> f64 {
        self.scratch.clear();
        for _ in 0..self.repetitions {
            let v = self.base.sample(index, rng);
            self.scratch.push(v);
        }
        match self.mode {
            MajorityMode::Interval => {
                let delta = self.base.delta().expect("checked at construction");
                interval_vote(&mut self.scratch, delta)
            }
            MajorityMode::Median => median_vote(&mut self.scratch),
        }
    }

    fn delta(&self) -> Option<f64> {
        let d = self.base.delta()?;
        Some(match self.mode {
            MajorityMode::Interval => 2.0 * d,
            MajorityMode::Median => d,
        })
    }
}
