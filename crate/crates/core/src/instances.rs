//! Built-in instance generators.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::{DistanceOracle, Precision, RealOracle};
use crate::rng::RngStream;

/// A generated or loaded problem instance.
#[derive(Clone, Debug)]
pub enum Instance {
    Real(RealOracle),
    Distance(DistanceOracle),
}

#[derive(Clone, Debug, PartialEq)]
pub enum InstanceSpec {
    /// `F(x) = value` everywhere.
    Constant {
        n: usize,
        value: f64,
        ell: Option<u32>,
    },
    /// Independent uniform values; `ell`-bit fractions when `ell` is set.
    UniformRandom { n: usize, ell: Option<u32> },
    /// Boolean function with exactly `ones` solutions at random positions.
    BooleanDensity { n: usize, ones: usize },
    /// All points at distance 1 except the pair `(p, q)` at `delta < 1`.
    ClosePair {
        n: usize,
        delta: f64,
        p: usize,
        q: usize,
    },
    /// `F(x) = pi(x) / N` for a uniformly random permutation `pi`.
    Permutation { n: usize },
    /// Random distance table with zero diagonal; `ell`-bit entries when set.
    RandomDistance { n: usize, ell: Option<u32> },
}

fn precision(ell: Option<u32>) -> Precision {
    ell.map_or(Precision::Arbitrary, Precision::Bits)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::validation("n", format!("{n} is not a power of two")));
    }
    Ok(())
}

fn random_unit(ell: Option<u32>, rng: &mut RngStream) -> f64 {
    match ell {
        Some(ell) => rng.gen_range(0..1u64 << ell) as f64 / (1u64 << ell) as f64,
        None => rng.gen::<f64>(),
    }
}

/// Builds the instance described by `spec`. Random choices come from `rng`.
pub fn generate(spec: &InstanceSpec, rng: &mut RngStream) -> Result<Instance> {
    match *spec {
        InstanceSpec::Constant { n, value, ell } => {
            check_n(n)?;
            Ok(Instance::Real(RealOracle::new(
                vec![value; n],
                precision(ell),
            )?))
        }
        InstanceSpec::UniformRandom { n, ell } => {
            check_n(n)?;
            let values = (0..n).map(|_| random_unit(ell, rng)).collect();
            Ok(Instance::Real(RealOracle::new(values, precision(ell))?))
        }
        InstanceSpec::BooleanDensity { n, ones } => {
            check_n(n)?;
            if ones > n {
                return Err(Error::validation(
                    "density",
                    format!("{ones} solutions do not fit in {n} points"),
                ));
            }
            let mut values = vec![0.0; n];
            for x in index::sample(rng, n, ones) {
                values[x] = 1.0;
            }
            Ok(Instance::Real(RealOracle::new(values, Precision::Bits(1))?))
        }
        InstanceSpec::ClosePair { n, delta, p, q } => {
            check_n(n)?;
            if !(0.0..1.0).contains(&delta) {
                return Err(Error::validation(
                    "delta",
                    format!("{delta} is not in [0, 1)"),
                ));
            }
            if p == q || p >= n || q >= n {
                return Err(Error::validation(
                    "pair",
                    format!("({p}, {q}) is not a pair of distinct points below {n}"),
                ));
            }
            let rows = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                0.0
                            } else if (i == p && j == q) || (i == q && j == p) {
                                delta
                            } else {
                                1.0
                            }
                        })
                        .collect()
                })
                .collect();
            Ok(Instance::Distance(DistanceOracle::new(rows)?))
        }
        InstanceSpec::Permutation { n } => {
            check_n(n)?;
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            let ell = n.trailing_zeros().max(1);
            let values = perm.into_iter().map(|k| k as f64 / n as f64).collect();
            Ok(Instance::Real(RealOracle::new(
                values,
                Precision::Bits(ell),
            )?))
        }
        InstanceSpec::RandomDistance { n, ell } => {
            check_n(n)?;
            let rows = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { 0.0 } else { random_unit(ell, rng) })
                        .collect()
                })
                .collect();
            Ok(Instance::Distance(DistanceOracle::new(rows)?))
        }
    }
}
