//! Black-box functions with query accounting.
//!
//! Oracles store their table behind an `Arc` and count evaluations through a
//! shared [`QueryCounter`] handle. Cloning an oracle shares both; use
//! [`RealOracle::with_fresh_counter`] (and friends) to get an independent
//! tally for a new run.
//!
//! Accessors named `values`, `marks`, `entry` and friends are the
//! simulator's view of the table and never charge. Only `query` charges.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest supported fixed-point precision. Every `ell`-bit fraction is
/// exactly representable as an `f64` up to this width.
pub const MAX_BITS: u32 = 52;

/// Shared tally of oracle evaluations.
///
/// Clones refer to the same tally. The tally never decreases.
#[derive(Clone, Debug, Default)]
pub struct QueryCounter(Tally);

#[cfg(target_has_atomic = "64")]
type Tally = Arc<core::sync::atomic::AtomicU64>;

// Single-threaded fallback for targets without 64-bit atomics.
#[cfg(not(target_has_atomic = "64"))]
type Tally = alloc::rc::Rc<core::cell::Cell<u64>>;

impl QueryCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[cfg(target_has_atomic = "64")]
    pub fn tally(&self) -> u64 {
        self.0.load(core::sync::atomic::Ordering::Relaxed)
    }

    #[cfg(target_has_atomic = "64")]
    pub fn charge(&self, queries: u64) {
        self.0
            .fetch_add(queries, core::sync::atomic::Ordering::Relaxed);
    }

    #[cfg(not(target_has_atomic = "64"))]
    pub fn tally(&self) -> u64 {
        self.0.get()
    }

    #[cfg(not(target_has_atomic = "64"))]
    pub fn charge(&self, queries: u64) {
        self.0.set(self.0.get() + queries);
    }
}

/// How precisely a [`RealOracle`] reports its values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    /// Values are `ell`-bit binary fractions (or exactly 1).
    Bits(u32),
    /// Values are arbitrary reals in `[0, 1]`.
    Arbitrary,
}

/// An `ell`-bit binary fraction `b_1 b_2 ... b_ell`, most significant first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    raw: u64,
    ell: u32,
}

impl FixedPoint {
    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// The bits as an integer, `b_1` in the highest position.
    pub fn raw(&self) -> u64 {
        self.raw
    }

    /// Bit `i`, counted from 1 at weight `2^-1`.
    pub fn bit(&self, i: u32) -> bool {
        debug_assert!((1..=self.ell).contains(&i));
        (self.raw >> (self.ell - i)) & 1 == 1
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.ell).map(move |i| self.bit(i))
    }

    /// `sum_i b_i 2^-i`.
    pub fn value(&self) -> f64 {
        self.raw as f64 / (1u64 << self.ell) as f64
    }
}

fn check_ell(ell: u32) -> Result<()> {
    if ell == 0 || ell > MAX_BITS {
        return Err(Error::validation(
            "ell",
            format!("must be between 1 and {MAX_BITS}, got {ell}"),
        ));
    }
    Ok(())
}

fn check_unit(field: impl Fn() -> alloc::string::String, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::validation(field(), format!("{v} is outside [0, 1]")));
    }
    Ok(())
}

fn check_power_of_two(field: &str, n: usize) -> Result<()> {
    if !n.is_power_of_two() {
        return Err(Error::validation(
            field,
            format!("size {n} is not a power of two"),
        ));
    }
    Ok(())
}

/// Encodes `v` as an `ell`-bit binary fraction, rounding to nearest with
/// ties to even.
///
/// `v = 1` encodes as all ones, as do values that round up to 1. The all-ones
/// pattern decodes to `1 - 2^-ell`.
pub fn encode_fixed_point(v: f64, ell: u32) -> Result<FixedPoint> {
    check_ell(ell)?;
    check_unit(|| "value".into(), v)?;
    let full = 1u64 << ell;
    // Scaling by a power of two is exact.
    let scaled = libm::rint(v * full as f64) as u64;
    let raw = if v == 1.0 || scaled >= full {
        full - 1
    } else {
        scaled
    };
    Ok(FixedPoint { raw, ell })
}

fn is_representable(v: f64, ell: u32) -> bool {
    v == 1.0 || libm::rint(v * (1u64 << ell) as f64) == v * (1u64 << ell) as f64
}

/// A function `F: {0..N-1} -> [0, 1]` with `N` a power of two.
#[derive(Clone, Debug)]
pub struct RealOracle {
    values: Arc<[f64]>,
    precision: Precision,
    counter: QueryCounter,
}

impl RealOracle {
    /// Builds an oracle, rejecting values outside `[0, 1]` and, in
    /// [`Precision::Bits`] mode, values that are not `ell`-bit fractions.
    pub fn new(values: Vec<f64>, precision: Precision) -> Result<Self> {
        check_power_of_two("values", values.len())?;
        if let Precision::Bits(ell) = precision {
            check_ell(ell)?;
        }
        for (i, &v) in values.iter().enumerate() {
            check_unit(|| format!("values[{i}]"), v)?;
            if let Precision::Bits(ell) = precision {
                if !is_representable(v, ell) {
                    return Err(Error::validation(
                        format!("values[{i}]"),
                        format!("{v} is not representable with {ell} bits"),
                    ));
                }
            }
        }
        Ok(Self {
            values: values.into(),
            precision,
            counter: QueryCounter::new(),
        })
    }

    pub fn arbitrary(values: Vec<f64>) -> Result<Self> {
        Self::new(values, Precision::Arbitrary)
    }

    /// Rounds every value to `ell` bits first. A value of exactly 1 is kept.
    pub fn quantized(values: Vec<f64>, ell: u32) -> Result<Self> {
        let mut rounded = Vec::with_capacity(values.len());
        for (i, &v) in values.iter().enumerate() {
            check_unit(|| format!("values[{i}]"), v)?;
            rounded.push(if v == 1.0 {
                1.0
            } else {
                encode_fixed_point(v, ell)?.value()
            });
        }
        Self::new(rounded, Precision::Bits(ell))
    }

    /// Same table and precision, new zeroed counter.
    pub fn with_fresh_counter(&self) -> Self {
        Self {
            values: Arc::clone(&self.values),
            precision: self.precision,
            counter: QueryCounter::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn ell(&self) -> Option<u32> {
        match self.precision {
            Precision::Bits(ell) => Some(ell),
            Precision::Arbitrary => None,
        }
    }

    pub fn counter(&self) -> &QueryCounter {
        &self.counter
    }

    /// Uncharged view of the table.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Evaluates `F(x)`, charging one query.
    pub fn query(&self, x: usize) -> Result<f64> {
        let v = *self.values.get(x).ok_or(Error::IndexOutOfRange {
            index: x,
            len: self.len(),
        })?;
        self.counter.charge(1);
        Ok(v)
    }

    /// Fixed-point encoding of `F(x)` (uncharged). Requires bit mode.
    pub fn encoded(&self, x: usize) -> Result<FixedPoint> {
        let ell = self.ell().ok_or_else(|| {
            Error::configuration("oracle has arbitrary precision, no bit encoding")
        })?;
        let v = *self.values.get(x).ok_or(Error::IndexOutOfRange {
            index: x,
            len: self.len(),
        })?;
        encode_fixed_point(v, ell)
    }
}

/// A predicate `F: {0..N-1} -> {0, 1}`.
#[derive(Clone, Debug)]
pub struct BooleanOracle {
    marks: Arc<[bool]>,
    counter: QueryCounter,
}

impl BooleanOracle {
    pub fn new(marks: Vec<bool>) -> Result<Self> {
        check_power_of_two("marks", marks.len())?;
        Ok(Self {
            marks: marks.into(),
            counter: QueryCounter::new(),
        })
    }

    /// Domain of size `n` with exactly the listed indices marked.
    pub fn from_indices(n: usize, marked: &[usize]) -> Result<Self> {
        let mut marks = alloc::vec![false; n];
        for &x in marked {
            *marks
                .get_mut(x)
                .ok_or(Error::IndexOutOfRange { index: x, len: n })? = true;
        }
        Self::new(marks)
    }

    /// Reinterprets a 0/1-valued real oracle, sharing its counter.
    pub fn from_real(oracle: &RealOracle) -> Result<Self> {
        let mut marks = Vec::with_capacity(oracle.len());
        for (i, &v) in oracle.values().iter().enumerate() {
            if v != 0.0 && v != 1.0 {
                return Err(Error::validation(
                    format!("values[{i}]"),
                    format!("{v} is not Boolean"),
                ));
            }
            marks.push(v == 1.0);
        }
        Ok(Self {
            marks: marks.into(),
            counter: oracle.counter.clone(),
        })
    }

    fn with_counter(marks: Vec<bool>, counter: QueryCounter) -> Self {
        Self {
            marks: marks.into(),
            counter,
        }
    }

    pub fn with_fresh_counter(&self) -> Self {
        Self {
            marks: Arc::clone(&self.marks),
            counter: QueryCounter::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    pub fn counter(&self) -> &QueryCounter {
        &self.counter
    }

    /// Uncharged view of the predicate.
    pub fn marks(&self) -> &[bool] {
        &self.marks
    }

    /// Number of solutions `s` (uncharged).
    pub fn marked_count(&self) -> usize {
        self.marks.iter().filter(|&&m| m).count()
    }

    pub fn marked_indices(&self) -> Vec<usize> {
        self.marks
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect()
    }

    pub fn query(&self, x: usize) -> Result<bool> {
        let v = *self.marks.get(x).ok_or(Error::IndexOutOfRange {
            index: x,
            len: self.len(),
        })?;
        self.counter.charge(1);
        Ok(v)
    }
}

/// The `i`-th bit plane `F_i` of an `ell`-bit oracle, `1 <= i <= ell`.
///
/// The result shares the parent's counter: one evaluation of `F_i` is one
/// evaluation of `F`.
pub fn bit_oracle(oracle: &RealOracle, i: u32) -> Result<BooleanOracle> {
    let ell = oracle.ell().ok_or_else(|| {
        Error::configuration("bit planes need an oracle with a fixed bit precision")
    })?;
    if i == 0 || i > ell {
        return Err(Error::IndexOutOfRange {
            index: i as usize,
            len: ell as usize,
        });
    }
    let marks = (0..oracle.len())
        .map(|x| oracle.encoded(x).map(|fp| fp.bit(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BooleanOracle::with_counter(marks, oracle.counter.clone()))
}

/// A dense `N x N` distance table with entries in `[0, 1]`.
///
/// No symmetry, zero diagonal or triangle inequality is assumed.
#[derive(Clone, Debug)]
pub struct DistanceOracle {
    n: usize,
    table: Arc<[f64]>,
    counter: QueryCounter,
}

impl DistanceOracle {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        check_power_of_two("n", n)?;
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::validation(
                    format!("rows[{i}]"),
                    format!("has {} entries, expected {n}", row.len()),
                ));
            }
            for (j, &v) in row.iter().enumerate() {
                check_unit(|| format!("rows[{i}][{j}]"), v)?;
            }
            table.extend(row);
        }
        Ok(Self {
            n,
            table: table.into(),
            counter: QueryCounter::new(),
        })
    }

    pub fn with_fresh_counter(&self) -> Self {
        Self {
            n: self.n,
            table: Arc::clone(&self.table),
            counter: QueryCounter::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn counter(&self) -> &QueryCounter {
        &self.counter
    }

    /// Uncharged `dist(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.table[i * self.n + j]
    }

    /// Uncharged row `dist(i, .)`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.table[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.table.chunks(self.n)
    }

    pub fn query(&self, i: usize, j: usize) -> Result<f64> {
        if i >= self.n || j >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i.max(j),
                len: self.n,
            });
        }
        self.counter.charge(1);
        Ok(self.entry(i, j))
    }

    /// Average distance `d_i` from point `i` (uncharged; test oracle only).
    pub fn row_mean(&self, i: usize) -> f64 {
        self.row(i).iter().sum::<f64>() / self.n as f64
    }

    /// `d_min` over all points (uncharged; test oracle only).
    pub fn min_row_mean(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row_mean(i))
            .fold(f64::INFINITY, f64::min)
    }
}
