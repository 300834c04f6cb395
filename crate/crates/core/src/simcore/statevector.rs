use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::oracle::{BooleanOracle, RealOracle};

/// Pure state over a power-of-two dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// Accepts any power-of-two length whose squared norm is 1 within 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if !amplitudes.len().is_power_of_two() {
            return Err(Error::configuration(format!(
                "state dimension {} is not a power of two",
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::configuration(format!(
                "state has squared norm {norm}, expected 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// `H^{\otimes n}|0>`.
    pub fn uniform(dimension: usize) -> Result<Self> {
        let amp = Complex64::new(1.0 / libm::sqrt(dimension as f64), 0.0);
        Self::from_amplitudes(vec![amp; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Statevector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Equality up to a global phase: `|<a|b>| = 1` within `tol`.
    pub fn equals_up_to_phase(&self, other: &Statevector, tol: f64) -> bool {
        self.dimension() == other.dimension() && (self.inner(other).norm() - 1.0).abs() <= tol
    }
}

/// Prepares `A|0>` for the mean estimator.
///
/// Basis state `2x + f` carries `sqrt(1/N) * sqrt(1 - F(x))` for flag `f = 0`
/// and `sqrt(1/N) * sqrt(F(x))` for `f = 1`. One application of `A` is
/// charged two queries against the oracle.
pub fn build_mean_operator(oracle: &RealOracle) -> Result<Statevector> {
    let n = oracle.len();
    if !n.is_power_of_two() {
        return Err(Error::configuration(format!(
            "domain size {n} is not a power of two"
        )));
    }
    let scale = 1.0 / libm::sqrt(n as f64);
    let mut amplitudes = Vec::with_capacity(2 * n);
    for &f in oracle.values() {
        amplitudes.push(Complex64::new(scale * libm::sqrt(1.0 - f), 0.0));
        amplitudes.push(Complex64::new(scale * libm::sqrt(f), 0.0));
    }
    oracle.counter().charge(2);
    Statevector::from_amplitudes(amplitudes)
}

/// The Grover operator `Q = -A S_0 A^-1 S_chi` for a prepared state
/// `psi = A|0>` and a set of good basis states.
///
/// Since `A S_0 A^-1 = I - 2|psi><psi|`, `Q` acts as `(2|psi><psi| - I) S_chi`
/// and only `psi` is needed.
#[derive(Clone, Debug)]
pub struct GroverOperator {
    initial: Statevector,
    good: Vec<bool>,
}

impl GroverOperator {
    pub fn new(initial: Statevector, good: Vec<bool>) -> Result<Self> {
        if good.len() != initial.dimension() {
            return Err(Error::configuration(format!(
                "good-state mask has {} entries for a state of dimension {}",
                good.len(),
                initial.dimension()
            )));
        }
        Ok(Self { initial, good })
    }

    /// Mean estimator: good states are those with the flag qubit set.
    pub fn for_mean(oracle: &RealOracle) -> Result<Self> {
        let initial = build_mean_operator(oracle)?;
        let good = (0..initial.dimension()).map(|k| k & 1 == 1).collect();
        Self::new(initial, good)
    }

    /// Counting: uniform superposition, good states are the solutions.
    /// Reads the predicate table without charging.
    pub fn for_counting(pred: &BooleanOracle) -> Result<Self> {
        Self::new(Statevector::uniform(pred.len())?, pred.marks().to_vec())
    }

    pub fn initial(&self) -> &Statevector {
        &self.initial
    }

    pub fn dimension(&self) -> usize {
        self.initial.dimension()
    }

    /// `a = ||Pi_good psi||^2`.
    pub fn good_probability(&self) -> f64 {
        self.initial
            .amplitudes
            .iter()
            .zip(&self.good)
            .filter(|(_, &g)| g)
            .map(|(a, _)| a.norm_sqr())
            .sum()
    }

    /// Applies `Q` in place.
    pub fn apply(&self, state: &mut [Complex64]) {
        debug_assert_eq!(state.len(), self.dimension());
        for (amp, &g) in state.iter_mut().zip(&self.good) {
            if g {
                *amp = -*amp;
            }
        }
        let psi = &self.initial.amplitudes;
        let overlap: Complex64 = psi
            .iter()
            .zip(state.iter())
            .map(|(p, s)| p.conj() * s)
            .sum();
        for (amp, p) in state.iter_mut().zip(psi) {
            *amp = 2.0 * overlap * p - *amp;
        }
    }
}

/// One Grover iteration applied to `state`.
pub fn grover_iterate(state: &Statevector, op: &GroverOperator) -> Result<Statevector> {
    if state.dimension() != op.dimension() {
        return Err(Error::configuration(format!(
            "state dimension {} does not match operator dimension {}",
            state.dimension(),
            op.dimension()
        )));
    }
    let mut next = state.clone();
    op.apply(&mut next.amplitudes);
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Precision;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn real_parts(s: &Statevector) -> Vec<f64> {
        s.amplitudes().iter().map(|a| a.re).collect()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn mean_operator_examples() {
        let zero = RealOracle::arbitrary(vec![0.0, 0.0]).unwrap();
        let s = build_mean_operator(&zero).unwrap();
        assert!(close(
            &real_parts(&s),
            &[FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0]
        ));

        let one = RealOracle::arbitrary(vec![1.0, 1.0]).unwrap();
        let s = build_mean_operator(&one).unwrap();
        assert!(close(
            &real_parts(&s),
            &[0.0, FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2]
        ));

        let mixed = RealOracle::arbitrary(vec![0.0, 1.0]).unwrap();
        let s = build_mean_operator(&mixed).unwrap();
        assert!(close(
            &real_parts(&s),
            &[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]
        ));
    }

    #[test]
    fn mean_operator_charges_two_per_application() {
        let f = RealOracle::new(vec![0.25, 0.5, 0.75, 1.0], Precision::Bits(2)).unwrap();
        build_mean_operator(&f).unwrap();
        assert_eq!(f.counter().tally(), 2);
        build_mean_operator(&f).unwrap();
        assert_eq!(f.counter().tally(), 4);
    }

    #[test]
    fn good_probability_is_the_mean() {
        let f = RealOracle::arbitrary(vec![0.1, 0.7, 0.3, 0.9]).unwrap();
        let op = GroverOperator::for_mean(&f).unwrap();
        assert!((op.good_probability() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn iterate_fixes_unmarked_and_fully_marked_states() {
        for value in [0.0, 1.0] {
            let f = RealOracle::arbitrary(vec![value; 4]).unwrap();
            let op = GroverOperator::for_mean(&f).unwrap();
            let next = grover_iterate(op.initial(), &op).unwrap();
            assert!(next.equals_up_to_phase(op.initial(), 1e-12));
        }
    }

    #[test]
    fn iterate_rotates_by_twice_theta() {
        // a = 1/2: theta = pi/4, overlap after one step is cos(pi/2) = 0.
        let f = RealOracle::arbitrary(vec![0.5; 4]).unwrap();
        let op = GroverOperator::for_mean(&f).unwrap();
        let next = grover_iterate(op.initial(), &op).unwrap();
        assert!(op.initial().inner(&next).norm() < 1e-12);

        // Independent check: 2x2 rotation acting on (cos theta, sin theta).
        for a in [0.1, 0.25, 0.6, 0.9] {
            let f = RealOracle::arbitrary(vec![a; 8]).unwrap();
            let op = GroverOperator::for_mean(&f).unwrap();
            let theta = libm::asin(libm::sqrt(a));
            let mut state = op.initial().clone();
            for j in 1..=5 {
                state = grover_iterate(&state, &op).unwrap();
                let angle = (2 * j + 1) as f64 * theta;
                // good weight after j steps is sin^2((2j+1) theta)
                let good: f64 = state
                    .amplitudes()
                    .iter()
                    .skip(1)
                    .step_by(2)
                    .map(|c| c.norm_sqr())
                    .sum();
                let s = libm::sin(angle);
                assert!((good - s * s).abs() < 1e-12);
                assert!((state.norm_sqr() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn counting_operator_uses_uniform_state() {
        let pred = BooleanOracle::from_indices(8, &[1, 6]).unwrap();
        let op = GroverOperator::for_counting(&pred).unwrap();
        assert!((op.good_probability() - 0.25).abs() < 1e-12);
        assert_eq!(pred.counter().tally(), 0);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(Statevector::from_amplitudes(vec![Complex64::new(1.0, 0.0); 3]).is_err());
        assert!(Statevector::from_amplitudes(vec![Complex64::new(1.0, 0.0); 2]).is_err());
        let s = Statevector::uniform(4).unwrap();
        assert!(GroverOperator::new(s, vec![false; 2]).is_err());
    }
}
