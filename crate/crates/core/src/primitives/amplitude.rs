use alloc::format;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::oracle::BooleanOracle;
use crate::rng::RngStream;
use crate::simcore::{
    statevector_ae, AEOutcome, GroverOperator, OutcomeSampler, QueryCost, SubspaceAEProblem,
};

/// Which simulator produces phase-estimation outcomes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    /// Closed-form law on the invariant plane.
    #[default]
    Subspace,
    /// Full joint statevector (small sizes only).
    Statevector,
}

/// Phase register sized for at least `t` Grover applications: the smallest
/// power of two `M` with `M - 1 >= t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhaseRegister {
    size: usize,
}

impl PhaseRegister {
    pub fn for_iterations(t: u64) -> Result<Self> {
        if t == 0 {
            return Err(Error::validation("t", "must be at least 1"));
        }
        let size = (t + 1).checked_next_power_of_two().ok_or_else(|| {
            Error::validation("t", format!("{t} is too large for a phase register"))
        })?;
        Ok(Self {
            size: size as usize,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn effective_t(&self) -> u64 {
        self.size as u64 - 1
    }
}

/// `2 pi sqrt(a(1-a)) / t + pi^2 / t^2`.
pub fn ae_error_bound(a: f64, t: u64) -> f64 {
    let t = t as f64;
    2.0 * PI * libm::sqrt(a * (1.0 - a)) / t + PI * PI / (t * t)
}

/// Amplitude estimation for a known amplitude `a`, on the subspace backend.
///
/// Uses `effective_t = M - 1` Grover applications where `M` is the phase
/// register chosen for `t`. Queries are reported per `cost`; charging them is
/// the caller's job.
pub fn amplitude_estimation(
    a: f64,
    t: u64,
    cost: QueryCost,
    rng: &mut RngStream,
) -> Result<AEOutcome> {
    let register = PhaseRegister::for_iterations(t)?;
    let problem = SubspaceAEProblem::new(a, register.size())?.with_cost(cost);
    Ok(OutcomeSampler::new(problem).sample(rng))
}

/// Amplitude estimation for an explicit operator on either backend.
pub fn amplitude_estimation_with(
    op: &GroverOperator,
    t: u64,
    cost: QueryCost,
    backend: Backend,
    rng: &mut RngStream,
) -> Result<AEOutcome> {
    let register = PhaseRegister::for_iterations(t)?;
    match backend {
        Backend::Subspace => {
            amplitude_estimation(op.good_probability().clamp(0.0, 1.0), t, cost, rng)
        }
        Backend::Statevector => statevector_ae(op, register.size(), cost, rng),
    }
}

/// Output of [`count`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CountOutcome {
    /// Integer estimate of the number of solutions, in `0..=N`.
    pub estimate: u64,
    pub ae: AEOutcome,
}

fn round_count(n: usize, a_est: f64) -> u64 {
    // half away from zero
    (libm::round(n as f64 * a_est) as u64).min(n as u64)
}

/// `2 pi sqrt(s(N-s)) / t + pi^2 N / t^2`.
pub fn count_error_bound(s: u64, n: usize, t: u64) -> f64 {
    let (s, n, t) = (s as f64, n as f64, t as f64);
    2.0 * PI * libm::sqrt(s * (n - s)) / t + PI * PI * n / (t * t)
}

/// Quantum counting: estimates the number of solutions of `pred` with
/// amplitude estimation on the uniform superposition.
///
/// Charges `M - 1` evaluations of the predicate. With no solutions the
/// estimate is always exactly 0.
pub fn count(pred: &BooleanOracle, t: u64, rng: &mut RngStream) -> Result<CountOutcome> {
    count_with_backend(pred, t, Backend::Subspace, rng)
}

pub fn count_with_backend(
    pred: &BooleanOracle,
    t: u64,
    backend: Backend,
    rng: &mut RngStream,
) -> Result<CountOutcome> {
    let ae = match backend {
        Backend::Subspace => {
            let a = pred.marked_count() as f64 / pred.len() as f64;
            amplitude_estimation(a, t, QueryCost::COUNTING, rng)?
        }
        Backend::Statevector => {
            let op = GroverOperator::for_counting(pred)?;
            amplitude_estimation_with(&op, t, QueryCost::COUNTING, backend, rng)?
        }
    };
    pred.counter().charge(ae.f_queries);
    Ok(CountOutcome {
        estimate: round_count(pred.len(), ae.estimate),
        ae,
    })
}

/// Repeated counting of one predicate with the outcome law cached.
///
/// Every draw charges the predicate's counter exactly like [`count`].
#[derive(Clone, Debug)]
pub struct CountSampler {
    sampler: OutcomeSampler,
    pred: BooleanOracle,
}

impl CountSampler {
    pub fn new(pred: &BooleanOracle, t: u64) -> Result<Self> {
        let register = PhaseRegister::for_iterations(t)?;
        let a = pred.marked_count() as f64 / pred.len() as f64;
        let problem = SubspaceAEProblem::new(a, register.size())?.with_cost(QueryCost::COUNTING);
        Ok(Self {
            sampler: OutcomeSampler::new(problem),
            pred: pred.clone(),
        })
    }

    pub fn register(&self) -> usize {
        self.sampler.problem().register()
    }

    /// Queries per draw.
    pub fn cost(&self) -> u64 {
        QueryCost::COUNTING.total(self.register())
    }

    pub fn sample(&self, rng: &mut RngStream) -> CountOutcome {
        let ae = self.sampler.sample(rng);
        self.pred.counter().charge(ae.f_queries);
        CountOutcome {
            estimate: round_count(self.pred.len(), ae.estimate),
            ae,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::{estimate_for, pe_outcome_distribution};
    use alloc::vec;

    #[test]
    fn register_sizing() {
        let cases = [
            (1, 2),
            (2, 4),
            (3, 4),
            (7, 8),
            (8, 16),
            (15, 16),
            (63, 64),
            (126, 128),
        ];
        for (t, m) in cases {
            let r = PhaseRegister::for_iterations(t).unwrap();
            assert_eq!(r.size(), m, "t={t}");
            assert_eq!(r.effective_t(), m as u64 - 1);
        }
        assert!(PhaseRegister::for_iterations(0).is_err());
    }

    #[test]
    fn ae_examples() {
        let mut rng = RngStream::new(11, 0);
        for _ in 0..100 {
            let zero = amplitude_estimation(0.0, 10, QueryCost::MEAN_OPERATOR, &mut rng).unwrap();
            assert_eq!(zero.estimate, 0.0);
            let half = amplitude_estimation(0.5, 7, QueryCost::MEAN_OPERATOR, &mut rng).unwrap();
            assert!((half.estimate - 0.5).abs() < 1e-12);
            assert_eq!(half.register, 8);
            assert_eq!(half.f_queries, 4 * 7 + 2);
        }
    }

    #[test]
    fn ae_bound_frequency() {
        let mut rng = RngStream::new(12, 0);
        let a = 0.3;
        let hits = (0..10_000)
            .filter(|_| {
                let out = amplitude_estimation(a, 63, QueryCost::MEAN_OPERATOR, &mut rng).unwrap();
                assert!((0.0..=1.0).contains(&out.estimate));
                (out.estimate - a).abs() <= ae_error_bound(a, out.effective_t)
            })
            .count();
        assert!(hits as f64 / 1e4 >= 8.0 / (PI * PI) - 0.02, "hits={hits}");
    }

    #[test]
    fn count_without_solutions_is_exact() {
        let pred = BooleanOracle::new(vec![false; 16]).unwrap();
        let mut rng = RngStream::new(13, 0);
        for t in [1, 5, 15, 100] {
            for _ in 0..50 {
                assert_eq!(count(&pred, t, &mut rng).unwrap().estimate, 0);
            }
        }
    }

    #[test]
    fn count_all_marked_on_grid() {
        let pred = BooleanOracle::new(vec![true; 4]).unwrap();
        let mut rng = RngStream::new(14, 0);
        for t in [1, 3, 7, 15] {
            for _ in 0..50 {
                assert_eq!(count(&pred, t, &mut rng).unwrap().estimate, 4);
            }
        }
    }

    #[test]
    fn count_charges_effective_t() {
        let pred = BooleanOracle::from_indices(16, &[3]).unwrap();
        let mut rng = RngStream::new(15, 0);
        count(&pred, 10, &mut rng).unwrap();
        assert_eq!(pred.counter().tally(), 15);
        let sampler = CountSampler::new(&pred, 10).unwrap();
        sampler.sample(&mut rng);
        sampler.sample(&mut rng);
        assert_eq!(pred.counter().tally(), 45);
    }

    #[test]
    fn count_distribution_matches_mapped_law() {
        // N = 4, s = 1, t = 15: push the exact outcome law through the rounding
        // map and compare with empirical frequencies.
        let pred = BooleanOracle::from_indices(4, &[2]).unwrap();
        let law = pe_outcome_distribution(&SubspaceAEProblem::new(0.25, 16).unwrap());
        let mut expected = [0.0; 5];
        for (y, p) in law.iter().enumerate() {
            let s = libm::round(4.0 * estimate_for(y, 16)) as usize;
            expected[s] += p;
        }
        let trials = 100_000;
        let mut rng = RngStream::new(16, 0);
        let mut counts = [0usize; 5];
        for _ in 0..trials {
            counts[count(&pred, 15, &mut rng).unwrap().estimate as usize] += 1;
        }
        for s in 0..5 {
            let freq = counts[s] as f64 / trials as f64;
            let sd = libm::sqrt(expected[s] * (1.0 - expected[s]) / trials as f64);
            assert!(
                (freq - expected[s]).abs() <= 5.0 * sd + 1e-9,
                "s={s} {freq} vs {}",
                expected[s]
            );
        }
    }

    #[test]
    fn statevector_count_agrees_in_law() {
        let pred = BooleanOracle::from_indices(8, &[0, 3, 5]).unwrap();
        let law = pe_outcome_distribution(&SubspaceAEProblem::new(3.0 / 8.0, 16).unwrap());
        let mut expected = [0.0; 9];
        for (y, p) in law.iter().enumerate() {
            expected[libm::round(8.0 * estimate_for(y, 16)) as usize] += p;
        }
        let trials = 4000;
        let mut rng = RngStream::new(17, 0);
        let mut counts = [0usize; 9];
        for _ in 0..trials {
            let s = count_with_backend(&pred, 15, Backend::Statevector, &mut rng)
                .unwrap()
                .estimate;
            counts[s as usize] += 1;
        }
        for s in 0..9 {
            let freq = counts[s] as f64 / trials as f64;
            let sd = libm::sqrt(expected[s] * (1.0 - expected[s]) / trials as f64);
            assert!((freq - expected[s]).abs() <= 5.0 * sd + 1e-9, "s={s}");
        }
    }
}
