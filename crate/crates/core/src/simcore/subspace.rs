use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use rand::Rng;

use super::{AEOutcome, QueryCost};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Amplitude estimation restricted to the invariant plane of `Q`.
///
/// On the plane spanned by the good and bad components of `A|0>`, `Q` is a
/// rotation by `2 theta_a` with `sin^2(theta_a) = a`. Its eigenphases are
/// `+-2 theta_a`, so the outcome law of phase estimation is known in closed
/// form and does not depend on the size of the underlying space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubspaceAEProblem {
    a: f64,
    theta: f64,
    register: usize,
    cost: QueryCost,
}

impl SubspaceAEProblem {
    /// `register` is the phase register size `M`, a power of two `>= 2`.
    /// Queries are accounted as for the mean operator; see [`Self::with_cost`].
    pub fn new(a: f64, register: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::validation("a", format!("{a} is outside [0, 1]")));
        }
        if register < 2 || !register.is_power_of_two() {
            return Err(Error::configuration(format!(
                "phase register size {register} must be a power of two >= 2"
            )));
        }
        Ok(Self {
            a,
            theta: libm::asin(libm::sqrt(a)),
            register,
            cost: QueryCost::MEAN_OPERATOR,
        })
    }

    pub fn with_cost(mut self, cost: QueryCost) -> Self {
        self.cost = cost;
        self
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn register(&self) -> usize {
        self.register
    }

    pub fn cost(&self) -> QueryCost {
        self.cost
    }
}

/// Fejer-kernel weight of outcome `y` for eigenphase `omega` (in turns).
fn phase_weight(y: usize, omega: f64, m: usize) -> f64 {
    let mut delta = y as f64 / m as f64 - omega;
    delta -= libm::floor(delta + 0.5);
    let denom = libm::sin(PI * delta);
    if denom == 0.0 {
        return 1.0;
    }
    let num = libm::sin(m as f64 * PI * delta);
    (num * num) / ((m * m) as f64 * denom * denom)
}

/// Probability of each phase-register outcome `y in 0..M`.
///
/// `p(y) = (W(y; omega) + W(y; 1 - omega)) / 2` with `omega = theta_a / pi`
/// and `W` the Fejer kernel `sin^2(M pi d) / (M^2 sin^2(pi d))`, `d` the
/// wrapped distance between `y / M` and the eigenphase.
pub fn pe_outcome_distribution(problem: &SubspaceAEProblem) -> Vec<f64> {
    let m = problem.register;
    let omega = problem.theta / PI;
    (0..m)
        .map(|y| 0.5 * (phase_weight(y, omega, m) + phase_weight(y, 1.0 - omega, m)))
        .collect()
}

/// Precomputed inverse-CDF sampler over the outcome law of one problem.
///
/// Reuse it when the same `(a, M)` is sampled many times.
#[derive(Clone, Debug)]
pub struct OutcomeSampler {
    problem: SubspaceAEProblem,
    cdf: Vec<f64>,
}

impl OutcomeSampler {
    pub fn new(problem: SubspaceAEProblem) -> Self {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = pe_outcome_distribution(&problem)
            .into_iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        // Normalization error is below 1e-12; pin the tail so every draw lands.
        if let Some(last) = cdf.last_mut() {
            *last = f64::INFINITY;
        }
        Self { problem, cdf }
    }

    pub fn problem(&self) -> &SubspaceAEProblem {
        &self.problem
    }

    pub fn sample_outcome(&self, rng: &mut RngStream) -> usize {
        let u: f64 = rng.gen();
        self.cdf.partition_point(|&c| c <= u)
    }

    pub fn sample(&self, rng: &mut RngStream) -> AEOutcome {
        let y = self.sample_outcome(rng);
        AEOutcome::from_outcome(y, self.problem.register, self.problem.cost)
    }
}

/// Draws one phase-estimation outcome and converts it to `sin^2(pi y / M)`.
pub fn phase_estimation_sample(problem: &SubspaceAEProblem, rng: &mut RngStream) -> AEOutcome {
    OutcomeSampler::new(*problem).sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(a: f64, m: usize) -> Vec<f64> {
        pe_outcome_distribution(&SubspaceAEProblem::new(a, m).unwrap())
    }

    #[test]
    fn zero_amplitude_is_exact() {
        for m in [2, 8, 64] {
            let p = dist(0.0, m);
            assert_eq!(p[0], 1.0);
            assert!(p[1..].iter().all(|&q| q.abs() < 1e-15));
        }
    }

    #[test]
    fn half_amplitude_on_grid() {
        let p = dist(0.5, 8);
        for (y, q) in p.iter().enumerate() {
            let expected = if y == 2 || y == 6 { 0.5 } else { 0.0 };
            assert!((q - expected).abs() < 1e-12, "y={y} p={q}");
        }
    }

    #[test]
    fn full_amplitude_lands_on_half_register() {
        let p = dist(1.0, 4);
        assert!((p[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalized() {
        for &a in &[0.0, 1e-6, 0.1, 0.25, 0.3, 0.5, 0.77, 0.999, 1.0] {
            for m in [2usize, 4, 16, 128, 1024] {
                let total: f64 = dist(a, m).iter().sum();
                assert!((total - 1.0).abs() < 1e-10, "a={a} m={m} total={total}");
            }
        }
    }

    #[test]
    fn samples_follow_grid_property() {
        let mut rng = RngStream::new(1, 0);
        let half = SubspaceAEProblem::new(0.5, 8).unwrap();
        for _ in 0..200 {
            let out = phase_estimation_sample(&half, &mut rng);
            assert!((out.estimate - 0.5).abs() < 1e-12);
            assert_eq!(out.effective_t, 7);
            assert_eq!(out.f_queries, 4 * 7 + 2);
        }
        let zero = SubspaceAEProblem::new(0.0, 32).unwrap();
        assert!((0..200).all(|_| phase_estimation_sample(&zero, &mut rng).estimate == 0.0));
    }

    #[test]
    fn bound_frequency_at_quarter() {
        // |a~ - a| <= 2 pi sqrt(a(1-a))/t + pi^2/t^2 with probability >= 8/pi^2.
        let problem = SubspaceAEProblem::new(0.25, 64).unwrap();
        let sampler = OutcomeSampler::new(problem);
        let t = 63.0;
        let bound = 2.0 * PI * libm::sqrt(0.25 * 0.75) / t + PI * PI / (t * t);
        let mut rng = RngStream::new(2, 0);
        let hits = (0..10_000)
            .filter(|_| (sampler.sample(&mut rng).estimate - 0.25).abs() <= bound)
            .count();
        assert!(hits as f64 / 1e4 >= 8.0 / (PI * PI) - 0.02);
    }

    #[test]
    fn empirical_frequencies_match_law() {
        let problem = SubspaceAEProblem::new(0.3, 16).unwrap();
        let sampler = OutcomeSampler::new(problem);
        let law = pe_outcome_distribution(&problem);
        let mut counts = [0usize; 16];
        let mut rng = RngStream::new(3, 0);
        let trials = 200_000;
        for _ in 0..trials {
            counts[sampler.sample_outcome(&mut rng)] += 1;
        }
        for (y, &c) in counts.iter().enumerate() {
            let freq = c as f64 / trials as f64;
            let sd = libm::sqrt(law[y] * (1.0 - law[y]) / trials as f64);
            assert!((freq - law[y]).abs() <= 5.0 * sd + 1e-9, "y={y}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SubspaceAEProblem::new(1.2, 8).is_err());
        assert!(SubspaceAEProblem::new(0.5, 6).is_err());
        assert!(SubspaceAEProblem::new(0.5, 1).is_err());
    }
}
