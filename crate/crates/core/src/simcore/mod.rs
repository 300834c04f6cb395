//! Simulation backends for phase-estimation based amplitude estimation.
//!
//! [`subspace`] samples the outcome register from its closed-form law and is
//! the default. [`statevector`] and [`phase_estimation`] build the full
//! state and exist to cross-check the closed form at small sizes.

pub mod phase_estimation;
pub mod statevector;
pub mod subspace;

pub use phase_estimation::{statevector_ae, statevector_outcome_distribution, STATEVECTOR_LIMIT};
pub use statevector::{build_mean_operator, grover_iterate, GroverOperator, Statevector};
pub use subspace::{
    pe_outcome_distribution, phase_estimation_sample, OutcomeSampler, SubspaceAEProblem,
};

/// Oracle evaluations spent by one amplitude-estimation run.
///
/// A run with a phase register of size `M` applies the Grover operator
/// `M - 1` times. Each application costs one `A`, one `A^-1` and one
/// reflection about the good subspace; preparing the initial state costs one
/// more `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryCost {
    pub per_a: u64,
    pub per_reflection: u64,
}

impl QueryCost {
    /// `A` computes and uncomputes `F` (2 queries); the flag reflection reads
    /// only the ancilla.
    pub const MEAN_OPERATOR: QueryCost = QueryCost {
        per_a: 2,
        per_reflection: 0,
    };

    /// `A` is a Hadamard layer; the reflection evaluates the predicate once.
    pub const COUNTING: QueryCost = QueryCost {
        per_a: 0,
        per_reflection: 1,
    };

    pub fn total(&self, register: usize) -> u64 {
        let iterations = register as u64 - 1;
        iterations * (2 * self.per_a + self.per_reflection) + self.per_a
    }
}

/// Result of one amplitude-estimation run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AEOutcome {
    /// `sin^2(pi * outcome / register)`.
    pub estimate: f64,
    /// Measured phase-register value.
    pub outcome: usize,
    /// Phase register size `M`.
    pub register: usize,
    /// Grover applications actually made, `M - 1`.
    pub effective_t: u64,
    pub f_queries: u64,
}

impl AEOutcome {
    pub(crate) fn from_outcome(outcome: usize, register: usize, cost: QueryCost) -> Self {
        Self {
            estimate: estimate_for(outcome, register),
            outcome,
            register,
            effective_t: register as u64 - 1,
            f_queries: cost.total(register),
        }
    }
}

/// Maps a phase-register outcome to an amplitude estimate.
pub fn estimate_for(outcome: usize, register: usize) -> f64 {
    let s = libm::sin(core::f64::consts::PI * outcome as f64 / register as f64);
    (s * s).clamp(0.0, 1.0)
}
