//! Query-model simulation of amplitude-estimation algorithms for estimating
//! the mean of a black-box function and the median (medoid) of a point set
//! under a black-box distance.
//!
//! Every quantum subroutine is simulated exactly in double precision. The
//! default backend samples phase-estimation outcomes from their closed-form
//! law on the two-dimensional invariant subspace of the Grover operator, so
//! simulation cost does not depend on the domain size. A full statevector
//! backend is kept for cross-validation at small sizes.
//!
//! Query counts are contractual: each algorithm charges its oracle the
//! number of evaluations the corresponding quantum circuit would make, not
//! the number of table reads the simulator happens to perform.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod baseline;
pub mod error;
pub mod estimators;
pub mod instances;
pub mod oracle;
pub mod primitives;
pub mod rng;
pub mod simcore;

pub use error::{Error, Result};
pub use rng::RngStream;
