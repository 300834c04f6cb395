//! Experiment harness for `qestim-core`: JSON instance files, seeded
//! parameter sweeps with CSV/JSON output, and summary statistics.

pub mod error;
pub mod experiment;
pub mod io;
pub mod summary;

pub use error::{HarnessError, Result};
pub use experiment::{run_experiment, Algorithm, ExperimentRecord, RunConfig, Variant};
pub use io::{load_instance, parse_instance, save_instance};
