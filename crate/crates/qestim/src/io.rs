//! JSON instance files.
//!
//! ```json
//! {"kind":"real","ell":2,"values":[0.0,0.5]}
//! {"kind":"distance","n":2,"rows":[[0,1],[1,0]]}
//! ```
//!
//! `ell` is optional; without it the values are taken at full precision.

use std::fs;
use std::path::Path;

use qestim_core::instances::Instance;
use qestim_core::oracle::{DistanceOracle, Precision, RealOracle};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum InstanceFile {
    Real {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ell: Option<u32>,
        values: Vec<f64>,
    },
    Distance {
        n: usize,
        rows: Vec<Vec<f64>>,
    },
}

/// Parses and validates an instance. The returned oracle has a zeroed
/// counter.
pub fn parse_instance(text: &str) -> Result<Instance> {
    match serde_json::from_str(text)? {
        InstanceFile::Real { ell, values } => {
            let precision = ell.map_or(Precision::Arbitrary, Precision::Bits);
            Ok(Instance::Real(RealOracle::new(values, precision)?))
        }
        InstanceFile::Distance { n, rows } => {
            if n == 0 || !n.is_power_of_two() {
                return Err(HarnessError::validation(
                    "n",
                    format!("{n} is not a power of two"),
                ));
            }
            if rows.len() != n {
                return Err(HarnessError::validation(
                    "rows",
                    format!("expected {n} rows, found {}", rows.len()),
                ));
            }
            Ok(Instance::Distance(DistanceOracle::new(rows)?))
        }
    }
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_instance(&text)
}

pub fn instance_to_json(instance: &Instance) -> Result<String> {
    let file = match instance {
        Instance::Real(oracle) => InstanceFile::Real {
            ell: oracle.ell(),
            values: oracle.values().to_vec(),
        },
        Instance::Distance(dist) => InstanceFile::Distance {
            n: dist.len(),
            rows: dist.rows().map(<[f64]>::to_vec).collect(),
        },
    };
    Ok(serde_json::to_string(&file)?)
}

pub fn save_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = instance_to_json(instance)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}
