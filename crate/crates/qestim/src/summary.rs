//! Statistics over experiment records.

use std::fs;
use std::path::Path;

use clap::ValueEnum;

use crate::error::{HarnessError, Result};
use crate::experiment::{Algorithm, ExperimentRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// Fraction of trials with `abs_error <= bound`, per parameter point.
    BoundFreq,
    /// Least-squares slope of ln(median abs_error) against ln(t).
    Slope,
    /// Fraction of trials whose estimate equals the truth exactly.
    SuccessRate,
}

/// Records sharing one parameter point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSummary {
    pub algorithm: Algorithm,
    pub t: Option<u64>,
    pub register: Option<usize>,
    pub ell: Option<u32>,
    pub n: usize,
    pub trials: usize,
    pub bound_freq: f64,
    pub success_rate: f64,
    pub median_abs_error: f64,
}

/// Reads records written as CSV or JSON. JSON is recognised by a leading
/// `[`.
pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<ExperimentRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_records(&text)
}

pub fn parse_records(text: &str) -> Result<Vec<ExperimentRecord>> {
    if text.trim_start().starts_with('[') {
        return Ok(serde_json::from_str(text)?);
    }
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<_, csv::Error>>()
        .map_err(HarnessError::from)
}

fn lower_median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    values[(values.len() - 1) / 2]
}

/// One summary per parameter point, in order of first appearance.
pub fn summarize(records: &[ExperimentRecord]) -> Vec<PointSummary> {
    let mut groups: Vec<(PointSummary, Vec<f64>)> = Vec::new();
    for r in records {
        let key = (r.algorithm, r.t, r.register, r.ell, r.n);
        let slot = groups
            .iter()
            .position(|(g, _)| (g.algorithm, g.t, g.register, g.ell, g.n) == key);
        let i = slot.unwrap_or_else(|| {
            groups.push((
                PointSummary {
                    algorithm: r.algorithm,
                    t: r.t,
                    register: r.register,
                    ell: r.ell,
                    n: r.n,
                    trials: 0,
                    bound_freq: 0.0,
                    success_rate: 0.0,
                    median_abs_error: 0.0,
                },
                Vec::new(),
            ));
            groups.len() - 1
        });
        let (g, errors) = &mut groups[i];
        g.trials += 1;
        g.bound_freq += f64::from(u8::from(r.within_bound));
        g.success_rate += f64::from(u8::from(r.estimate == r.truth));
        errors.push(r.abs_error);
    }
    groups
        .into_iter()
        .map(|(mut g, mut errors)| {
            g.bound_freq /= g.trials as f64;
            g.success_rate /= g.trials as f64;
            g.median_abs_error = lower_median(&mut errors);
            g
        })
        .collect()
}

/// Ordinary least-squares slope of `y` on `x`.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Log-log slope of the median absolute error against the effective `t`.
pub fn error_slope(summaries: &[PointSummary]) -> Result<f64> {
    let mut points = Vec::new();
    for s in summaries {
        let Some(t) = s.t else {
            return Err(HarnessError::validation(
                "t",
                "slope needs records with an iteration count",
            ));
        };
        if s.median_abs_error <= 0.0 {
            return Err(HarnessError::validation(
                "abs_error",
                format!("median error at t={t} is zero; the slope is undefined"),
            ));
        }
        points.push(((t as f64).ln(), s.median_abs_error.ln()));
    }
    fit_slope(&points).ok_or_else(|| {
        HarnessError::validation("t", "slope needs at least two distinct values of t")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let points: Vec<(f64, f64)> = [1.0f64, 2.0, 4.0, 8.0]
            .iter()
            .map(|&x| (x.ln(), (3.0 / x).ln()))
            .collect();
        assert!((fit_slope(&points).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(fit_slope(&points[..1]), None);
    }

    #[test]
    fn lower_median_of_even_count() {
        assert_eq!(lower_median(&mut [4.0, 1.0, 3.0, 2.0]), 2.0);
    }
}
