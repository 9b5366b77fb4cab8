//! Gradient variance against register size for shallow random circuits.

use gsprep::variational::barren::{gradient_variance, log2_slope, VarianceRow};
use serde::Serialize;

use crate::config::BpVarianceConfig;
use crate::error::CliResult;
use crate::output::{map_indexed, OutDir};

#[derive(Clone, Debug, Serialize)]
pub struct VarianceReport {
    pub rows: Vec<VarianceRow>,
    /// Least-squares slope of `log2(variance)` per qubit.
    pub slope: f64,
}

pub fn run_variance(cfg: &BpVarianceConfig, jobs: usize) -> CliResult<VarianceReport> {
    cfg.validate()?;
    let v = &cfg.variance;
    let rows = map_indexed(v.sizes.len(), jobs, |k| Ok(gradient_variance(v.sizes[k], v.depth, v.samples, v.seed)?))?;
    let slope = log2_slope(&rows)?;
    Ok(VarianceReport { rows, slope })
}

#[derive(Serialize)]
struct TableRow {
    qubits: usize,
    samples: usize,
    mean: f64,
    variance: f64,
    log2_variance: f64,
    /// Halving per qubit from the first size.
    exponential_reference: f64,
    /// Decay as `1 / n` from the first size.
    polynomial_reference: f64,
}

#[derive(Serialize)]
struct FitFile<'a> {
    config: &'a BpVarianceConfig,
    slope: f64,
    exponential_slope: f64,
}

pub fn write_variance(cfg: &BpVarianceConfig, report: &VarianceReport, out: &OutDir) -> CliResult<()> {
    let first = &report.rows[0];
    let rows: Vec<TableRow> = report
        .rows
        .iter()
        .map(|r| TableRow {
            qubits: r.qubits,
            samples: r.samples,
            mean: r.mean,
            variance: r.variance,
            log2_variance: r.variance.log2(),
            exponential_reference: first.variance * 2f64.powi(first.qubits as i32 - r.qubits as i32),
            polynomial_reference: first.variance * first.qubits as f64 / r.qubits as f64,
        })
        .collect();
    out.csv(
        "bp_variance.csv",
        &[
            "qubits",
            "samples[count]",
            "mean_gradient[1]",
            "variance[1]",
            "log2_variance[bits]",
            "exponential_reference[1]",
            "polynomial_reference[1]",
        ],
        &rows,
    )?;
    out.json("bp_variance_fit.json", &FitFile { config: cfg, slope: report.slope, exponential_slope: -1.0 })
}
