//! Sign approximation and its phase-factor realization on a grid.

use std::f64::consts::PI;

use gsprep::processor::SignFilter;
use gsprep::qsp::reconstruction_error;
use gsprep::sign::{sign_deviation, SignParams};
use serde::Serialize;

use crate::config::SignpolyConfig;
use crate::error::CliResult;
use crate::output::OutDir;

/// Points used for the dense deviation scan of the constrained region.
pub const DENSE_POINTS: usize = 20_000;

#[derive(Clone, Debug, Serialize)]
pub struct SignpolyRow {
    pub x: f64,
    pub f: f64,
    pub reconstruction: f64,
    /// `sign(sin x)` outside the excluded bands, empty inside them.
    pub target: Option<f64>,
    pub deviation: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SignpolySummary {
    pub order: usize,
    pub steepness: f64,
    pub truncation_tail: f64,
    pub scale: f64,
    pub one_norm: f64,
    pub max_deviation: f64,
    pub sup_abs: f64,
    pub factor_residual: f64,
    pub reconstruction_error: f64,
    pub omega: f64,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
}

pub fn run_signpoly(cfg: &SignpolyConfig) -> CliResult<(SignpolySummary, Vec<SignpolyRow>)> {
    cfg.validate()?;
    let s = &cfg.sign;
    let filter = SignFilter::build(SignParams { kappa: s.kappa, epsilon: s.epsilon })?;
    let poly = filter.poly();
    let order = filter.order();
    let rows = (0..s.grid_points)
        .map(|m| {
            let x = -PI + 2.0 * PI * m as f64 / (s.grid_points - 1) as f64;
            let f = poly.eval(x);
            let ax = x.abs();
            let good = ax > s.kappa && ax < PI - s.kappa;
            let target = good.then(|| x.signum());
            SignpolyRow {
                x,
                f,
                reconstruction: filter.factors.reconstruct(x),
                target,
                deviation: target.map(|t| (f - t).abs()),
            }
        })
        .collect();
    let summary = SignpolySummary {
        order,
        steepness: filter.approx.steepness,
        truncation_tail: filter.approx.truncation_tail,
        scale: filter.approx.scale,
        one_norm: poly.one_norm(),
        max_deviation: sign_deviation(&filter.approx, DENSE_POINTS),
        sup_abs: poly.sup_abs(16 * order.max(64)),
        factor_residual: filter.factors.residual,
        reconstruction_error: reconstruction_error(&filter.factors, poly, 4 * order.max(16)),
        omega: filter.factors.omega,
        theta: filter.factors.theta.clone(),
        phi: filter.factors.phi.clone(),
    };
    Ok((summary, rows))
}

#[derive(Serialize)]
struct SummaryFile<'a> {
    config: &'a SignpolyConfig,
    summary: &'a SignpolySummary,
}

pub fn write_signpoly(cfg: &SignpolyConfig, summary: &SignpolySummary, rows: &[SignpolyRow], out: &OutDir) -> CliResult<()> {
    out.csv("signpoly.csv", &["x[rad]", "f[1]", "reconstruction[1]", "target[1]", "deviation[1]"], rows)?;
    out.json("signpoly.json", &SummaryFile { config: cfg, summary })
}
