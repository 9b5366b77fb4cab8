//! Product-ansatz warm starts on random max-cut QUBO instances.

use gsprep::models::qubo::QuboSpec;
use gsprep::variational::qubo::qubo_warmstart;
use serde::Serialize;

use crate::config::QuboConfig;
use crate::error::CliResult;
use crate::output::{map_indexed, OutDir};

#[derive(Clone, Debug, Serialize)]
pub struct QuboRow {
    pub qubits: usize,
    pub instance: usize,
    pub seed: u64,
    pub edges: usize,
    pub ground_energy: f64,
    pub ground_states: usize,
    pub cost: f64,
    pub overlap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuboSummaryRow {
    pub qubits: usize,
    pub instances: usize,
    pub median_overlap: f64,
    pub mean_overlap: f64,
    pub fraction_above_half: f64,
}

pub fn graph_seed(base: u64, qubits: usize, instance: usize) -> u64 {
    base.wrapping_add((qubits as u64) << 32).wrapping_add(instance as u64)
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

pub fn run_qubo(cfg: &QuboConfig, jobs: usize) -> CliResult<Vec<QuboRow>> {
    cfg.validate()?;
    let q = &cfg.qubo;
    let per_size = q.instances;
    map_indexed(q.sizes.len() * per_size, jobs, |k| {
        let (qubits, instance) = (q.sizes[k / per_size], k % per_size);
        let seed = graph_seed(q.seed, qubits, instance);
        let graph = QuboSpec::random_graph(qubits, q.edge_probability, seed)?;
        let warm = qubo_warmstart(&graph, &cfg.optimizer.with_seed(seed), q.restarts)?;
        Ok(QuboRow {
            qubits,
            instance,
            seed,
            edges: graph.edges().count(),
            ground_energy: warm.ground_energy,
            ground_states: warm.ground_states.len(),
            cost: warm.cost,
            overlap: warm.overlap,
        })
    })
}

pub fn summarize(cfg: &QuboConfig, rows: &[QuboRow]) -> Vec<QuboSummaryRow> {
    cfg.qubo
        .sizes
        .iter()
        .map(|&n| {
            let overlaps: Vec<f64> = rows.iter().filter(|r| r.qubits == n).map(|r| r.overlap).collect();
            QuboSummaryRow {
                qubits: n,
                instances: overlaps.len(),
                median_overlap: median(&overlaps),
                mean_overlap: overlaps.iter().sum::<f64>() / overlaps.len() as f64,
                fraction_above_half: overlaps.iter().filter(|&&o| o > 0.5).count() as f64 / overlaps.len() as f64,
            }
        })
        .collect()
}

#[derive(Serialize)]
struct SummaryFile<'a> {
    config: &'a QuboConfig,
    summary: &'a [QuboSummaryRow],
}

pub fn write_qubo(cfg: &QuboConfig, rows: &[QuboRow], out: &OutDir) -> CliResult<()> {
    out.csv(
        "qubo_overlaps.csv",
        &[
            "qubits",
            "instance",
            "seed",
            "edges[count]",
            "ground_energy[H]",
            "ground_states[count]",
            "cost[H]",
            "overlap[prob]",
        ],
        rows,
    )?;
    let summary = summarize(cfg, rows);
    out.csv(
        "qubo_summary.csv",
        &["qubits", "instances[count]", "median_overlap[prob]", "mean_overlap[prob]", "fraction_above_half[1]"],
        &summary,
    )?;
    out.json("qubo_summary.json", &SummaryFile { config: cfg, summary: &summary })
}
