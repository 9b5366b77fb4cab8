//! Charge and spin densities and chemical potentials of a Hubbard chain.

use gsprep::models::hubbard::{charge_spin_density, hubbard_1d, HubbardSpec};
use gsprep::models::occupation::occupation_project;
use gsprep::spectral::SpectralDecomposition;
use gsprep::state::QuantumState;
use gsprep::variational::vqe::project_occupation;
use gsprep::variational::{vqe_minimize, Objective};
use serde::Serialize;

use crate::commands::common::{build_filter, run_search, SearchReport};
use crate::config::{HubbardConfig, SearchSection};
use crate::error::{CliError, CliResult};
use crate::output::{map_indexed, OutDir};

#[derive(Clone, Debug, Serialize)]
pub struct DensityRow {
    /// 1-based site index.
    pub site: usize,
    pub exact_charge: f64,
    pub exact_spin: f64,
    pub vqe_charge: f64,
    pub vqe_spin: f64,
    pub qps_charge: f64,
    pub qps_spin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockReport {
    pub occupation: usize,
    pub dim: usize,
    pub exact_energy: f64,
    pub vqe_energy: f64,
    pub search: SearchReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct PotentialRow {
    pub occupation: usize,
    pub exact_mu: f64,
    pub vqe_mu: f64,
    pub qps_mu: f64,
    pub vqe_abs_error: f64,
    pub qps_abs_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HubbardReport {
    pub model: HubbardSpec,
    pub ground_energy: f64,
    pub gap: Option<f64>,
    pub vqe_energy: f64,
    pub global_search: SearchReport,
    pub densities: Vec<DensityRow>,
    pub blocks: Vec<BlockReport>,
    pub potentials: Vec<PotentialRow>,
}

fn densities(state: &QuantumState, spec: &HubbardSpec) -> CliResult<Vec<(f64, f64)>> {
    (0..spec.sites).map(|s| Ok(charge_spin_density(state, spec, s)?)).collect()
}

fn block_report(cfg: &HubbardConfig, h: &gsprep::pauli::PauliSum, filter: &gsprep::processor::SignFilter, occupation: usize) -> CliResult<BlockReport> {
    let block = occupation_project(h, occupation)?;
    let exact = SpectralDecomposition::from_hermitian(&block.matrix)?;
    let objective = Objective::FixedOccupation { h: h.clone(), occupation };
    let seed = cfg.seed.wrapping_add(occupation as u64 + 1);
    let vqe = vqe_minimize(&objective, &cfg.ansatz.spec(h.num_qubits()), &cfg.optimizer.with_seed(seed))?;
    let restricted = block.restrict(&project_occupation(&vqe.state, occupation))?;
    let norm = restricted.norm();
    if norm == 0.0 {
        return Err(CliError::Runtime(format!("warm start has no weight at occupation {occupation}")));
    }
    let state = QuantumState::Pure(restricted.unscale(norm));
    let search_cfg = SearchSection { mode: gsprep::search::InputMode::Evolution, ..cfg.search.clone() };
    let search = run_search(None, &exact, h.one_norm(), &state, &search_cfg, filter, cfg.block_accuracy, seed)?;
    Ok(BlockReport { occupation, dim: block.dim(), exact_energy: exact.ground_energy(), vqe_energy: vqe.value, search })
}

pub fn run_hubbard(cfg: &HubbardConfig, jobs: usize) -> CliResult<HubbardReport> {
    cfg.validate()?;
    let spec = cfg.hubbard.spec();
    let h = hubbard_1d(&spec)?;
    let n = h.num_qubits();
    let exact = SpectralDecomposition::diagonalize(&h)?;
    let filter = build_filter(&cfg.search)?;

    let vqe = vqe_minimize(&Objective::Energy(h.clone()), &cfg.ansatz.spec(n), &cfg.optimizer.with_seed(cfg.seed))?;
    let warm = QuantumState::Pure(vqe.state.clone());
    let target = cfg.search.target(exact.gap())?;
    let global_search = run_search(Some(&h), &exact, h.one_norm(), &warm, &cfg.search, &filter, target, cfg.seed)?;
    let prepared = global_search.state.clone().expect("search returns its state");
    let ground = QuantumState::Pure(exact.ground_vector());
    let d_exact = densities(&ground, &spec)?;
    let d_vqe = densities(&warm, &spec)?;
    let d_qps = densities(&prepared, &spec)?;
    let rows = (0..spec.sites)
        .map(|s| DensityRow {
            site: s + 1,
            exact_charge: d_exact[s].0,
            exact_spin: d_exact[s].1,
            vqe_charge: d_vqe[s].0,
            vqe_spin: d_vqe[s].1,
            qps_charge: d_qps[s].0,
            qps_spin: d_qps[s].1,
        })
        .collect();

    let blocks = map_indexed(n + 1, jobs, |k| block_report(cfg, &h, &filter, k))?;
    let potentials = (1..=n)
        .map(|k| {
            let (a, b) = (&blocks[k - 1], &blocks[k]);
            let exact_mu = b.exact_energy - a.exact_energy;
            let vqe_mu = b.vqe_energy - a.vqe_energy;
            let qps_mu = b.search.energy_estimate - a.search.energy_estimate;
            PotentialRow {
                occupation: k,
                exact_mu,
                vqe_mu,
                qps_mu,
                vqe_abs_error: (vqe_mu - exact_mu).abs(),
                qps_abs_error: (qps_mu - exact_mu).abs(),
            }
        })
        .collect();
    Ok(HubbardReport {
        model: spec,
        ground_energy: exact.ground_energy(),
        gap: exact.gap(),
        vqe_energy: vqe.value,
        global_search,
        densities: rows,
        blocks,
        potentials,
    })
}

#[derive(Serialize)]
struct TraceFile<'a> {
    config: &'a HubbardConfig,
    result: &'a HubbardReport,
}

pub fn write_hubbard(cfg: &HubbardConfig, report: &HubbardReport, out: &OutDir) -> CliResult<()> {
    out.csv(
        "hubbard_densities.csv",
        &[
            "site",
            "exact_charge[electrons]",
            "exact_spin[electrons]",
            "vqe_charge[electrons]",
            "vqe_spin[electrons]",
            "qps_charge[electrons]",
            "qps_spin[electrons]",
        ],
        &report.densities,
    )?;
    out.csv(
        "hubbard_chemical_potential.csv",
        &["n_occ", "exact_mu[H]", "vqe_mu[H]", "qps_mu[H]", "vqe_abs_error[H]", "qps_abs_error[H]"],
        &report.potentials,
    )?;
    out.json("hubbard_trace.json", &TraceFile { config: cfg, result: report })
}
