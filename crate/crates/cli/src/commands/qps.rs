//! Single warm-started ground-state preparation with a full trace.

use std::path::Path;

use gsprep::models::fermion::jordan_wigner_hermitian;
use gsprep::models::heisenberg::heisenberg_random;
use gsprep::models::opfile::{load_operator_file, OperatorFile};
use gsprep::pauli::PauliSum;
use gsprep::spectral::SpectralDecomposition;
use gsprep::state::QuantumState;
use gsprep::variational::{vqe_minimize, Objective};
use serde::Serialize;

use crate::commands::common::{build_filter, run_search, SearchReport};
use crate::config::{QpsPrepareConfig, Source};
use crate::error::{config_error, CliResult};
use crate::output::OutDir;

#[derive(Clone, Debug, Serialize)]
pub struct QpsReport {
    pub qubits: usize,
    pub terms: usize,
    pub norm_bound: f64,
    pub ground_energy: f64,
    pub gap: Option<f64>,
    pub vqe_energy: f64,
    pub warm_overlap: f64,
    pub search: SearchReport,
}

/// Resolves the configured Hamiltonian; relative paths are taken from `base`.
pub fn load_hamiltonian(cfg: &QpsPrepareConfig, base: &Path) -> CliResult<PauliSum> {
    let h = &cfg.hamiltonian;
    match h.source {
        Source::Heisenberg => {
            let qubits = h.qubits.ok_or_else(|| config_error("[hamiltonian] qubits is required"))?;
            let (_, op) = heisenberg_random(
                qubits,
                h.seed.unwrap_or(cfg.seed),
                h.boundary.unwrap_or_default(),
                h.coupling_draw.unwrap_or_default(),
            )?;
            Ok(op)
        }
        Source::File => {
            let path = h.path.as_ref().ok_or_else(|| config_error("[hamiltonian] path is required"))?;
            let full = base.join(path);
            let parsed = load_operator_file(&full).map_err(|e| config_error(format!("{}: {e}", full.display())))?;
            match parsed {
                OperatorFile::Qubit(op) => Ok(op),
                OperatorFile::Fermion(f) => Ok(jordan_wigner_hermitian(&f)?),
            }
        }
    }
}

pub fn run_qps(cfg: &QpsPrepareConfig, h: &PauliSum) -> CliResult<QpsReport> {
    cfg.validate()?;
    let n = h.num_qubits();
    if n > gsprep::spectral::DIAGONALIZE_CAP {
        return Err(config_error(format!("Hamiltonian on {n} qubits exceeds the diagonalization cap")));
    }
    cfg.ansatz.validate(n)?;
    let exact = SpectralDecomposition::diagonalize(h)?;
    let target = cfg.search.target(exact.gap())?;
    let filter = build_filter(&cfg.search)?;
    let vqe = vqe_minimize(&Objective::Energy(h.clone()), &cfg.ansatz.spec(n), &cfg.optimizer.with_seed(cfg.seed))?;
    let state = QuantumState::Pure(vqe.state);
    let warm_overlap = exact.ground_weight(&state)?;
    let search = run_search(Some(h), &exact, h.one_norm(), &state, &cfg.search, &filter, target, cfg.seed)?;
    Ok(QpsReport {
        qubits: n,
        terms: h.len(),
        norm_bound: h.one_norm(),
        ground_energy: exact.ground_energy(),
        gap: exact.gap(),
        vqe_energy: vqe.value,
        warm_overlap,
        search,
    })
}

#[derive(Serialize)]
struct ResultRow<'a> {
    mode: &'a str,
    qubits: usize,
    ground_energy: f64,
    gap: Option<f64>,
    target_accuracy: f64,
    vqe_energy: f64,
    warm_overlap: f64,
    repeats: usize,
    total_rounds: usize,
    energy_estimate: f64,
    energy_error: f64,
    fidelity: f64,
}

#[derive(Serialize)]
struct TraceFile<'a> {
    config: &'a QpsPrepareConfig,
    result: &'a QpsReport,
}

pub fn write_qps(cfg: &QpsPrepareConfig, report: &QpsReport, out: &OutDir) -> CliResult<()> {
    let s = &report.search;
    let mode = match s.mode {
        gsprep::search::InputMode::Evolution => "evolution",
        gsprep::search::InputMode::BlockEncoding => "block-encoding",
    };
    let row = ResultRow {
        mode,
        qubits: report.qubits,
        ground_energy: report.ground_energy,
        gap: report.gap,
        target_accuracy: s.target_accuracy,
        vqe_energy: report.vqe_energy,
        warm_overlap: report.warm_overlap,
        repeats: s.repeats,
        total_rounds: s.total_rounds,
        energy_estimate: s.energy_estimate,
        energy_error: s.energy_error,
        fidelity: s.fidelity,
    };
    out.csv(
        "qps_result.csv",
        &[
            "mode",
            "qubits",
            "ground_energy[H]",
            "gap[H]",
            "target_accuracy[H]",
            "vqe_energy[H]",
            "warm_overlap[prob]",
            "repeats[count]",
            "total_rounds[count]",
            "energy_estimate[H]",
            "energy_error[H]",
            "fidelity[prob]",
        ],
        &[row],
    )?;
    out.json("qps_trace.json", &TraceFile { config: cfg, result: report })
}
