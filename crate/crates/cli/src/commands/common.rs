//! Warm-start plus phase-search pipeline shared by the preparation commands.

use gsprep::block_encoding::build_block_encoding;
use gsprep::pauli::PauliSum;
use gsprep::processor::SignFilter;
use gsprep::search::{prepare_ground_state, repeats_for_overlap, InputMode, PhaseOracle, SearchTrace};
use gsprep::sign::SignParams;
use gsprep::spectral::SpectralDecomposition;
use gsprep::state::QuantumState;
use serde::Serialize;

use crate::config::SearchSection;
use crate::error::{CliError, CliResult};

/// Warm starts with less ground weight than this are rejected.
pub const MIN_GROUND_WEIGHT: f64 = 1e-8;

pub fn build_filter(search: &SearchSection) -> CliResult<SignFilter> {
    Ok(SignFilter::build(SignParams { kappa: search.kappa, epsilon: search.epsilon })?)
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub mode: InputMode,
    pub target_accuracy: f64,
    /// `tr(rho Pi)` of the input state.
    pub input_ground_weight: f64,
    pub repeats: usize,
    pub energy_estimate: f64,
    pub energy_error: f64,
    /// `tr(Pi rho_out)` of the selected output.
    pub fidelity: f64,
    pub best_repeat: usize,
    pub total_rounds: usize,
    pub traces: Vec<SearchTrace>,
    #[serde(skip)]
    pub state: Option<QuantumState>,
}

/// Runs the search on `state` against the exact decomposition `exact` of the
/// operator the oracle encodes.
pub fn run_search(
    h: Option<&PauliSum>,
    exact: &SpectralDecomposition,
    norm_bound: f64,
    state: &QuantumState,
    search: &SearchSection,
    filter: &SignFilter,
    target: f64,
    seed: u64,
) -> CliResult<SearchReport> {
    let oracle = match search.mode {
        InputMode::Evolution => PhaseOracle::evolution(exact, norm_bound),
        InputMode::BlockEncoding => {
            let h = h.ok_or_else(|| CliError::Runtime("block encoding needs a Pauli decomposition".into()))?;
            PhaseOracle::block_encoded(&build_block_encoding(h)?)?
        }
    };
    let weight = exact.ground_weight(state)?;
    if weight < MIN_GROUND_WEIGHT {
        return Err(CliError::Runtime(format!("warm start has ground weight {weight:.3e}; the search cannot succeed")));
    }
    let repeats = search.repeats.unwrap_or_else(|| repeats_for_overlap(weight.sqrt()));
    let cfg = search.to_search(target, repeats);
    let prep = prepare_ground_state(&oracle, filter, state, &cfg, seed)?;
    let out = prep.state.normalized()?;
    let fidelity = exact.ground_weight(&out)?;
    let total_rounds = prep.traces.iter().map(|t| t.rounds.len()).sum();
    Ok(SearchReport {
        mode: search.mode,
        target_accuracy: target,
        input_ground_weight: weight,
        repeats,
        energy_estimate: prep.energy,
        energy_error: (prep.energy - exact.ground_energy()).abs(),
        fidelity,
        best_repeat: prep.best_repeat,
        total_rounds,
        traces: prep.traces,
        state: Some(out),
    })
}
