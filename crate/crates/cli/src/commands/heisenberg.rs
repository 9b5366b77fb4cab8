//! Warm-start overlap statistics over random Heisenberg chains.

use gsprep::models::heisenberg::{heisenberg_random, HeisenbergSpec};
use gsprep::processor::SignFilter;
use gsprep::spectral::SpectralDecomposition;
use gsprep::state::QuantumState;
use gsprep::variational::{vqe_minimize, Objective};
use serde::Serialize;

use crate::commands::common::{build_filter, run_search, SearchReport};
use crate::config::{AnsatzSection, HeisenbergSweepConfig};
use crate::error::CliResult;
use crate::output::{map_indexed, OutDir};

/// Overlap intervals reported per depth.
pub const INTERVALS: [(f64, f64); 4] = [(0.0, 0.4), (0.4, 1.0), (0.6, 1.0), (0.8, 1.0)];
const BINS: usize = 10;

#[derive(Clone, Debug, Serialize)]
pub struct WarmStart {
    pub depth: usize,
    pub energy: f64,
    /// `tr(Pi |psi><psi|)`.
    pub overlap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceRecord {
    pub instance: usize,
    pub seed: u64,
    pub model: HeisenbergSpec,
    pub ground_energy: f64,
    pub gap: Option<f64>,
    pub degeneracy: usize,
    pub warm_starts: Vec<WarmStart>,
    /// Search from the warm start at the first listed depth.
    pub search: Option<SearchReport>,
}

pub fn instance_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add(index as u64)
}

pub fn run_instance(cfg: &HeisenbergSweepConfig, filter: Option<&SignFilter>, index: usize) -> CliResult<InstanceRecord> {
    let seed = instance_seed(cfg.sweep.seed, index);
    let (model, h) = heisenberg_random(cfg.model.qubits, seed, cfg.model.boundary, cfg.model.coupling_draw)?;
    let exact = SpectralDecomposition::diagonalize(&h)?;
    let opt = cfg.optimizer.with_seed(seed);
    let mut warm_starts = Vec::with_capacity(cfg.sweep.depths.len());
    let mut first_state = None;
    for &depth in &cfg.sweep.depths {
        let spec = AnsatzSection { depth, ..cfg.ansatz.clone() }.spec(cfg.model.qubits);
        let out = vqe_minimize(&Objective::Energy(h.clone()), &spec, &opt)?;
        let state = QuantumState::Pure(out.state);
        let overlap = exact.ground_weight(&state)?;
        warm_starts.push(WarmStart { depth, energy: out.value, overlap });
        first_state.get_or_insert(state);
    }
    let search = match (&cfg.search, filter, first_state) {
        (Some(s), Some(filter), Some(state)) if warm_starts[0].overlap >= cfg.sweep.min_overlap => {
            let target = s.target(exact.gap())?;
            Some(run_search(Some(&h), &exact, h.one_norm(), &state, s, filter, target, seed)?)
        }
        _ => None,
    };
    Ok(InstanceRecord {
        instance: index,
        seed,
        model,
        ground_energy: exact.ground_energy(),
        gap: exact.gap(),
        degeneracy: exact.ground_degeneracy(),
        warm_starts,
        search,
    })
}

pub fn run_sweep(cfg: &HeisenbergSweepConfig, jobs: usize) -> CliResult<Vec<InstanceRecord>> {
    cfg.validate()?;
    let filter = cfg.search.as_ref().map(build_filter).transpose()?;
    map_indexed(cfg.sweep.instances, jobs, |i| run_instance(cfg, filter.as_ref(), i))
}

#[derive(Serialize)]
struct SummaryRow {
    instance: usize,
    seed: u64,
    depth: usize,
    ground_energy: f64,
    gap: Option<f64>,
    vqe_energy: f64,
    overlap: f64,
    search_energy: Option<f64>,
    search_energy_error: Option<f64>,
    search_fidelity: Option<f64>,
    search_repeats: Option<usize>,
}

#[derive(Serialize)]
struct HistogramRow {
    depth: usize,
    bin_lo: f64,
    bin_hi: f64,
    count: usize,
    fraction: f64,
}

#[derive(Serialize)]
struct IntervalRow {
    depth: usize,
    lo: f64,
    hi: f64,
    fraction: f64,
}

/// Fraction of overlaps in `(lo, hi]`, with the lowest interval closed at 0.
pub fn interval_fraction(overlaps: &[f64], lo: f64, hi: f64) -> f64 {
    let hits = overlaps.iter().filter(|&&o| (o > lo || (lo == 0.0 && o >= 0.0)) && o <= hi).count();
    hits as f64 / overlaps.len() as f64
}

#[derive(Serialize)]
struct InstanceFile<'a> {
    config: &'a HeisenbergSweepConfig,
    record: &'a InstanceRecord,
}

pub fn write_sweep(cfg: &HeisenbergSweepConfig, records: &[InstanceRecord], out: &OutDir) -> CliResult<()> {
    let mut rows = Vec::new();
    for r in records {
        for (k, w) in r.warm_starts.iter().enumerate() {
            let s = if k == 0 { r.search.as_ref() } else { None };
            rows.push(SummaryRow {
                instance: r.instance,
                seed: r.seed,
                depth: w.depth,
                ground_energy: r.ground_energy,
                gap: r.gap,
                vqe_energy: w.energy,
                overlap: w.overlap,
                search_energy: s.map(|s| s.energy_estimate),
                search_energy_error: s.map(|s| s.energy_error),
                search_fidelity: s.map(|s| s.fidelity),
                search_repeats: s.map(|s| s.repeats),
            });
        }
    }
    out.csv(
        "heisenberg_summary.csv",
        &[
            "instance",
            "seed",
            "depth",
            "ground_energy[H]",
            "gap[H]",
            "vqe_energy[H]",
            "overlap[prob]",
            "search_energy[H]",
            "search_energy_error[H]",
            "search_fidelity[prob]",
            "search_repeats[count]",
        ],
        &rows,
    )?;
    let mut hist = Vec::new();
    let mut intervals = Vec::new();
    for (k, &depth) in cfg.sweep.depths.iter().enumerate() {
        let overlaps: Vec<f64> = records.iter().map(|r| r.warm_starts[k].overlap).collect();
        for b in 0..BINS {
            let lo = b as f64 / BINS as f64;
            let hi = (b + 1) as f64 / BINS as f64;
            let count = overlaps
                .iter()
                .filter(|&&o| ((o * BINS as f64).floor() as usize).min(BINS - 1) == b)
                .count();
            hist.push(HistogramRow { depth, bin_lo: lo, bin_hi: hi, count, fraction: count as f64 / overlaps.len() as f64 });
        }
        for (lo, hi) in INTERVALS {
            intervals.push(IntervalRow { depth, lo, hi, fraction: interval_fraction(&overlaps, lo, hi) });
        }
    }
    out.csv(
        "heisenberg_histogram.csv",
        &["depth", "bin_lo[prob]", "bin_hi[prob]", "count[instances]", "fraction[1]"],
        &hist,
    )?;
    out.csv("heisenberg_intervals.csv", &["depth", "lo[prob]", "hi[prob]", "fraction[1]"], &intervals)?;
    for r in records {
        out.json(&format!("instances/instance_{:04}.json", r.instance), &InstanceFile { config: cfg, record: r })?;
    }
    Ok(())
}
