//! Phase search: binary search over eigenphase regions, refinement through
//! powers of the unitary, and repetition to pick out the ground state.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::block_encoding::BlockEncoding;
use crate::error::{Error, Result};
use crate::linalg::wrap_phase;
use crate::processor::{measurement_maps, run_round, Backend, SignFilter};
use crate::sign::TrigPolynomial;
use crate::spectral::{PhaseMap, SpectralDecomposition, UnitarySpectrum};
use crate::state::QuantumState;

/// Margin kept between the largest evolution phase and pi.
pub const PHASE_GUARD: f64 = 0.1;
/// Deepest trajectory tree that will be enumerated.
pub const MAX_TREE_DEPTH: usize = 12;
const MAX_LEVELS: usize = 64;

/// An arc `(lo, hi)` of eigenphases; membership is taken modulo 2 pi.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Region {
    pub lo: f64,
    pub hi: f64,
}

impl Region {
    pub const FULL: Region = Region { lo: -PI, hi: PI };

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, phase: f64) -> bool {
        if self.width() >= 2.0 * PI {
            return true;
        }
        (phase - self.lo).rem_euclid(2.0 * PI) <= self.width()
    }

    /// Region after reading `bit` with the round shifted to this region's midpoint.
    pub fn update(&self, bit: u8, kappa: f64) -> Region {
        let mid = self.mid();
        if self.width() > 2.0 * PI - 2.0 * kappa {
            if bit == 0 {
                Region { lo: mid - kappa, hi: self.hi + kappa }
            } else {
                Region { lo: self.lo - kappa, hi: mid + kappa }
            }
        } else if bit == 0 {
            Region { lo: mid - kappa, hi: self.hi }
        } else {
            Region { lo: self.lo, hi: mid + kappa }
        }
    }
}

/// Width after `rounds` updates starting from the full circle, whatever the outcomes.
pub fn rough_width(kappa: f64, rounds: usize) -> f64 {
    (0..rounds).fold(2.0 * PI, |w, _| if w > 2.0 * PI - 2.0 * kappa { w / 2.0 + 2.0 * kappa } else { w / 2.0 + kappa })
}

/// Smallest round count that leaves at most `kappa` of excess width and makes
/// the refinement contraction at least 2.
pub fn default_rough_rounds(kappa: f64) -> usize {
    let mut q = ((PI / kappa).log2().ceil() as usize).max(1);
    while kappa + PI / f64::powi(2.0, q as i32) >= 0.5 && q < 60 {
        q += 1;
    }
    q
}

/// `floor(1 / kbar)` with `kbar` the half-width left after `rounds` rounds.
pub fn contraction_factor(kappa: f64, rounds: usize) -> u64 {
    (1.0 / (0.5 * rough_width(kappa, rounds))).floor() as u64
}

/// Refinement levels needed so that `K^{-j} <= target`.
pub fn levels_needed(contraction: u64, target: f64) -> usize {
    let k = contraction as f64;
    let mut j = 1usize;
    while k.powi(j as i32).recip() > target && j < MAX_LEVELS {
        j += 1;
    }
    j
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputMode {
    #[default]
    Evolution,
    BlockEncoding,
}

/// The unitary whose eigenphases are searched, with the map back to energies.
#[derive(Clone, Debug)]
pub struct PhaseOracle {
    pub mode: InputMode,
    pub unitary: UnitarySpectrum,
    /// Evolution time for `e^{itH}`, or the block-encoding normalization.
    pub scale: f64,
    pub ancillas: usize,
}

impl PhaseOracle {
    /// `e^{itH}`, with `t = 1` unless `norm_bound >= pi`, in which case
    /// `t = (pi - 0.1) / norm_bound` keeps all phases off the branch cut.
    pub fn evolution(h: &SpectralDecomposition, norm_bound: f64) -> Self {
        let t = if norm_bound >= PI { (PI - PHASE_GUARD) / norm_bound } else { 1.0 };
        Self::evolution_with_time(h, t)
    }

    pub fn evolution_with_time(h: &SpectralDecomposition, t: f64) -> Self {
        PhaseOracle { mode: InputMode::Evolution, unitary: UnitarySpectrum::evolution(h, t), scale: t, ancillas: 0 }
    }

    pub fn block_encoded(be: &BlockEncoding) -> Result<Self> {
        Ok(PhaseOracle {
            mode: InputMode::BlockEncoding,
            unitary: be.spectrum()?,
            scale: be.alpha,
            ancillas: be.ancillas,
        })
    }

    pub fn energy(&self, phase: f64) -> f64 {
        match self.mode {
            InputMode::Evolution => phase / self.scale,
            InputMode::BlockEncoding => self.scale * phase.cos(),
        }
    }

    /// Phase accuracy that guarantees the given energy accuracy.
    pub fn phase_accuracy(&self, energy_accuracy: f64) -> f64 {
        match self.mode {
            InputMode::Evolution => energy_accuracy * self.scale,
            InputMode::BlockEncoding => energy_accuracy / self.scale,
        }
    }

    pub fn system_dim(&self) -> usize {
        self.unitary.dim() >> self.ancillas
    }

    /// Input state on the full register (ancillas in `|0...0>`).
    pub fn embed(&self, state: &QuantumState) -> Result<QuantumState> {
        if state.dim() != self.system_dim() {
            return Err(Error::Dimension { expected: self.system_dim(), got: state.dim() });
        }
        Ok(state.with_leading_zeros(self.ancillas))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchConfig {
    pub kappa: f64,
    pub epsilon: f64,
    /// Rough-search rounds per level; `None` picks [`default_rough_rounds`].
    pub rough_rounds: Option<usize>,
    /// Energy accuracy at which refinement stops.
    pub target_accuracy: f64,
    pub repeats: usize,
    pub backend: Backend,
    pub max_postselect: usize,
}

impl SearchConfig {
    pub fn new(target_accuracy: f64, repeats: usize) -> Self {
        SearchConfig {
            kappa: 0.25,
            epsilon: 1e-6,
            rough_rounds: None,
            target_accuracy,
            repeats,
            backend: Backend::Spectral,
            max_postselect: 40,
        }
    }

    pub fn rounds(&self) -> usize {
        self.rough_rounds.unwrap_or_else(|| default_rough_rounds(self.kappa))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.kappa < 0.5) {
            return Err(Error::Invalid(format!("kappa must lie in (0, 1/2), got {}", self.kappa)));
        }
        if !(self.target_accuracy > 0.0) {
            return Err(Error::Invalid("target accuracy must be positive".into()));
        }
        if self.repeats == 0 {
            return Err(Error::Invalid("at least one repeat is needed".into()));
        }
        if contraction_factor(self.kappa, self.rounds()) < 2 {
            return Err(Error::Invalid("too few rough rounds for refinement to contract".into()));
        }
        Ok(())
    }
}

/// Repeats needed for overlap `gamma` (so `gamma^2 = tr(rho Pi)`): `ceil(5 / gamma^2)`.
pub fn repeats_for_overlap(gamma: f64) -> usize {
    (5.0 / (gamma * gamma)).ceil().max(1.0) as usize
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundRecord {
    pub level: usize,
    pub region: Region,
    pub power: u64,
    pub shift: f64,
    pub outcome: u8,
    pub probability: f64,
    pub prob_zero: f64,
    pub updated: Region,
    pub wrapped: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelRecord {
    pub level: usize,
    pub region: Region,
    pub midpoint: f64,
    pub estimate: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchTrace {
    pub rough_rounds: usize,
    pub contraction: u64,
    pub rounds: Vec<RoundRecord>,
    pub levels: Vec<LevelRecord>,
    pub phase_estimate: f64,
    pub energy_estimate: f64,
    pub postselection_attempts: Option<usize>,
}

/// `rounds` binary-search rounds on `e^{-i s} U^p` given by `base`.
#[allow(clippy::too_many_arguments)]
pub fn rough_search<R: Rng + ?Sized>(
    unitary: &UnitarySpectrum,
    filter: &SignFilter,
    base: PhaseMap,
    rounds: usize,
    backend: Backend,
    state: &QuantumState,
    rng: &mut R,
    level: usize,
    trace: &mut SearchTrace,
) -> Result<(Region, QuantumState)> {
    let mut region = Region::FULL;
    let mut current = state.clone();
    for _ in 0..rounds {
        let map = base.shifted(region.mid());
        let out = run_round(unitary, filter, map, backend, &current, rng)?;
        let updated = region.update(out.bit, filter.kappa());
        trace.rounds.push(RoundRecord {
            level,
            region,
            power: map.power,
            shift: map.shift,
            outcome: out.bit,
            probability: out.probability,
            prob_zero: out.prob_zero,
            updated,
            wrapped: out.wrapped,
        });
        region = updated;
        current = out.state;
    }
    Ok((region, current))
}

/// Rough search followed by refinement levels until the phase is known to
/// `target_phase`. Returns the estimate in (-pi, pi] and the final state.
pub fn search_phase<R: Rng + ?Sized>(
    unitary: &UnitarySpectrum,
    filter: &SignFilter,
    rounds: usize,
    target_phase: f64,
    backend: Backend,
    state: &QuantumState,
    rng: &mut R,
    trace: &mut SearchTrace,
) -> Result<(f64, QuantumState)> {
    let k = contraction_factor(filter.kappa(), rounds);
    if k < 2 {
        return Err(Error::Invalid("refinement contraction below 2".into()));
    }
    trace.rough_rounds = rounds;
    trace.contraction = k;
    let levels = levels_needed(k, target_phase);
    let mut base = PhaseMap::IDENTITY;
    let mut estimate = 0.0;
    let mut scale = 1.0;
    let mut current = state.clone();
    for level in 1..=levels {
        let (region, next) = rough_search(unitary, filter, base, rounds, backend, &current, rng, level, trace)?;
        current = next;
        let mid = wrap_phase(region.mid());
        estimate += mid * scale;
        trace.levels.push(LevelRecord { level, region, midpoint: mid, estimate: wrap_phase(estimate) });
        base = base.shifted(mid).pow(k);
        scale /= k as f64;
    }
    let estimate = wrap_phase(estimate);
    trace.phase_estimate = estimate;
    Ok((estimate, current))
}

/// Smallest power that moves a phase near `phase` into `[pi/4, 3pi/4]` in magnitude.
fn separating_power(phase: f64) -> u64 {
    (1..=4096u64)
        .find(|&p| {
            let w = wrap_phase(p as f64 * phase).abs();
            (PI / 4.0..=3.0 * PI / 4.0).contains(&w)
        })
        .unwrap_or(1)
}

/// Measures whether the block-encoding ancillas are all zero, re-collapsing
/// the state onto one eigenvector of its invariant plane after each failure.
///
/// The register is measured as a whole. Reading the ancillas one qubit at a
/// time would project a failed branch out of its invariant plane.
///
/// Returns the system state and the number of ancilla measurements made.
#[allow(clippy::too_many_arguments)]
pub fn postselect_ancilla<R: Rng + ?Sized>(
    oracle: &PhaseOracle,
    filter: &SignFilter,
    backend: Backend,
    state: &QuantumState,
    phase: f64,
    max_attempts: usize,
    rng: &mut R,
) -> Result<(QuantumState, usize)> {
    let sys = oracle.system_dim();
    let mut current = state.clone();
    for attempt in 1..=max_attempts {
        let zero = current.project_prefix(sys, true);
        let all_zero = rng.gen::<f64>() < zero.norm_squared() / current.norm_squared();
        current = if all_zero { zero } else { current.project_prefix(sys, false) }.normalized()?;
        if all_zero {
            let system = match &current {
                QuantumState::Pure(v) => QuantumState::Pure(v.rows(0, sys).into_owned()),
                QuantumState::Mixed(r) => QuantumState::Mixed(r.view((0, 0), (sys, sys)).into_owned()),
            };
            return Ok((system.normalized()?, attempt));
        }
        let map = PhaseMap { power: separating_power(phase), shift: 0.0 };
        current = run_round(&oracle.unitary, filter, map, backend, &current, rng)?.state;
    }
    Err(Error::RetryCap(max_attempts))
}

#[derive(Clone, Debug)]
pub struct Preparation {
    pub energy: f64,
    pub phase: f64,
    pub state: QuantumState,
    pub best_repeat: usize,
    pub traces: Vec<SearchTrace>,
}

/// One full search from a fresh copy of `state`.
pub fn search_once<R: Rng + ?Sized>(
    oracle: &PhaseOracle,
    filter: &SignFilter,
    state: &QuantumState,
    cfg: &SearchConfig,
    rng: &mut R,
) -> Result<(f64, QuantumState, SearchTrace)> {
    let mut trace = SearchTrace::default();
    let start = oracle.embed(state)?;
    let target = oracle.phase_accuracy(cfg.target_accuracy);
    let (phase, post) = search_phase(&oracle.unitary, filter, cfg.rounds(), target, cfg.backend, &start, rng, &mut trace)?;
    let system = if oracle.ancillas > 0 {
        let (s, attempts) = postselect_ancilla(oracle, filter, cfg.backend, &post, phase, cfg.max_postselect, rng)?;
        trace.postselection_attempts = Some(attempts);
        s
    } else {
        post
    };
    trace.energy_estimate = oracle.energy(phase);
    Ok((phase, system, trace))
}

/// Runs `cfg.repeats` independent searches and keeps the lowest energy.
///
/// Repeat `r` draws from stream `r` of a generator seeded with `seed`, so
/// results do not depend on how repeats are scheduled.
pub fn prepare_ground_state(
    oracle: &PhaseOracle,
    filter: &SignFilter,
    state: &QuantumState,
    cfg: &SearchConfig,
    seed: u64,
) -> Result<Preparation> {
    cfg.validate()?;
    if (filter.kappa() - cfg.kappa).abs() > 0.0 {
        return Err(Error::Invalid("filter and search use different kappa".into()));
    }
    let mut best: Option<Preparation> = None;
    let mut traces = Vec::with_capacity(cfg.repeats);
    for r in 0..cfg.repeats {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        let (phase, out, trace) = search_once(oracle, filter, state, cfg, &mut rng)?;
        let energy = trace.energy_estimate;
        traces.push(trace);
        if best.as_ref().is_none_or(|b| energy < b.energy) {
            best = Some(Preparation { energy, phase, state: out, best_repeat: r, traces: Vec::new() });
        }
    }
    let mut best = best.expect("at least one repeat");
    best.traces = traces;
    Ok(best)
}

#[derive(Clone, Debug)]
pub struct TreeNode {
    pub outcomes: Vec<u8>,
    pub region: Region,
    /// Trace of the unnormalized branch state, i.e. the joint path probability.
    pub probability: f64,
    /// Probability of the last outcome given the parent.
    pub conditional: f64,
    pub state: QuantumState,
}

/// All outcome sequences of a fixed number of rough-search rounds, with the
/// branch states produced by the real-weight measurement maps.
#[derive(Clone, Debug)]
pub struct TrajectoryTree {
    pub depth: usize,
    /// Level order: node `i` has children `2i + 1` (outcome 0) and `2i + 2`.
    pub nodes: Vec<TreeNode>,
}

impl TrajectoryTree {
    pub fn leaves(&self) -> &[TreeNode] {
        &self.nodes[(1 << self.depth) - 1..]
    }

    /// Sum of leaf probabilities whose final region contains `phase`.
    pub fn probability_containing(&self, phase: f64) -> f64 {
        self.leaves().iter().filter(|n| n.region.contains(phase)).map(|n| n.probability).sum()
    }

    pub fn total_leaf_probability(&self) -> f64 {
        self.leaves().iter().map(|n| n.probability).sum()
    }
}

pub fn trajectory_tree(
    unitary: &UnitarySpectrum,
    f: &TrigPolynomial,
    kappa: f64,
    state: &QuantumState,
    depth: usize,
) -> Result<TrajectoryTree> {
    if depth > MAX_TREE_DEPTH {
        return Err(Error::Invalid(format!("tree depth {depth} above the cap of {MAX_TREE_DEPTH}")));
    }
    let root = TreeNode {
        outcomes: Vec::new(),
        region: Region::FULL,
        probability: state.norm_squared(),
        conditional: 1.0,
        state: state.clone(),
    };
    let mut nodes = vec![root];
    for i in 0..(1usize << depth) - 1 {
        let parent = nodes[i].clone();
        let map = PhaseMap::IDENTITY.shifted(parent.region.mid());
        let branches = measurement_maps(unitary, f, map, &parent.state)?;
        for (bit, branch) in branches.into_iter().enumerate() {
            let probability = branch.norm_squared();
            let mut outcomes = parent.outcomes.clone();
            outcomes.push(bit as u8);
            nodes.push(TreeNode {
                outcomes,
                region: parent.region.update(bit as u8, kappa),
                probability,
                conditional: if parent.probability > 0.0 { probability / parent.probability } else { 0.0 },
                state: branch,
            });
        }
    }
    Ok(TrajectoryTree { depth, nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliSum;
    use crate::sign::SignParams;

    fn filter() -> SignFilter {
        SignFilter::build(SignParams { kappa: 0.25, epsilon: 1e-6 }).unwrap()
    }

    #[test]
    fn width_recurrence_has_expected_closed_form() {
        let kappa = 0.25;
        for q in 1..=10 {
            let closed = 2.0 * kappa + PI * f64::powi(2.0, 1 - q as i32);
            assert!((rough_width(kappa, q) - closed).abs() < 1e-12, "q = {q}");
        }
        assert_eq!(default_rough_rounds(0.25), 4);
        assert_eq!(contraction_factor(0.25, 4), 2);
    }

    #[test]
    fn region_contains_wraps() {
        let r = Region { lo: 2.5, hi: PI + 0.4 };
        assert!(r.contains(-PI + 0.2));
        assert!(!r.contains(0.0));
    }

    #[test]
    fn rough_search_locates_eigenphase() {
        let f = filter();
        for target in [0.9 * PI, -1.0, 0.3, -2.9] {
            let mut h = PauliSum::new(1);
            h.add_term("Z".parse().unwrap(), -target).unwrap();
            let u = UnitarySpectrum::evolution(&SpectralDecomposition::diagonalize(&h).unwrap(), 1.0);
            let psi = QuantumState::basis(1, 0).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            let mut trace = SearchTrace::default();
            let (region, _) = rough_search(&u, &f, PhaseMap::IDENTITY, 6, Backend::Spectral, &psi, &mut rng, 1, &mut trace).unwrap();
            assert!(region.contains(-target), "{target} not in {region:?}");
            assert!(region.width() <= 2.0 * 0.25 + PI / 32.0 + 1e-12);
        }
    }

    #[test]
    fn refinement_meets_error_bound() {
        let f = filter();
        let lambda = 0.8137;
        let mut h = PauliSum::new(1);
        h.add_term("Z".parse().unwrap(), lambda).unwrap();
        let u = UnitarySpectrum::evolution(&SpectralDecomposition::diagonalize(&h).unwrap(), 1.0);
        let psi = QuantumState::basis(1, 0).unwrap();
        let k = contraction_factor(0.25, 4) as f64;
        for j in 1..=4 {
            let mut rng = ChaCha8Rng::seed_from_u64(j);
            let mut trace = SearchTrace::default();
            let target = k.powi(-(j as i32));
            let (est, _) = search_phase(&u, &f, 4, target, Backend::Spectral, &psi, &mut rng, &mut trace).unwrap();
            assert_eq!(trace.levels.len(), j as usize);
            assert!((est - lambda).abs() <= target, "level {j}: {est}");
        }
    }

    #[test]
    fn tree_probabilities_sum_to_one() {
        let f = filter();
        let mut h = PauliSum::new(2);
        h.add_term("ZI".parse().unwrap(), 0.7).unwrap();
        h.add_term("XX".parse().unwrap(), 0.4).unwrap();
        let u = UnitarySpectrum::evolution(&SpectralDecomposition::diagonalize(&h).unwrap(), 1.0);
        let tree = trajectory_tree(&u, f.poly(), 0.25, &QuantumState::maximally_mixed(2), 3).unwrap();
        assert_eq!(tree.leaves().len(), 8);
        assert!((tree.total_leaf_probability() - 1.0).abs() < 1e-10);
        for i in 0..7 {
            let s = tree.nodes[2 * i + 1].conditional + tree.nodes[2 * i + 2].conditional;
            assert!((s - 1.0).abs() < 1e-10);
        }
    }
}
