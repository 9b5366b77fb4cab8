//! Strict configuration files: TOML tables with every key known in advance.

use std::path::{Path, PathBuf};

use gsprep::models::heisenberg::{Boundary, CouplingDraw};
use gsprep::models::hubbard::{HubbardSpec, SpinLayout};
use gsprep::processor::Backend;
use gsprep::search::{InputMode, SearchConfig};
use gsprep::variational::{AnsatzKind, AnsatzSpec, Entangler, OptimizerConfig};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{config_error, CliResult};

pub fn load<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse<T: DeserializeOwned>(text: &str) -> CliResult<T> {
    toml::from_str(text).map_err(|e| config_error(e.to_string()))
}

fn default_lr() -> f64 {
    0.1
}
fn default_iterations() -> usize {
    200
}
fn default_beta1() -> f64 {
    0.9
}
fn default_beta2() -> f64 {
    0.999
}
fn default_adam_eps() -> f64 {
    1e-8
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSection {
    #[serde(default = "default_lr")]
    pub learning_rate: f64,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default = "default_beta1")]
    pub beta1: f64,
    #[serde(default = "default_beta2")]
    pub beta2: f64,
    #[serde(default = "default_adam_eps")]
    pub epsilon: f64,
}

impl Default for OptimizerSection {
    fn default() -> Self {
        OptimizerSection {
            learning_rate: default_lr(),
            iterations: default_iterations(),
            beta1: default_beta1(),
            beta2: default_beta2(),
            epsilon: default_adam_eps(),
        }
    }
}

impl OptimizerSection {
    pub fn with_seed(&self, seed: u64) -> OptimizerConfig {
        OptimizerConfig {
            learning_rate: self.learning_rate,
            iterations: self.iterations,
            beta1: self.beta1,
            beta2: self.beta2,
            epsilon: self.epsilon,
            seed,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        self.with_seed(0).validate().map_err(|e| config_error(format!("[optimizer] {e}")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzSection {
    pub kind: AnsatzKind,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default)]
    pub entangler: Entangler,
}

fn default_depth() -> usize {
    3
}

impl AnsatzSection {
    pub fn spec(&self, qubits: usize) -> AnsatzSpec {
        AnsatzSpec { kind: self.kind, qubits, depth: self.depth, entangler: self.entangler }
    }

    pub fn validate(&self, qubits: usize) -> CliResult<()> {
        self.spec(qubits).validate().map_err(|e| config_error(format!("[ansatz] {e}")))
    }
}

fn default_kappa() -> f64 {
    0.25
}
fn default_sign_eps() -> f64 {
    1e-6
}
fn default_gap_fraction() -> f64 {
    1.0 / 3.0
}
fn default_postselect() -> usize {
    40
}

/// Phase-search settings. The target accuracy is `accuracy` when given,
/// otherwise `gap_fraction` times the exact spectral gap.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default = "default_sign_eps")]
    pub epsilon: f64,
    #[serde(default)]
    pub rough_rounds: Option<usize>,
    #[serde(default)]
    pub accuracy: Option<f64>,
    #[serde(default = "default_gap_fraction")]
    pub gap_fraction: f64,
    /// Fixed repeat count; by default `ceil(5 / tr(rho Pi))` from the warm start.
    #[serde(default)]
    pub repeats: Option<usize>,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default)]
    pub mode: InputMode,
    #[serde(default = "default_postselect")]
    pub max_postselect: usize,
}

impl Default for SearchSection {
    fn default() -> Self {
        SearchSection {
            kappa: default_kappa(),
            epsilon: default_sign_eps(),
            rough_rounds: None,
            accuracy: None,
            gap_fraction: default_gap_fraction(),
            repeats: None,
            backend: Backend::default(),
            mode: InputMode::default(),
            max_postselect: default_postselect(),
        }
    }
}

impl SearchSection {
    pub fn validate(&self) -> CliResult<()> {
        if let Some(a) = self.accuracy {
            if !(a > 0.0) {
                return Err(config_error("[search] accuracy must be positive"));
            }
        }
        if !(self.gap_fraction > 0.0) {
            return Err(config_error("[search] gap_fraction must be positive"));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(config_error("[search] epsilon must lie in (0, 1)"));
        }
        if self.repeats == Some(0) {
            return Err(config_error("[search] repeats must be at least 1"));
        }
        self.to_search(1.0, 1).validate().map_err(|e| config_error(format!("[search] {e}")))
    }

    pub fn to_search(&self, target_accuracy: f64, repeats: usize) -> SearchConfig {
        SearchConfig {
            kappa: self.kappa,
            epsilon: self.epsilon,
            rough_rounds: self.rough_rounds,
            target_accuracy,
            repeats,
            backend: self.backend,
            max_postselect: self.max_postselect,
        }
    }

    /// Target accuracy for a Hamiltonian with the given gap.
    pub fn target(&self, gap: Option<f64>) -> CliResult<f64> {
        match (self.accuracy, gap) {
            (Some(a), _) => Ok(a),
            (None, Some(g)) if g > 0.0 => Ok(g * self.gap_fraction),
            _ => Err(config_error("[search] spectral gap is zero; set an explicit accuracy")),
        }
    }
}

/// Random Heisenberg chain parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeisenbergSection {
    pub qubits: usize,
    #[serde(default)]
    pub boundary: Boundary,
    #[serde(default)]
    pub coupling_draw: CouplingDraw,
}

impl HeisenbergSection {
    pub fn validate(&self) -> CliResult<()> {
        if self.qubits < 2 {
            return Err(config_error("[model] qubits must be at least 2"));
        }
        if self.qubits > gsprep::spectral::DIAGONALIZE_CAP {
            return Err(config_error(format!(
                "[model] qubits must be at most {} for exact diagonalization",
                gsprep::spectral::DIAGONALIZE_CAP
            )));
        }
        Ok(())
    }
}

fn default_instances() -> usize {
    50
}
fn default_depths() -> Vec<usize> {
    vec![3]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default = "default_instances")]
    pub instances: usize,
    #[serde(default)]
    pub seed: u64,
    /// Ansatz depths to sweep; every instance is optimized at each.
    #[serde(default = "default_depths")]
    pub depths: Vec<usize>,
    /// Instances whose warm start falls below this overlap skip the search.
    #[serde(default)]
    pub min_overlap: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeisenbergSweepConfig {
    pub model: HeisenbergSection,
    pub sweep: SweepSection,
    pub ansatz: AnsatzSection,
    #[serde(default)]
    pub optimizer: OptimizerSection,
    /// Runs the phase search on every instance when present.
    #[serde(default)]
    pub search: Option<SearchSection>,
}

impl HeisenbergSweepConfig {
    pub fn validate(&self) -> CliResult<()> {
        self.model.validate()?;
        self.optimizer.validate()?;
        if self.sweep.instances == 0 {
            return Err(config_error("[sweep] instances must be at least 1"));
        }
        if self.sweep.depths.is_empty() {
            return Err(config_error("[sweep] depths must not be empty"));
        }
        for &d in &self.sweep.depths {
            AnsatzSection { depth: d, ..self.ansatz.clone() }.validate(self.model.qubits)?;
        }
        if !(0.0..=1.0).contains(&self.sweep.min_overlap) {
            return Err(config_error("[sweep] min_overlap must lie in [0, 1]"));
        }
        if let Some(s) = &self.search {
            s.validate()?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Heisenberg,
    File,
}

/// Hamiltonian for a single preparation: a random chain or an operator file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSection {
    pub source: Source,
    #[serde(default)]
    pub qubits: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub boundary: Option<Boundary>,
    #[serde(default)]
    pub coupling_draw: Option<CouplingDraw>,
    /// Operator file, relative to the config file.
    #[serde(default)]
    pub path: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QpsPrepareConfig {
    pub hamiltonian: HamiltonianSection,
    pub ansatz: AnsatzSection,
    #[serde(default)]
    pub optimizer: OptimizerSection,
    #[serde(default)]
    pub search: SearchSection,
    #[serde(default)]
    pub seed: u64,
}

impl QpsPrepareConfig {
    pub fn validate(&self) -> CliResult<()> {
        let h = &self.hamiltonian;
        match h.source {
            Source::Heisenberg => {
                if h.path.is_some() {
                    return Err(config_error("[hamiltonian] path is only valid with source = \"file\""));
                }
                let qubits = h.qubits.ok_or_else(|| config_error("[hamiltonian] qubits is required"))?;
                HeisenbergSection { qubits, boundary: Boundary::Open, coupling_draw: CouplingDraw::PerBond }.validate()?;
            }
            Source::File => {
                if h.path.is_none() {
                    return Err(config_error("[hamiltonian] path is required with source = \"file\""));
                }
                if h.qubits.is_some() || h.seed.is_some() || h.boundary.is_some() || h.coupling_draw.is_some() {
                    return Err(config_error("[hamiltonian] only path is valid with source = \"file\""));
                }
            }
        }
        self.optimizer.validate()?;
        self.search.validate()
    }
}

fn default_hubbard() -> HubbardSpec {
    HubbardSpec::reference_instance()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HubbardSection {
    #[serde(default = "d_sites")]
    pub sites: usize,
    #[serde(default = "d_hopping")]
    pub hopping: f64,
    #[serde(default = "d_onsite")]
    pub onsite: f64,
    #[serde(default = "d_depth")]
    pub depth: [f64; 2],
    #[serde(default = "d_center")]
    pub center: [f64; 2],
    #[serde(default = "d_width")]
    pub width: [f64; 2],
    #[serde(default)]
    pub layout: SpinLayout,
}

fn d_sites() -> usize {
    default_hubbard().sites
}
fn d_hopping() -> f64 {
    default_hubbard().hopping
}
fn d_onsite() -> f64 {
    default_hubbard().onsite
}
fn d_depth() -> [f64; 2] {
    default_hubbard().depth
}
fn d_center() -> [f64; 2] {
    default_hubbard().center
}
fn d_width() -> [f64; 2] {
    default_hubbard().width
}

impl HubbardSection {
    pub fn spec(&self) -> HubbardSpec {
        HubbardSpec {
            sites: self.sites,
            hopping: self.hopping,
            onsite: self.onsite,
            depth: self.depth,
            center: self.center,
            width: self.width,
            layout: self.layout,
        }
    }
}

fn default_block_accuracy() -> f64 {
    1e-5
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HubbardConfig {
    pub hubbard: HubbardSection,
    pub ansatz: AnsatzSection,
    #[serde(default)]
    pub optimizer: OptimizerSection,
    #[serde(default)]
    pub search: SearchSection,
    /// Energy accuracy for each fixed-occupation block.
    #[serde(default = "default_block_accuracy")]
    pub block_accuracy: f64,
    #[serde(default)]
    pub seed: u64,
}

impl HubbardConfig {
    pub fn validate(&self) -> CliResult<()> {
        let spec = self.hubbard.spec();
        spec.validate().map_err(|e| config_error(format!("[hubbard] {e}")))?;
        if spec.modes() > gsprep::spectral::DIAGONALIZE_CAP {
            return Err(config_error("[hubbard] too many sites for exact diagonalization"));
        }
        self.ansatz.validate(spec.modes())?;
        self.optimizer.validate()?;
        self.search.validate()?;
        if !(self.block_accuracy > 0.0) {
            return Err(config_error("block_accuracy must be positive"));
        }
        Ok(())
    }
}

fn default_edge_probability() -> f64 {
    0.5
}
fn default_restarts() -> usize {
    10
}
fn default_qubo_instances() -> usize {
    20
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuboSection {
    pub sizes: Vec<usize>,
    #[serde(default = "default_qubo_instances")]
    pub instances: usize,
    #[serde(default = "default_edge_probability")]
    pub edge_probability: f64,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuboConfig {
    pub qubo: QuboSection,
    #[serde(default)]
    pub optimizer: OptimizerSection,
}

impl QuboConfig {
    pub fn validate(&self) -> CliResult<()> {
        let q = &self.qubo;
        if q.sizes.is_empty() {
            return Err(config_error("[qubo] sizes must not be empty"));
        }
        if let Some(&n) = q.sizes.iter().find(|&&n| !(2..=gsprep::variational::qubo::ENUMERATION_CAP).contains(&n)) {
            return Err(config_error(format!(
                "[qubo] size {n} outside [2, {}]",
                gsprep::variational::qubo::ENUMERATION_CAP
            )));
        }
        if q.instances == 0 || q.restarts == 0 {
            return Err(config_error("[qubo] instances and restarts must be at least 1"));
        }
        if !(0.0..=1.0).contains(&q.edge_probability) {
            return Err(config_error("[qubo] edge_probability must lie in [0, 1]"));
        }
        self.optimizer.validate()
    }
}

fn default_variance_sizes() -> Vec<usize> {
    vec![4, 6, 8, 10, 12, 14]
}
fn default_samples() -> usize {
    200
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarianceSection {
    #[serde(default = "default_variance_sizes")]
    pub sizes: Vec<usize>,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BpVarianceConfig {
    pub variance: VarianceSection,
}

impl BpVarianceConfig {
    pub fn validate(&self) -> CliResult<()> {
        let v = &self.variance;
        if v.sizes.len() < 2 {
            return Err(config_error("[variance] at least two sizes are needed for a slope"));
        }
        if let Some(&n) = v.sizes.iter().find(|&&n| !(2..=gsprep::variational::ansatz::SIM_CAP).contains(&n)) {
            return Err(config_error(format!("[variance] size {n} outside [2, {}]", gsprep::variational::ansatz::SIM_CAP)));
        }
        if v.depth == 0 || v.samples < 2 {
            return Err(config_error("[variance] depth must be at least 1 and samples at least 2"));
        }
        Ok(())
    }
}

fn default_grid() -> usize {
    2001
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignSection {
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    pub epsilon: f64,
    #[serde(default = "default_grid")]
    pub grid_points: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignpolyConfig {
    pub sign: SignSection,
}

impl SignpolyConfig {
    pub fn validate(&self) -> CliResult<()> {
        let s = &self.sign;
        if !(s.kappa > 0.0 && s.kappa < 0.5) {
            return Err(config_error("[sign] kappa must lie in (0, 1/2)"));
        }
        if !(s.epsilon > 0.0 && s.epsilon < 1.0) {
            return Err(config_error("[sign] epsilon must lie in (0, 1)"));
        }
        if s.grid_points < 2 {
            return Err(config_error("[sign] grid_points must be at least 2"));
        }
        Ok(())
    }
}
