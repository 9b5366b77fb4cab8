//! Experiment runners behind the `gsprep` binary.
//!
//! Every subcommand reads one strict TOML file, runs deterministically from
//! the seeds it contains and writes CSV tables plus JSON traces into the
//! output directory. `jobs` only changes how many threads share the work.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::Path;

pub use error::{CliError, CliResult};

use crate::commands::{heisenberg, hubbard, qps, qubo, signpoly, variance};
use crate::output::OutDir;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    HeisenbergSweep,
    QpsPrepare,
    Hubbard,
    Qubo,
    BpVariance,
    Signpoly,
}

impl Subcommand {
    pub const ALL: [Subcommand; 6] = [
        Subcommand::HeisenbergSweep,
        Subcommand::QpsPrepare,
        Subcommand::Hubbard,
        Subcommand::Qubo,
        Subcommand::BpVariance,
        Subcommand::Signpoly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::HeisenbergSweep => "heisenberg-sweep",
            Subcommand::QpsPrepare => "qps-prepare",
            Subcommand::Hubbard => "hubbard",
            Subcommand::Qubo => "qubo",
            Subcommand::BpVariance => "bp-variance",
            Subcommand::Signpoly => "signpoly",
        }
    }
}

/// Runs one subcommand. Relative paths inside the config resolve against the
/// config file's directory.
pub fn run(cmd: Subcommand, config_path: &Path, jobs: usize, out: &Path) -> CliResult<()> {
    if jobs == 0 {
        return Err(error::config_error("--jobs must be at least 1"));
    }
    let base = config_path.parent().unwrap_or(Path::new("."));
    match cmd {
        Subcommand::HeisenbergSweep => {
            let cfg: config::HeisenbergSweepConfig = config::load(config_path)?;
            cfg.validate()?;
            let records = heisenberg::run_sweep(&cfg, jobs)?;
            heisenberg::write_sweep(&cfg, &records, &OutDir::create(out)?)
        }
        Subcommand::QpsPrepare => {
            let cfg: config::QpsPrepareConfig = config::load(config_path)?;
            cfg.validate()?;
            let h = qps::load_hamiltonian(&cfg, base)?;
            let report = qps::run_qps(&cfg, &h)?;
            qps::write_qps(&cfg, &report, &OutDir::create(out)?)
        }
        Subcommand::Hubbard => {
            let cfg: config::HubbardConfig = config::load(config_path)?;
            cfg.validate()?;
            let report = hubbard::run_hubbard(&cfg, jobs)?;
            hubbard::write_hubbard(&cfg, &report, &OutDir::create(out)?)
        }
        Subcommand::Qubo => {
            let cfg: config::QuboConfig = config::load(config_path)?;
            cfg.validate()?;
            let rows = qubo::run_qubo(&cfg, jobs)?;
            qubo::write_qubo(&cfg, &rows, &OutDir::create(out)?)
        }
        Subcommand::BpVariance => {
            let cfg: config::BpVarianceConfig = config::load(config_path)?;
            cfg.validate()?;
            let report = variance::run_variance(&cfg, jobs)?;
            variance::write_variance(&cfg, &report, &OutDir::create(out)?)
        }
        Subcommand::Signpoly => {
            let cfg: config::SignpolyConfig = config::load(config_path)?;
            cfg.validate()?;
            let (summary, rows) = signpoly::run_signpoly(&cfg)?;
            signpoly::write_signpoly(&cfg, &summary, &rows, &OutDir::create(out)?)
        }
    }
}
