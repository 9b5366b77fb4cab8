use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser};
use gsprep_cli::Subcommand;

#[derive(Parser)]
#[command(name = "gsprep", version, about = "Ground-state preparation experiments")]
enum Cli {
    /// Warm starts and phase search on random Heisenberg chains.
    HeisenbergSweep(Common),
    /// Warm start plus phase search for one Hamiltonian.
    QpsPrepare(Common),
    /// Densities and chemical potentials of a Hubbard chain.
    Hubbard(Common),
    /// Product-state warm starts on random max-cut instances.
    Qubo(Common),
    /// Gradient variance against register size.
    BpVariance(Common),
    /// Sign polynomial and its phase factors on a grid.
    Signpoly(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Worker threads; results are merged in index order.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (cmd, args) = match cli {
        Cli::HeisenbergSweep(a) => (Subcommand::HeisenbergSweep, a),
        Cli::QpsPrepare(a) => (Subcommand::QpsPrepare, a),
        Cli::Hubbard(a) => (Subcommand::Hubbard, a),
        Cli::Qubo(a) => (Subcommand::Qubo, a),
        Cli::BpVariance(a) => (Subcommand::BpVariance, a),
        Cli::Signpoly(a) => (Subcommand::Signpoly, a),
    };
    let start = Instant::now();
    match gsprep_cli::run(cmd, &args.config, args.jobs, &args.out) {
        Ok(()) => {
            eprintln!("{} finished in {:.2} s", cmd.name(), start.elapsed().as_secs_f64());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
