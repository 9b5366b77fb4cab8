//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report prints in order. A failing
//! sub-check makes the binary exit non-zero unless it is listed as a known
//! infeasibility in the decisions ledger; such checks still print FAIL.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use gsprep::block_encoding::build_block_encoding;
use gsprep::linalg::{CMatrix, C64};
use gsprep::models::qubo::{qubo_hamiltonian, QuboSpec};
use gsprep::pauli::{PauliString, PauliSum};
use gsprep::processor::{round_branches, Backend, SignFilter};
use gsprep::qsp::{find_phase_factors, reconstruction_error};
use gsprep::search::{search_once, trajectory_tree, PhaseOracle, SearchConfig};
use gsprep::sign::{approx_sign, sign_deviation, SignParams};
use gsprep::spectral::{PhaseMap, SpectralDecomposition};
use gsprep::state::QuantumState;
use gsprep::variational::qubo::{product_state, qubo_cost_and_gradient};
use gsprep_cli::commands::{heisenberg, hubbard, qubo, variance};
use gsprep_cli::config::{self, BpVarianceConfig, HeisenbergSweepConfig, HubbardConfig, QuboConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Check {
    what: String,
    pass: bool,
    /// Recorded as unattainable together with the other sub-checks.
    known_infeasible: bool,
}

struct Criterion {
    id: usize,
    title: &'static str,
    checks: Vec<Check>,
    seconds: f64,
}

impl Criterion {
    fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn blocking(&self) -> bool {
        self.checks.iter().any(|c| !c.pass && !c.known_infeasible)
    }
}

fn check(what: impl Into<String>, pass: bool) -> Check {
    Check { what: what.into(), pass, known_infeasible: false }
}

fn timed(id: usize, title: &'static str, f: impl FnOnce() -> Vec<Check>) -> Criterion {
    let start = Instant::now();
    let checks = f();
    Criterion { id, title, checks, seconds: start.elapsed().as_secs_f64() }
}

fn random_hamiltonian(n: usize, terms: usize, rng: &mut ChaCha8Rng) -> PauliSum {
    let mut h = PauliSum::new(n);
    while h.len() < terms {
        let s: String = (0..n).map(|_| ['I', 'X', 'Y', 'Z'][rng.gen_range(0..4)]).collect();
        let p: PauliString = s.parse().unwrap();
        h.add_term(p, rng.gen_range(-1.0..1.0)).unwrap();
    }
    h
}

fn random_mixed(dim: usize, rank: usize, rng: &mut ChaCha8Rng) -> QuantumState {
    let g = CMatrix::from_fn(dim, rank, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let rho = &g * g.adjoint();
    let tr = rho.trace().re;
    QuantumState::from_density(rho.unscale(tr)).unwrap()
}

fn sign_filter() -> SignFilter {
    SignFilter::build(SignParams { kappa: 0.25, epsilon: 1e-6 }).unwrap()
}

fn criterion_1() -> Vec<Check> {
    let approx = approx_sign(SignParams { kappa: 0.25, epsilon: 1e-4 }).unwrap();
    let deviation = sign_deviation(&approx, 200_000);
    let sup = approx.poly.sup_abs(200_000);
    let one_norm = approx.poly.one_norm();
    vec![
        check(format!("max deviation on good region {deviation:.3e} <= 1e-4"), deviation <= 1e-4),
        check(format!("sup |f| {sup:.9} <= 1"), sup <= 1.0),
        Check {
            what: format!("coefficient one-norm {one_norm:.6} <= 1 (order {})", approx.order()),
            pass: one_norm <= 1.0,
            known_infeasible: true,
        },
    ]
}

fn criterion_2() -> Vec<Check> {
    let approx = approx_sign(SignParams { kappa: 0.3, epsilon: 1e-3 }).unwrap();
    let factors = find_phase_factors(&approx.poly, 1e-10).unwrap();
    let points = 4 * approx.order();
    let err = reconstruction_error(&factors, &approx.poly, points);
    vec![check(format!("sup-norm reconstruction error {err:.3e} <= 1e-8 on {points} points"), err <= 1e-8)]
}

fn criterion_3(filter: &SignFilter) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst_p, mut worst_d) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let h = random_hamiltonian(4, 6, &mut rng);
        let exact = SpectralDecomposition::diagonalize(&h).unwrap();
        let oracle = PhaseOracle::evolution(&exact, h.one_norm());
        let rho = random_mixed(16, 3, &mut rng);
        let map = PhaseMap::IDENTITY.shifted(rng.gen_range(-3.0..3.0)).pow(rng.gen_range(1..9));
        let (sb, sp0) = round_branches(&oracle.unitary, filter, map, Backend::Spectral, &rho).unwrap();
        let (cb, cp0) = round_branches(&oracle.unitary, filter, map, Backend::Circuit, &rho).unwrap();
        worst_p = worst_p.max((sp0 - cp0).abs());
        for k in 0..2 {
            if sb[k].norm_squared() > 1e-6 {
                let a = sb[k].normalized().unwrap();
                let b = cb[k].normalized().unwrap();
                worst_d = worst_d.max(a.trace_distance(&b).unwrap());
            }
        }
    }
    vec![
        check(format!("branch probability gap {worst_p:.3e} <= 1e-8"), worst_p <= 1e-8),
        check(format!("post-state trace distance {worst_d:.3e} <= 1e-7"), worst_d <= 1e-7),
    ]
}

fn criterion_4(filter: &SignFilter) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let tol = 3.0 * filter.epsilon() + 1e-6;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let h = random_hamiltonian(4, 6, &mut rng);
        let exact = SpectralDecomposition::diagonalize(&h).unwrap();
        let oracle = PhaseOracle::evolution(&exact, h.one_norm());
        let rho = random_mixed(16, 4, &mut rng);
        let tree = trajectory_tree(&oracle.unitary, filter.poly(), filter.kappa(), &rho, 3).unwrap();
        let ground_phase = exact.ground_energy() * oracle.scale;
        let routed: f64 = tree
            .leaves()
            .iter()
            .filter(|leaf| leaf.region.contains(ground_phase))
            .map(|leaf| exact.ground_weight(&leaf.state).unwrap())
            .sum();
        worst = worst.max((routed - exact.ground_weight(&rho).unwrap()).abs());
    }
    vec![check(format!("ground weight in ground leaves vs tr(rho Pi): {worst:.3e} <= {tol:.1e}"), worst <= tol)]
}

/// Criteria 5 and 6 share one sweep over random 8-qubit chains.
fn heisenberg_sweep() -> (Vec<heisenberg::InstanceRecord>, f64) {
    let cfg: HeisenbergSweepConfig = config::parse(
        "[model]\nqubits = 8\n\n[sweep]\ninstances = 50\nseed = 0\ndepths = [3]\nmin_overlap = 0.4\n\n\
         [ansatz]\nkind = \"alt\"\n\n[search]\nkappa = 0.25\nepsilon = 1e-6\n",
    )
    .unwrap();
    let start = Instant::now();
    let records = heisenberg::run_sweep(&cfg, 1).unwrap();
    (records, start.elapsed().as_secs_f64())
}

fn criterion_5(records: &[heisenberg::InstanceRecord], seconds: f64) -> Vec<Check> {
    let searched: Vec<_> = records.iter().filter_map(|r| r.search.as_ref().map(|s| (r, s))).take(20).collect();
    let good = searched
        .iter()
        .filter(|(r, s)| s.fidelity >= 1.0 - 1e-4 && s.energy_error <= r.gap.unwrap() / 3.0)
        .count();
    vec![
        check(format!("{} instances with warm-start weight >= 0.4 available (need 20)", searched.len()), searched.len() == 20),
        check(format!("{good}/20 reach fidelity >= 1 - 1e-4 and energy error <= gap/3 (need 18)"), good >= 18),
        check(format!("sweep runtime {seconds:.0} s <= 1800 s"), seconds <= 1800.0),
    ]
}

fn criterion_6(records: &[heisenberg::InstanceRecord]) -> Vec<Check> {
    let above = records.iter().filter(|r| r.warm_starts[0].overlap >= 0.4).count();
    let fraction = above as f64 / records.len() as f64;
    vec![check(format!("{above}/{} overlaps >= 0.4 ({:.0}%, need 80%)", records.len(), 100.0 * fraction), fraction >= 0.8)]
}

fn criterion_7(filter: &SignFilter) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let h = random_hamiltonian(3, 5, &mut rng);
    let exact = SpectralDecomposition::diagonalize(&h).unwrap();
    let be = build_block_encoding(&h).unwrap();
    let spectrum = be.spectrum().unwrap();
    let mut worst = 0.0f64;
    for &lambda in exact.eigenvalues() {
        let tau = (lambda / be.alpha).acos();
        for target in [tau, -tau] {
            let nearest = spectrum.phases().iter().map(|&p| (p - target).abs()).fold(f64::INFINITY, f64::min);
            worst = worst.max(nearest);
        }
    }
    let corner = be.corner().unwrap();
    let corner_err = (corner - h.to_dense().unwrap().unscale(be.alpha)).norm();
    let oracle = PhaseOracle::block_encoded(&be).unwrap();
    let cfg = SearchConfig::new(0.05, 1);
    let start = QuantumState::maximally_mixed(3);
    let (mut trials, mut attempts) = (0usize, 0usize);
    let mut trial_rng = ChaCha8Rng::seed_from_u64(70);
    while trials < 1000 {
        let (_, _, trace) = search_once(&oracle, filter, &start, &cfg, &mut trial_rng).unwrap();
        attempts += trace.postselection_attempts.unwrap();
        trials += 1;
    }
    let rate = trials as f64 / attempts as f64;
    vec![
        check(format!("eigenphases match +-acos(lambda/alpha) to {worst:.2e} <= 1e-8"), worst <= 1e-8),
        check(format!("top-left block equals H/alpha to {corner_err:.2e}"), corner_err <= 1e-8),
        check(format!("per-round postselection success {rate:.4} in [0.45, 0.55] over {trials} searches"), (rate - 0.5).abs() <= 0.05),
    ]
}

fn criterion_8() -> Vec<Check> {
    let cfg: HubbardConfig = config::parse("[hubbard]\n\n[ansatz]\nkind = \"hea\"\ndepth = 3\n").unwrap();
    let start = Instant::now();
    let report = hubbard::run_hubbard(&cfg, 1).unwrap();
    let seconds = start.elapsed().as_secs_f64();
    let d = &report.densities;
    let density_err = d
        .iter()
        .map(|r| (r.qps_charge - r.exact_charge).abs().max((r.qps_spin - r.exact_spin).abs()))
        .fold(0.0, f64::max);
    let n = d.len();
    let asym = (0..n)
        .map(|i| (d[i].qps_charge - d[n - 1 - i].qps_charge).abs().max((d[i].qps_spin - d[n - 1 - i].qps_spin).abs()))
        .fold(0.0, f64::max);
    let mu_err = report.potentials.iter().map(|p| p.qps_abs_error).fold(0.0, f64::max);
    vec![
        check(format!("density error {density_err:.2e} <= 1e-3 per site"), density_err <= 1e-3),
        check(format!("mirror asymmetry about the central site {asym:.2e} <= 1e-3"), asym <= 1e-3),
        check(
            format!("chemical potential error {mu_err:.2e} <= 1e-4 for N = 1..{}", report.potentials.len()),
            mu_err <= 1e-4 && report.potentials.len() == 10,
        ),
        check(format!("runtime {seconds:.0} s <= 3600 s"), seconds <= 3600.0),
    ]
}

fn criterion_9() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut cost_err, mut grad_err, mut fd_err) = (0.0f64, 0.0f64, 0.0f64);
    for n in 2..=10 {
        for _ in 0..3 {
            let spec = QuboSpec::random_graph(n, 0.5, rng.gen()).unwrap();
            let h = qubo_hamiltonian(&spec).unwrap();
            let theta: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
            let (cost, grad) = qubo_cost_and_gradient(&theta, &spec).unwrap();
            let energy = |t: &[f64]| h.expectation_vector(&product_state(t)).unwrap();
            cost_err = cost_err.max((cost - energy(&theta)).abs());
            for k in 0..n {
                let shifted = |s: f64| {
                    let mut t = theta.clone();
                    t[k] += s;
                    energy(&t)
                };
                let shift = std::f64::consts::FRAC_PI_2;
                grad_err = grad_err.max((grad[k] - 0.5 * (shifted(shift) - shifted(-shift))).abs());
                let step = 1e-5;
                fd_err = fd_err.max((grad[k] - (shifted(step) - shifted(-step)) / (2.0 * step)).abs());
            }
        }
    }
    let cfg: QuboConfig = config::parse("[qubo]\nsizes = [15]\ninstances = 20\nrestarts = 10\nseed = 0\n").unwrap();
    let rows = qubo::run_qubo(&cfg, 1).unwrap();
    let overlaps: Vec<f64> = rows.iter().map(|r| r.overlap).collect();
    let in_range = overlaps.iter().all(|o| (0.0..=1.0 + 1e-12).contains(o));
    let median = qubo::median(&overlaps);
    vec![
        check(format!("cost vs statevector {cost_err:.2e} <= 1e-10 (n <= 10)"), cost_err <= 1e-10),
        check(format!("gradient vs statevector shift rule {grad_err:.2e} <= 1e-10"), grad_err <= 1e-10),
        check(format!("gradient vs finite differences {fd_err:.2e} <= 1e-6"), fd_err <= 1e-6),
        check(format!("n = 15: {} overlaps in [0, 1], median {median:.3} > 0.5", overlaps.len()), in_range && overlaps.len() == 20 && median > 0.5),
    ]
}

fn criterion_10() -> Vec<Check> {
    let cfg: BpVarianceConfig = config::parse("[variance]\nsizes = [4, 6, 8, 10, 12, 14]\ndepth = 3\nsamples = 200\n").unwrap();
    let start = Instant::now();
    let report = variance::run_variance(&cfg, 1).unwrap();
    let seconds = start.elapsed().as_secs_f64();
    vec![
        check(format!("log2 variance slope {:.4} > -1", report.slope), report.slope > -1.0),
        check(format!("runtime {seconds:.0} s <= 1200 s"), seconds <= 1200.0),
    ]
}

fn tree_bytes(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.push((path.strip_prefix(root).unwrap().display().to_string(), fs::read(&path).unwrap()));
            }
        }
    }
    out.sort();
    out
}

const SMALL_CONFIGS: [(&str, &str); 7] = [
    ("heisenberg-sweep", "[model]\nqubits = 4\n\n[sweep]\ninstances = 3\ndepths = [1, 2]\nmin_overlap = 0.2\n\n[ansatz]\nkind = \"alt\"\n\n[optimizer]\niterations = 40\n\n[search]\nepsilon = 1e-4\n"),
    ("qps-prepare", "seed = 4\n\n[hamiltonian]\nsource = \"heisenberg\"\nqubits = 3\nseed = 2\n\n[ansatz]\nkind = \"hea\"\ndepth = 1\n\n[optimizer]\niterations = 40\n\n[search]\nepsilon = 1e-4\n"),
    ("qps-prepare", "seed = 4\n\n[hamiltonian]\nsource = \"heisenberg\"\nqubits = 3\nseed = 2\n\n[ansatz]\nkind = \"hea\"\ndepth = 1\n\n[optimizer]\niterations = 40\n\n[search]\nepsilon = 1e-4\nmode = \"block-encoding\"\nbackend = \"circuit\"\n"),
    ("hubbard", "[hubbard]\nsites = 2\ndepth = [1.0, 0.0]\ncenter = [1.5, 1.5]\n\n[ansatz]\nkind = \"hea\"\ndepth = 2\n\n[optimizer]\niterations = 40\n\n[search]\nepsilon = 1e-4\n"),
    ("qubo", "[qubo]\nsizes = [4, 6]\ninstances = 3\nrestarts = 2\n"),
    ("bp-variance", "[variance]\nsizes = [2, 4]\nsamples = 10\n"),
    ("signpoly", "[sign]\nkappa = 0.3\nepsilon = 1e-3\ngrid_points = 51\n"),
];

fn criterion_11() -> Vec<Check> {
    let dir = tempfile::tempdir().unwrap();
    let mut checks = Vec::new();
    for (k, (cmd, text)) in SMALL_CONFIGS.iter().enumerate() {
        let cfg = dir.path().join(format!("c{k}.toml"));
        fs::write(&cfg, text).unwrap();
        let mut trees = Vec::new();
        for (run, jobs) in [(0, "1"), (1, "1"), (2, "2")] {
            let out = dir.path().join(format!("o{k}_{run}"));
            let status = Command::new(env!("CARGO_BIN_EXE_gsprep"))
                .args([cmd, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--jobs", jobs])
                .output()
                .unwrap();
            if !status.status.success() {
                eprintln!("{cmd}: {}", String::from_utf8_lossy(&status.stderr));
            }
            trees.push(tree_bytes(&out));
        }
        let same = !trees[0].is_empty() && trees[0] == trees[1] && trees[0] == trees[2];
        checks.push(check(format!("{cmd}: {} files identical across reruns and --jobs 1/2", trees[0].len()), same));
    }
    checks
}

fn main() {
    let filter = sign_filter();
    let mut results = Vec::new();
    let mut report = |c: Criterion| {
        let verdict = if c.pass() { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict} {} ({:.1} s)", c.id, c.title, c.seconds);
        for ch in &c.checks {
            let mark = match (ch.pass, ch.known_infeasible) {
                (true, _) => "ok",
                (false, true) => "FAIL (known infeasible, see ledger)",
                (false, false) => "FAIL",
            };
            println!("    {mark}: {}", ch.what);
        }
        results.push(c);
    };
    report(timed(1, "sign approximation", criterion_1));
    report(timed(2, "phase-factor round trip", criterion_2));
    report(timed(3, "circuit vs spectral backend", || criterion_3(&filter)));
    report(timed(4, "output-probability routing", || criterion_4(&filter)));
    let (records, sweep_seconds) = heisenberg_sweep();
    report(Criterion { id: 5, title: "end-to-end evolution mode", checks: criterion_5(&records, sweep_seconds), seconds: sweep_seconds });
    report(Criterion { id: 6, title: "warm-start statistics", checks: criterion_6(&records), seconds: 0.0 });
    report(timed(7, "block-encoding mode", || criterion_7(&filter)));
    report(timed(8, "Hubbard densities and chemical potential", criterion_8));
    report(timed(9, "QUBO analytic layer", criterion_9));
    report(timed(10, "gradient variance scaling", criterion_10));
    report(timed(11, "CLI determinism", criterion_11));
    let passed = results.iter().filter(|c| c.pass()).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    let blocking: Vec<usize> = results.iter().filter(|c| c.blocking()).map(|c| c.id).collect();
    if !blocking.is_empty() {
        eprintln!("unexpected failures in criteria {blocking:?}");
        std::process::exit(1);
    }
}
