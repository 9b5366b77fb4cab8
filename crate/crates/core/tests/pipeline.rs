use gsprep::block_encoding::build_block_encoding;
use gsprep::models::heisenberg::{heisenberg_random, Boundary, CouplingDraw};
use gsprep::models::fermion::jordan_wigner_hermitian;
use gsprep::models::opfile::{load_operator_file, write_operator, OperatorFile};
use gsprep::processor::SignFilter;
use gsprep::search::{prepare_ground_state, repeats_for_overlap, PhaseOracle, SearchConfig};
use gsprep::sign::SignParams;
use gsprep::spectral::SpectralDecomposition;
use gsprep::state::QuantumState;
use gsprep::variational::gibbs::{gibbs_vqe, GibbsConfig};
use gsprep::variational::{vqe_minimize, AnsatzKind, AnsatzSpec, Objective, OptimizerConfig};

fn filter() -> SignFilter {
    SignFilter::build(SignParams { kappa: 0.25, epsilon: 1e-5 }).unwrap()
}

#[test]
fn warm_start_then_search_reaches_ground_state() {
    let (_, h) = heisenberg_random(5, 3, Boundary::Open, CouplingDraw::PerBond).unwrap();
    let exact = SpectralDecomposition::diagonalize(&h).unwrap();
    let opt = OptimizerConfig { iterations: 120, ..OptimizerConfig::default() };
    let warm = vqe_minimize(&Objective::Energy(h.clone()), &AnsatzSpec::new(AnsatzKind::Alt, 5, 2), &opt).unwrap();
    let state = QuantumState::Pure(warm.state);
    let weight = exact.ground_weight(&state).unwrap();
    assert!(weight > 0.05, "warm start weight {weight}");
    let gap = exact.gap().unwrap();
    let f = filter();
    for oracle in [PhaseOracle::evolution(&exact, h.one_norm()), PhaseOracle::block_encoded(&build_block_encoding(&h).unwrap()).unwrap()] {
        let cfg = SearchConfig { epsilon: 1e-5, ..SearchConfig::new(gap / 3.0, repeats_for_overlap(weight.sqrt())) };
        let prep = prepare_ground_state(&oracle, &f, &state, &cfg, 9).unwrap();
        let fidelity = exact.ground_weight(&prep.state.normalized().unwrap()).unwrap();
        assert!(fidelity > 1.0 - 1e-4, "{:?}: fidelity {fidelity}", oracle.mode);
        assert!((prep.energy - exact.ground_energy()).abs() <= gap / 3.0);
    }
}

#[test]
fn same_seed_same_preparation() {
    let (_, h) = heisenberg_random(3, 1, Boundary::Periodic, CouplingDraw::Global).unwrap();
    let exact = SpectralDecomposition::diagonalize(&h).unwrap();
    let oracle = PhaseOracle::evolution(&exact, h.one_norm());
    let f = filter();
    let cfg = SearchConfig { epsilon: 1e-5, ..SearchConfig::new(0.05, 4) };
    let rho = QuantumState::maximally_mixed(3);
    let a = prepare_ground_state(&oracle, &f, &rho, &cfg, 5).unwrap();
    let b = prepare_ground_state(&oracle, &f, &rho, &cfg, 5).unwrap();
    assert_eq!(a.energy.to_bits(), b.energy.to_bits());
    assert_eq!(a.best_repeat, b.best_repeat);
    assert_eq!(a.state.density(), b.state.density());
}

#[test]
fn operator_file_on_disk_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dimer.txt");
    std::fs::write(&path, "# Hubbard dimer\nmodes 4\n-1 0^ 2\n-1 2^ 0\n-1 1^ 3\n-1 3^ 1\n4 0^ 0 1^ 1\n4 2^ 2 3^ 3\n").unwrap();
    let OperatorFile::Fermion(f) = load_operator_file(&path).unwrap() else { panic!("expected fermion terms") };
    let h = jordan_wigner_hermitian(&f).unwrap();
    // Two-electron singlet energy (U - sqrt(U^2 + 16 t^2)) / 2 lies above the one-electron -t.
    let exact = SpectralDecomposition::diagonalize(&h).unwrap();
    assert!((exact.ground_energy() + 1.0).abs() < 1e-12);
    let again = dir.path().join("qubit.txt");
    std::fs::write(&again, write_operator(&OperatorFile::Qubit(h.clone()))).unwrap();
    let OperatorFile::Qubit(back) = load_operator_file(&again).unwrap() else { panic!("expected qubit terms") };
    assert!((back.to_dense().unwrap() - h.to_dense().unwrap()).norm() < 1e-14);
}

#[test]
fn gibbs_warm_start_is_mixed_and_low_energy() {
    let (_, h) = heisenberg_random(2, 4, Boundary::Open, CouplingDraw::PerBond).unwrap();
    let exact = SpectralDecomposition::diagonalize(&h).unwrap();
    let opt = OptimizerConfig { iterations: 150, ..OptimizerConfig::default() };
    let out = gibbs_vqe(&h, &GibbsConfig { beta: 4.0 }, &AnsatzSpec::new(AnsatzKind::Hea, 4, 2), &opt).unwrap();
    let mean: f64 = exact.eigenvalues().iter().sum::<f64>() / 4.0;
    assert!(out.energy < mean, "energy {} vs infinite-temperature {mean}", out.energy);
    assert!(out.purity <= 1.0 + 1e-12 && out.purity >= 0.25 - 1e-12);
}
