//! Hamiltonians used in the experiments and the fermion-to-qubit mapping.

pub mod fermion;
pub mod heisenberg;
pub mod hubbard;
pub mod occupation;
pub mod opfile;
pub mod qubo;

pub use fermion::{jordan_wigner, FermionOperator, Ladder};
pub use heisenberg::{heisenberg_random, Boundary, CouplingDraw, HeisenbergSpec};
pub use hubbard::{charge_spin_density, hubbard_1d, HubbardSpec, SpinLayout};
pub use occupation::{occupation_project, RestrictedOperator};
pub use opfile::{load_operator_file, parse_operator, OperatorFile};
pub use qubo::{qubo_hamiltonian, QuboSpec};
