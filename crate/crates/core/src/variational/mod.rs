//! Shallow variational circuits used as warm starts.

pub mod ansatz;
pub mod barren;
pub mod gibbs;
pub mod optimizer;
pub mod qubo;
pub mod vqe;

pub use ansatz::{AnsatzKind, AnsatzSpec, Circuit, Entangler};
pub use optimizer::{Adam, OptimizerConfig};
pub use vqe::{vqe_minimize, Objective, VqeOutcome};
