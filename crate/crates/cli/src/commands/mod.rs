pub mod common;
pub mod heisenberg;
pub mod hubbard;
pub mod qps;
pub mod qubo;
pub mod signpoly;
pub mod variance;
