//! Ground-state preparation by quantum phase search, with shallow variational
//! circuits supplying the initial state.
//!
//! Everything is simulated exactly with dense linear algebra, so registers are
//! limited to a few tens of qubits at most and most routines cap far lower.

pub mod block_encoding;
pub mod error;
pub mod linalg;
pub mod models;
pub mod pauli;
pub mod processor;
pub mod qsp;
pub mod search;
pub mod sign;
pub mod spectral;
pub mod state;
pub mod variational;

pub use error::{Error, Result};
