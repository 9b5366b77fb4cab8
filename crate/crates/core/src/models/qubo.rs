//! Max-cut style QUBO Hamiltonians on weighted graphs.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum};

/// Undirected weighted graph. Each edge is stored once under `(min, max)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuboSpec {
    n: usize,
    edges: BTreeMap<(usize, usize), f64>,
}

impl QuboSpec {
    pub fn new(n: usize) -> Self {
        QuboSpec { n, edges: BTreeMap::new() }
    }

    /// Every pair joined with unit weight.
    pub fn complete(n: usize) -> Self {
        let mut g = QuboSpec::new(n);
        for p in 0..n {
            for q in p + 1..n {
                g.edges.insert((p, q), 1.0);
            }
        }
        g
    }

    /// Erdos-Renyi graph with unit weights.
    pub fn random_graph(n: usize, edge_probability: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&edge_probability) {
            return Err(Error::Invalid(format!("edge probability {edge_probability} outside [0, 1]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = QuboSpec::new(n);
        for p in 0..n {
            for q in p + 1..n {
                if rng.gen_bool(edge_probability) {
                    g.edges.insert((p, q), 1.0);
                }
            }
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, p: usize, q: usize, w: f64) -> Result<()> {
        if p == q {
            return Err(Error::Invalid(format!("self-loop on vertex {p}")));
        }
        if p.max(q) >= self.n {
            return Err(Error::QubitIndex { index: p.max(q), n: self.n });
        }
        if !w.is_finite() {
            return Err(Error::Invalid(format!("non-finite edge weight {w}")));
        }
        *self.edges.entry((p.min(q), p.max(q))).or_insert(0.0) += w;
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(p, q), &w)| (p, q, w))
    }

    pub fn weight(&self, p: usize, q: usize) -> f64 {
        self.edges.get(&(p.min(q), p.max(q))).copied().unwrap_or(0.0)
    }

    /// Diagonal entry for a bitstring, qubit 0 the most significant bit.
    pub fn energy(&self, bits: usize) -> f64 {
        let z = |p: usize| if bits >> (self.n - 1 - p) & 1 == 0 { 1.0 } else { -1.0 };
        self.edges().map(|(p, q, w)| w * z(p) * z(q)).sum::<f64>() - self.n as f64 / 2.0
    }

    /// Minimum energy and every bitstring attaining it, by enumeration.
    pub fn ground_states(&self, tol: f64) -> (f64, Vec<usize>) {
        let energies: Vec<f64> = (0..1usize << self.n).map(|b| self.energy(b)).collect();
        let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
        let ground = (0..energies.len()).filter(|&b| energies[b] <= min + tol).collect();
        (min, ground)
    }
}

/// `sum_{p<q} w_pq Z_p Z_q - n/2`. On the complete unit graph this is
/// `1/2 sum_{p != q} Z_p Z_q - n/2` over ordered pairs.
pub fn qubo_hamiltonian(spec: &QuboSpec) -> Result<PauliSum> {
    let n = spec.n;
    let mut h = PauliSum::new(n);
    for (p, q, w) in spec.edges() {
        h.add_term(PauliString::with_ops(n, &[(p, Pauli::Z), (q, Pauli::Z)])?, w)?;
    }
    if n > 0 {
        h.add_term(PauliString::identity(n), -(n as f64) / 2.0)?;
    }
    h.prune(0.0);
    Ok(h)
}
