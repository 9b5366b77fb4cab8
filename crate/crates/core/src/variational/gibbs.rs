//! Variational preparation of a thermal-like mixed state through a purification.
//!
//! The ansatz acts on `2n` qubits; the first `n` form the system and the
//! rest are traced out. The loss is
//! `tr(H rho) + 2 P / beta - (P + 3) / (2 beta)` with purity `P = tr(rho^2)`.

use std::f64::consts::FRAC_PI_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::state::QuantumState;
use crate::variational::ansatz::{AnsatzSpec, Circuit};
use crate::variational::optimizer::{minimize, random_params, OptimizerConfig};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GibbsConfig {
    pub beta: f64,
}

impl Default for GibbsConfig {
    fn default() -> Self {
        GibbsConfig { beta: 2.0 }
    }
}

pub fn gibbs_loss(energy: f64, purity: f64, beta: f64) -> f64 {
    energy + 2.0 * purity / beta - (purity + 3.0) / (2.0 * beta)
}

/// `H` acting on the leading qubits of a larger register.
pub fn pad_trailing(h: &PauliSum, total: usize) -> Result<PauliSum> {
    let n = h.num_qubits();
    if total < n {
        return Err(Error::Dimension { expected: n, got: total });
    }
    let mut out = PauliSum::new(total);
    for (p, c) in h.terms() {
        let mut letters: Vec<Pauli> = p.letters().to_vec();
        letters.resize(total, Pauli::I);
        out.add_term(PauliString::new(letters), c)?;
    }
    Ok(out)
}

/// Amplitudes arranged with system index as row and ancilla index as column.
fn amplitude_matrix(psi: &CVector, system: usize) -> CMatrix {
    let rows = 1usize << system;
    let cols = psi.len() / rows;
    CMatrix::from_fn(rows, cols, |i, j| psi[i * cols + j])
}

/// Reduced state of the leading `system` qubits.
pub fn reduced_state(psi: &CVector, system: usize) -> CMatrix {
    let m = amplitude_matrix(psi, system);
    &m * m.adjoint()
}

/// `tr(rho_a rho_b)` for the reduced states of two purifications.
pub fn reduced_overlap(a: &CVector, b: &CVector, system: usize) -> f64 {
    (amplitude_matrix(a, system).adjoint() * amplitude_matrix(b, system)).norm_squared()
}

#[derive(Clone, Debug)]
pub struct GibbsOutcome {
    pub params: Vec<f64>,
    pub curve: Vec<f64>,
    pub state: QuantumState,
    pub loss: f64,
    pub energy: f64,
    pub purity: f64,
}

fn loss_and_gradient(circuit: &Circuit, padded: &PauliSum, system: usize, beta: f64, params: &[f64]) -> Result<(f64, Vec<f64>)> {
    let psi = circuit.run(params)?;
    let energy = padded.expectation_vector(&psi)?;
    let purity = reduced_overlap(&psi, &psi, system);
    let mut shifted = params.to_vec();
    let mut grad = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        shifted[i] = params[i] + FRAC_PI_2;
        let plus = circuit.run(&shifted)?;
        shifted[i] = params[i] - FRAC_PI_2;
        let minus = circuit.run(&shifted)?;
        shifted[i] = params[i];
        let d_energy = (padded.expectation_vector(&plus)? - padded.expectation_vector(&minus)?) / 2.0;
        // Purity is bilinear in the two copies; both copies shift alike.
        let d_purity = reduced_overlap(&plus, &psi, system) - reduced_overlap(&minus, &psi, system);
        grad.push(d_energy + 1.5 / beta * d_purity);
    }
    Ok((gibbs_loss(energy, purity, beta), grad))
}

/// `spec` must act on twice as many qubits as `h`.
pub fn gibbs_vqe(h: &PauliSum, cfg: &GibbsConfig, spec: &AnsatzSpec, opt: &OptimizerConfig) -> Result<GibbsOutcome> {
    if !(cfg.beta > 0.0) {
        return Err(Error::Invalid("inverse temperature must be positive".into()));
    }
    let n = h.num_qubits();
    if spec.qubits != 2 * n {
        return Err(Error::Dimension { expected: 2 * n, got: spec.qubits });
    }
    let circuit = spec.circuit()?;
    let padded = pad_trailing(h, 2 * n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opt.seed);
    let start = random_params(circuit.num_params, &mut rng);
    let (params, curve) = minimize(opt, start, |p| loss_and_gradient(&circuit, &padded, n, cfg.beta, p))?;
    let psi = circuit.run(&params)?;
    let energy = padded.expectation_vector(&psi)?;
    let purity = reduced_overlap(&psi, &psi, n);
    let state = QuantumState::Mixed(reduced_state(&psi, n));
    Ok(GibbsOutcome { loss: gibbs_loss(energy, purity, cfg.beta), params, curve, state, energy, purity })
}
