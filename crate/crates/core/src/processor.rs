//! One round of phase search: the single-ancilla circuit, its measurement,
//! and the collapsed system state.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ONE, ZERO};
use crate::qsp::{find_phase_factors, rz, ry, PhaseFactors};
use crate::sign::{approx_sign, SignApproximation, SignParams, TrigPolynomial};
use crate::spectral::{PhaseMap, UnitarySpectrum};
use crate::state::{QuantumState, PROBABILITY_FLOOR};

/// How a round is simulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Gate-by-gate on the ancilla plus system register.
    Circuit,
    /// Directly in the eigenbasis of the unitary.
    #[default]
    Spectral,
}

/// The sign approximation together with the angles that implement it.
#[derive(Clone, Debug)]
pub struct SignFilter {
    pub approx: SignApproximation,
    pub factors: PhaseFactors,
}

/// Reconstruction tolerance used when synthesizing a filter.
pub const FACTOR_TOL: f64 = 1e-9;

impl SignFilter {
    pub fn build(params: SignParams) -> Result<Self> {
        let approx = approx_sign(params)?;
        let factors = find_phase_factors(&approx.poly, FACTOR_TOL)?;
        Ok(SignFilter { approx, factors })
    }

    pub fn kappa(&self) -> f64 {
        self.approx.params.kappa
    }

    pub fn epsilon(&self) -> f64 {
        self.approx.params.epsilon
    }

    pub fn order(&self) -> usize {
        self.approx.order()
    }

    pub fn poly(&self) -> &TrigPolynomial {
        &self.approx.poly
    }
}

#[derive(Clone, Debug)]
pub struct RoundOutcome {
    pub bit: u8,
    /// Probability of the observed outcome.
    pub probability: f64,
    pub prob_zero: f64,
    pub state: QuantumState,
    /// Some populated eigenphase left the principal range before reduction.
    pub wrapped: bool,
}

/// Both unnormalized branches of a round and the probability of reading 0.
pub fn round_branches(
    unitary: &UnitarySpectrum,
    filter: &SignFilter,
    map: PhaseMap,
    backend: Backend,
    state: &QuantumState,
) -> Result<([QuantumState; 2], f64)> {
    if state.dim() != unitary.dim() {
        return Err(Error::Dimension { expected: unitary.dim(), got: state.dim() });
    }
    match backend {
        Backend::Spectral => spectral_branches(unitary, filter, map, state),
        Backend::Circuit => circuit_branches(unitary, &filter.factors, map, state),
    }
}

/// Runs the round, samples the ancilla and returns the collapsed state.
pub fn run_round<R: Rng + ?Sized>(
    unitary: &UnitarySpectrum,
    filter: &SignFilter,
    map: PhaseMap,
    backend: Backend,
    state: &QuantumState,
    rng: &mut R,
) -> Result<RoundOutcome> {
    let (branches, p0) = round_branches(unitary, filter, map, backend, state)?;
    let p0 = p0.clamp(0.0, 1.0);
    let bit: u8 = if rng.gen::<f64>() < p0 { 0 } else { 1 };
    let probability = if bit == 0 { p0 } else { 1.0 - p0 };
    if probability <= PROBABILITY_FLOOR {
        return Err(Error::Normalization(1.0));
    }
    let [b0, b1] = branches;
    let chosen = if bit == 0 { b0 } else { b1 };
    let pops = unitary.populations(state);
    let wrapped = unitary
        .phases()
        .iter()
        .zip(&pops)
        .any(|(&phi, &w)| w > 1e-12 && map.raw_phase(phi).abs() >= std::f64::consts::PI);
    Ok(RoundOutcome { bit, probability, prob_zero: p0, state: chosen.normalized()?, wrapped })
}

fn spectral_branches(
    unitary: &UnitarySpectrum,
    filter: &SignFilter,
    map: PhaseMap,
    state: &QuantumState,
) -> Result<([QuantumState; 2], f64)> {
    let phases = unitary.mapped_phases(map);
    let amps = filter.factors.ancilla_amplitudes_batch(&phases);
    let pops = unitary.populations(state);
    let p0 = 0.5 * (1.0 + phases.iter().zip(&pops).map(|(&x, &w)| w * filter.poly().eval(x)).sum::<f64>());
    let v = unitary.vectors();
    let branches = match state {
        QuantumState::Pure(psi) => {
            let c = v.adjoint() * psi;
            let make = |k: usize| QuantumState::Pure(v * CVector::from_fn(c.len(), |j, _| amps[j][k] * c[j]));
            [make(0), make(1)]
        }
        QuantumState::Mixed(rho) => {
            let r = linalg::conjugate_into(v, rho);
            let make = |k: usize| {
                let inner = CMatrix::from_fn(r.nrows(), r.ncols(), |i, j| amps[i][k] * r[(i, j)] * amps[j][k].conj());
                QuantumState::Mixed(v * inner * v.adjoint())
            };
            [make(0), make(1)]
        }
    };
    Ok((branches, p0))
}

/// 2x2 gate `Ry(theta) Rz(phi)` as row-major entries.
fn layer_gate(phi: f64, theta: f64) -> [[C64; 2]; 2] {
    let c0 = ry(theta, rz(phi, [ONE, ZERO]));
    let c1 = ry(theta, rz(phi, [ZERO, ONE]));
    [[c0[0], c1[0]], [c0[1], c1[1]]]
}

fn rz_gate(a: f64) -> [[C64; 2]; 2] {
    [[C64::from_polar(1.0, -a / 2.0), ZERO], [ZERO, C64::from_polar(1.0, a / 2.0)]]
}

/// Ancilla-plus-system register stored as blocks by ancilla value.
enum Register {
    Pure([CVector; 2]),
    Mixed([[CMatrix; 2]; 2]),
}

impl Register {
    fn ancilla_gate(&mut self, g: [[C64; 2]; 2]) {
        match self {
            Register::Pure([a0, a1]) => {
                let n0 = &*a0 * g[0][0] + &*a1 * g[0][1];
                let n1 = &*a0 * g[1][0] + &*a1 * g[1][1];
                *a0 = n0;
                *a1 = n1;
            }
            Register::Mixed(blocks) => {
                let old = blocks.clone();
                for a in 0..2 {
                    for b in 0..2 {
                        let mut acc = CMatrix::zeros(old[0][0].nrows(), old[0][0].ncols());
                        for c in 0..2 {
                            for d in 0..2 {
                                let w = g[a][c] * g[b][d].conj();
                                if w != ZERO {
                                    acc += &old[c][d] * w;
                                }
                            }
                        }
                        blocks[a][b] = acc;
                    }
                }
            }
        }
    }

    /// Applies `u` to the system when the ancilla reads `control`.
    fn controlled(&mut self, control: usize, u: &CMatrix) {
        match self {
            Register::Pure(parts) => parts[control] = u * &parts[control],
            Register::Mixed(blocks) => {
                let other = 1 - control;
                blocks[control][control] = u * &blocks[control][control] * u.adjoint();
                blocks[control][other] = u * &blocks[control][other];
                blocks[other][control] = &blocks[other][control] * u.adjoint();
            }
        }
    }
}

fn circuit_branches(
    unitary: &UnitarySpectrum,
    factors: &PhaseFactors,
    map: PhaseMap,
    state: &QuantumState,
) -> Result<([QuantumState; 2], f64)> {
    let u = unitary.dense(map);
    let u_dag = u.adjoint();
    let dim = unitary.dim();
    let mut reg = match state {
        QuantumState::Pure(psi) => Register::Pure([psi.clone(), CVector::zeros(dim)]),
        QuantumState::Mixed(rho) => {
            let z = CMatrix::zeros(dim, dim);
            Register::Mixed([[rho.clone(), z.clone()], [z.clone(), z]])
        }
    };
    let l = factors.order();
    reg.ancilla_gate(layer_gate(factors.phi[l], factors.theta[l]));
    for k in 1..=l {
        if k % 2 == 1 {
            reg.controlled(1, &u);
        } else {
            reg.controlled(0, &u_dag);
        }
        let layer = l - k;
        reg.ancilla_gate(layer_gate(factors.phi[layer], factors.theta[layer]));
    }
    reg.ancilla_gate(rz_gate(factors.omega));
    Ok(match reg {
        Register::Pure([a0, a1]) => {
            let p0 = a0.norm_squared();
            ([QuantumState::Pure(a0), QuantumState::Pure(a1)], p0)
        }
        Register::Mixed(blocks) => {
            let [[r00, _], [_, r11]] = blocks;
            let p0 = linalg::trace(&r00).re;
            ([QuantumState::Mixed(r00), QuantumState::Mixed(r11)], p0)
        }
    })
}

/// The two measurement maps with real eigenvector weights
/// `sqrt((1 +- f(phase)) / 2)`, applied to a possibly unnormalized state.
pub fn measurement_maps(
    unitary: &UnitarySpectrum,
    f: &TrigPolynomial,
    map: PhaseMap,
    state: &QuantumState,
) -> Result<[QuantumState; 2]> {
    if state.dim() != unitary.dim() {
        return Err(Error::Dimension { expected: unitary.dim(), got: state.dim() });
    }
    let weights: Vec<[f64; 2]> = unitary
        .mapped_phases(map)
        .iter()
        .map(|&x| {
            let v = f.eval(x);
            [((1.0 + v) / 2.0).max(0.0).sqrt(), ((1.0 - v) / 2.0).max(0.0).sqrt()]
        })
        .collect();
    let v = unitary.vectors();
    let out = match state {
        QuantumState::Pure(psi) => {
            let c = v.adjoint() * psi;
            let make = |k: usize| QuantumState::Pure(v * CVector::from_fn(c.len(), |j, _| c[j] * weights[j][k]));
            [make(0), make(1)]
        }
        QuantumState::Mixed(rho) => {
            let r = linalg::conjugate_into(v, rho);
            let make = |k: usize| {
                let inner = CMatrix::from_fn(r.nrows(), r.ncols(), |i, j| r[(i, j)] * (weights[i][k] * weights[j][k]));
                QuantumState::Mixed(v * inner * v.adjoint())
            };
            [make(0), make(1)]
        }
    };
    Ok(out)
}
