//! Variational energy minimization with parameter-shift gradients.

use std::f64::consts::FRAC_PI_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::CVector;
use crate::pauli::PauliSum;
use crate::variational::ansatz::{AnsatzSpec, Circuit};
use crate::variational::optimizer::{minimize, random_params, OptimizerConfig};

/// Quantity minimized over circuit parameters.
#[derive(Clone, Debug)]
pub enum Objective {
    /// `<psi|H|psi>`.
    Energy(PauliSum),
    /// `<psi|P H P|psi> / <psi|P|psi>` with `P` the projector onto basis
    /// states with `occupation` ones.
    FixedOccupation { h: PauliSum, occupation: usize },
}

impl Objective {
    pub fn num_qubits(&self) -> usize {
        match self {
            Objective::Energy(h) | Objective::FixedOccupation { h, .. } => h.num_qubits(),
        }
    }

    /// Numerator and denominator, each the expectation of a Hermitian observable.
    fn parts(&self, psi: &CVector) -> Result<[f64; 2]> {
        match self {
            Objective::Energy(h) => Ok([h.expectation_vector(psi)?, 1.0]),
            Objective::FixedOccupation { h, occupation } => {
                let projected = project_occupation(psi, *occupation);
                Ok([h.expectation_vector(&projected)?, projected.norm_squared()])
            }
        }
    }

    pub fn value(&self, psi: &CVector) -> Result<f64> {
        let [num, den] = self.parts(psi)?;
        if den <= 0.0 {
            return Err(Error::Invalid("state has no weight in the target occupation".into()));
        }
        Ok(num / den)
    }
}

/// Zeroes every amplitude whose basis state has the wrong number of ones.
pub fn project_occupation(psi: &CVector, occupation: usize) -> CVector {
    CVector::from_iterator(
        psi.len(),
        psi.iter()
            .enumerate()
            .map(|(b, &a)| if b.count_ones() as usize == occupation { a } else { crate::linalg::ZERO }),
    )
}

/// Value and gradient. Every parameter drives a single rotation, so each
/// observable's derivative is half the difference at shifts of `+-pi/2`; the
/// ratio is differentiated with the quotient rule.
pub fn shift_gradient(circuit: &Circuit, objective: &Objective, params: &[f64]) -> Result<(f64, Vec<f64>)> {
    let [num, den] = objective.parts(&circuit.run(params)?)?;
    if den <= 1e-300 {
        return Err(Error::Invalid("state has no weight in the target occupation".into()));
    }
    let mut shifted = params.to_vec();
    let mut grad = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        shifted[i] = params[i] + FRAC_PI_2;
        let plus = objective.parts(&circuit.run(&shifted)?)?;
        shifted[i] = params[i] - FRAC_PI_2;
        let minus = objective.parts(&circuit.run(&shifted)?)?;
        shifted[i] = params[i];
        let d_num = (plus[0] - minus[0]) / 2.0;
        let d_den = (plus[1] - minus[1]) / 2.0;
        grad.push((d_num * den - num * d_den) / (den * den));
    }
    Ok((num / den, grad))
}

#[derive(Clone, Debug)]
pub struct VqeOutcome {
    pub params: Vec<f64>,
    /// Objective before each update, then after the last.
    pub curve: Vec<f64>,
    pub state: CVector,
    pub value: f64,
}

/// Adam from uniform random parameters seeded by `opt.seed`.
pub fn vqe_minimize(objective: &Objective, spec: &AnsatzSpec, opt: &OptimizerConfig) -> Result<VqeOutcome> {
    if spec.qubits != objective.num_qubits() {
        return Err(Error::Dimension { expected: objective.num_qubits(), got: spec.qubits });
    }
    let circuit = spec.circuit()?;
    let mut rng = ChaCha8Rng::seed_from_u64(opt.seed);
    let start = random_params(circuit.num_params, &mut rng);
    let (params, curve) = minimize(opt, start, |p| shift_gradient(&circuit, objective, p))?;
    let state = circuit.run(&params)?;
    let value = *curve.last().expect("curve is never empty");
    Ok(VqeOutcome { params, curve, state, value })
}
