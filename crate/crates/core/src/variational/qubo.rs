//! Product-state warm start for QUBO Hamiltonians with an analytic cost.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{CVector, C64};
use crate::models::qubo::QuboSpec;
use crate::variational::optimizer::{minimize, random_params, OptimizerConfig};

/// Cost `sum_{p<q} w_pq cos(theta_p) cos(theta_q) - n/2` of the product state
/// `R_y(theta_0) |0> x ... x R_y(theta_{n-1}) |0>`, and its gradient.
pub fn qubo_cost_and_gradient(theta: &[f64], spec: &QuboSpec) -> Result<(f64, Vec<f64>)> {
    let n = spec.num_vertices();
    if theta.len() != n {
        return Err(Error::Dimension { expected: n, got: theta.len() });
    }
    let cos: Vec<f64> = theta.iter().map(|t| t.cos()).collect();
    let mut cost = -(n as f64) / 2.0;
    let mut field = vec![0.0; n];
    for (p, q, w) in spec.edges() {
        cost += w * cos[p] * cos[q];
        field[p] += w * cos[q];
        field[q] += w * cos[p];
    }
    let grad = theta.iter().zip(&field).map(|(t, f)| -t.sin() * f).collect();
    Ok((cost, grad))
}

/// Statevector of the product ansatz, qubit 0 most significant.
pub fn product_state(theta: &[f64]) -> CVector {
    let mut psi = CVector::from_element(1, C64::new(1.0, 0.0));
    for t in theta {
        let (s, c) = (t / 2.0).sin_cos();
        let mut next = CVector::zeros(psi.len() * 2);
        for (i, &a) in psi.iter().enumerate() {
            next[2 * i] = a * c;
            next[2 * i + 1] = a * s;
        }
        psi = next;
    }
    psi
}

/// `|<z|psi(theta)>|^2` without building the statevector.
pub fn basis_probability(theta: &[f64], bits: usize) -> f64 {
    let n = theta.len();
    theta
        .iter()
        .enumerate()
        .map(|(p, t)| {
            let (s, c) = (t / 2.0).sin_cos();
            if bits >> (n - 1 - p) & 1 == 1 {
                s * s
            } else {
                c * c
            }
        })
        .product()
}

#[derive(Clone, Debug)]
pub struct QuboWarmStart {
    pub theta: Vec<f64>,
    pub cost: f64,
    pub ground_energy: f64,
    pub ground_states: Vec<usize>,
    /// Total probability on the ground bitstrings for the best restart.
    pub overlap: f64,
    /// The same quantity for every restart.
    pub restart_overlaps: Vec<f64>,
}

/// Largest vertex count accepted for brute-force ground-set enumeration.
pub const ENUMERATION_CAP: usize = 24;

/// Adam on the analytic cost from `restarts` random starts; restart `r`
/// draws from stream `r` of a generator seeded with `opt.seed`.
pub fn qubo_warmstart(spec: &QuboSpec, opt: &OptimizerConfig, restarts: usize) -> Result<QuboWarmStart> {
    let n = spec.num_vertices();
    if n > ENUMERATION_CAP {
        return Err(Error::SizeCap { what: "QUBO enumeration", n, cap: ENUMERATION_CAP });
    }
    if restarts == 0 {
        return Err(Error::Invalid("at least one restart is needed".into()));
    }
    let (ground_energy, ground_states) = spec.ground_states(1e-9);
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut restart_overlaps = Vec::with_capacity(restarts);
    for r in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opt.seed);
        rng.set_stream(r as u64);
        let start = random_params(n, &mut rng);
        let (theta, _) = minimize(opt, start, |t| qubo_cost_and_gradient(t, spec))?;
        let overlap: f64 = ground_states.iter().map(|&b| basis_probability(&theta, b)).sum();
        restart_overlaps.push(overlap);
        if best.as_ref().is_none_or(|(_, o)| overlap > *o) {
            best = Some((theta, overlap));
        }
    }
    let (theta, overlap) = best.expect("at least one restart");
    let cost = qubo_cost_and_gradient(&theta, spec)?.0;
    Ok(QuboWarmStart { theta, cost, ground_energy, ground_states, overlap, restart_overlaps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::qubo::qubo_hamiltonian;
    use crate::variational::ansatz::{AnsatzKind, AnsatzSpec};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn plug_in_values() {
        let g = QuboSpec::complete(5);
        let (c, grad) = qubo_cost_and_gradient(&[FRAC_PI_2; 5], &g).unwrap();
        assert!((c + 2.5).abs() < 1e-14);
        assert!(grad.iter().all(|d| d.abs() < 1e-14));
        let (c0, _) = qubo_cost_and_gradient(&[0.0; 5], &g).unwrap();
        assert!((c0 - (10.0 - 2.5)).abs() < 1e-14);
    }

    #[test]
    fn product_state_matches_circuit() {
        let theta = [0.3, 1.7, -2.2, 0.9];
        let circuit = AnsatzSpec::new(AnsatzKind::ProductRy, 4, 0).circuit().unwrap();
        assert!((product_state(&theta) - circuit.run(&theta).unwrap()).norm() < 1e-14);
        let psi = product_state(&theta);
        for b in 0..16 {
            assert!((psi[b].norm_sqr() - basis_probability(&theta, b)).abs() < 1e-14);
        }
    }

    #[test]
    fn two_vertex_warm_start_finds_a_ground_state() {
        let g = QuboSpec::complete(2);
        let out = qubo_warmstart(&g, &OptimizerConfig::default(), 3).unwrap();
        assert_eq!(out.ground_states, vec![0b01, 0b10]);
        assert!((0.0..=1.0 + 1e-12).contains(&out.overlap));
        assert!(out.overlap > 0.99);
        assert!((out.cost - qubo_hamiltonian(&g).unwrap().expectation_vector(&product_state(&out.theta)).unwrap()).abs() < 1e-12);
    }
}
