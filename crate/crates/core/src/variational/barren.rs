//! Gradient variance of random shallow circuits.

use std::f64::consts::FRAC_PI_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::CVector;
use crate::variational::ansatz::{AnsatzKind, AnsatzSpec};
use crate::variational::optimizer::random_params;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VarianceRow {
    pub qubits: usize,
    pub samples: usize,
    pub mean: f64,
    pub variance: f64,
}

/// `<Z_0 Z_1>`.
fn leading_zz(psi: &CVector, n: usize) -> f64 {
    let mask = 0b11 << (n - 2);
    psi.iter()
        .enumerate()
        .map(|(b, a)| {
            let parity = (b & mask).count_ones() % 2;
            if parity == 0 {
                a.norm_sqr()
            } else {
                -a.norm_sqr()
            }
        })
        .sum()
}

/// Sample variance of the derivative of `<Z_0 Z_1>` with respect to the first
/// parameter of a hardware-efficient circuit, over uniform random parameters.
/// Size `n` draws from stream `n` of a generator seeded with `seed`.
pub fn gradient_variance(qubits: usize, depth: usize, samples: usize, seed: u64) -> Result<VarianceRow> {
    if qubits < 2 {
        return Err(Error::Invalid("the observable needs at least two qubits".into()));
    }
    if samples < 2 {
        return Err(Error::Invalid("a variance needs at least two samples".into()));
    }
    let circuit = AnsatzSpec::new(AnsatzKind::Hea, qubits, depth).circuit()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(qubits as u64);
    let mut grads = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut params = random_params(circuit.num_params, &mut rng);
        let base = params[0];
        params[0] = base + FRAC_PI_2;
        let plus = leading_zz(&circuit.run(&params)?, qubits);
        params[0] = base - FRAC_PI_2;
        let minus = leading_zz(&circuit.run(&params)?, qubits);
        grads.push((plus - minus) / 2.0);
    }
    let mean = grads.iter().sum::<f64>() / samples as f64;
    let variance = grads.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
    Ok(VarianceRow { qubits, samples, mean, variance })
}

pub fn gradient_variance_experiment(sizes: &[usize], depth: usize, samples: usize, seed: u64) -> Result<Vec<VarianceRow>> {
    sizes.iter().map(|&n| gradient_variance(n, depth, samples, seed)).collect()
}

/// Least-squares slope of `log2(variance)` against qubit count.
pub fn log2_slope(rows: &[VarianceRow]) -> Result<f64> {
    if rows.len() < 2 {
        return Err(Error::Invalid("a slope needs at least two sizes".into()));
    }
    if rows.iter().any(|r| !(r.variance > 0.0)) {
        return Err(Error::Invalid("variances must be positive to take logarithms".into()));
    }
    let k = rows.len() as f64;
    let xs: Vec<f64> = rows.iter().map(|r| r.qubits as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.variance.log2()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_exponential() {
        let rows: Vec<VarianceRow> =
            (2..6).map(|n| VarianceRow { qubits: n, samples: 2, mean: 0.0, variance: 0.5f64.powi(n as i32) }).collect();
        assert!((log2_slope(&rows).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn variance_is_positive_and_reproducible() {
        let a = gradient_variance_experiment(&[2, 4], 3, 50, 7).unwrap();
        assert_eq!(a, gradient_variance_experiment(&[2, 4], 3, 50, 7).unwrap());
        assert!(a.iter().all(|r| r.variance > 0.0));
    }
}
