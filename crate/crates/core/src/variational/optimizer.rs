//! Adam and parameter initialization.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub learning_rate: f64,
    pub iterations: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig { learning_rate: 0.1, iterations: 200, beta1: 0.9, beta2: 0.999, epsilon: 1e-8, seed: 0 }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) {
            return Err(Error::Invalid("learning rate must be positive".into()));
        }
        if self.iterations == 0 {
            return Err(Error::Invalid("at least one iteration is needed".into()));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return Err(Error::Invalid("moment decay rates must lie in [0, 1)".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Invalid("Adam epsilon must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Adam {
    cfg: OptimizerConfig,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    pub fn new(cfg: OptimizerConfig, dim: usize) -> Self {
        Adam { cfg, m: vec![0.0; dim], v: vec![0.0; dim], t: 0 }
    }

    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) {
        let OptimizerConfig { learning_rate, beta1, beta2, epsilon, .. } = self.cfg;
        self.t += 1;
        let c1 = 1.0 - beta1.powi(self.t);
        let c2 = 1.0 - beta2.powi(self.t);
        for i in 0..params.len() {
            self.m[i] = beta1 * self.m[i] + (1.0 - beta1) * grad[i];
            self.v[i] = beta2 * self.v[i] + (1.0 - beta2) * grad[i] * grad[i];
            let m_hat = self.m[i] / c1;
            let v_hat = self.v[i] / c2;
            params[i] -= learning_rate * m_hat / (v_hat.sqrt() + epsilon);
        }
    }
}

/// Independent uniform draws from `[0, 2 pi)`.
pub fn random_params<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<f64> {
    (0..count).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect()
}

/// Runs Adam on `f`, which returns the value and gradient. The curve records
/// the value before every step and after the last.
pub fn minimize<F>(cfg: &OptimizerConfig, mut params: Vec<f64>, mut f: F) -> Result<(Vec<f64>, Vec<f64>)>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    cfg.validate()?;
    let mut adam = Adam::new(*cfg, params.len());
    let mut curve = Vec::with_capacity(cfg.iterations + 1);
    for _ in 0..cfg.iterations {
        let (value, grad) = f(&params)?;
        curve.push(value);
        adam.step(&mut params, &grad);
    }
    curve.push(f(&params)?.0);
    Ok((params, curve))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_moves_by_learning_rate() {
        let cfg = OptimizerConfig::default();
        let mut adam = Adam::new(cfg, 2);
        let mut p = vec![1.0, -1.0];
        adam.step(&mut p, &[3.0, -0.5]);
        assert!((p[0] - 0.9).abs() < 1e-8 && (p[1] + 0.9).abs() < 1e-8);
    }

    #[test]
    fn minimizes_quadratic() {
        let cfg = OptimizerConfig { iterations: 500, ..Default::default() };
        let (p, curve) = minimize(&cfg, vec![2.0, -3.0], |x| {
            Ok(((x[0] - 1.0).powi(2) + x[1] * x[1], vec![2.0 * (x[0] - 1.0), 2.0 * x[1]]))
        })
        .unwrap();
        assert!((p[0] - 1.0).abs() < 1e-3 && p[1].abs() < 1e-3);
        assert_eq!(curve.len(), 501);
        assert!(curve[500] < curve[0]);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(OptimizerConfig { learning_rate: 0.0, ..Default::default() }.validate().is_err());
        assert!(OptimizerConfig { iterations: 0, ..Default::default() }.validate().is_err());
    }
}
