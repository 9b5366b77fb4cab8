//! Pure and mixed states on a register of known dimension.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ONE, ZERO};

/// Probabilities below this are treated as an impossible outcome.
pub const PROBABILITY_FLOOR: f64 = 1e-14;
const NORM_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState {
    Pure(CVector),
    Mixed(CMatrix),
}

#[derive(Clone, Debug)]
pub struct Measurement {
    pub bit: u8,
    pub probability: f64,
    pub state: QuantumState,
}

pub fn qubit_count(dim: usize) -> Option<usize> {
    if dim.is_power_of_two() {
        Some(dim.trailing_zeros() as usize)
    } else {
        None
    }
}

impl QuantumState {
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::Invalid(format!("basis index {index} outside {n} qubits")));
        }
        let mut v = CVector::zeros(dim);
        v[index] = ONE;
        Ok(QuantumState::Pure(v))
    }

    pub fn from_amplitudes(amps: CVector) -> Result<Self> {
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization((norm - 1.0).abs()));
        }
        Ok(QuantumState::Pure(amps))
    }

    pub fn from_density(rho: CMatrix) -> Result<Self> {
        let tr = linalg::trace(&rho);
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::Normalization((tr - ONE).norm()));
        }
        let defect = linalg::hermiticity_defect(&rho);
        if defect > NORM_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(QuantumState::Mixed(rho))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let dim = 1usize << n;
        QuantumState::Mixed(CMatrix::identity(dim, dim).scale(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        match self {
            QuantumState::Pure(v) => v.len(),
            QuantumState::Mixed(m) => m.nrows(),
        }
    }

    pub fn num_qubits(&self) -> Option<usize> {
        qubit_count(self.dim())
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, QuantumState::Pure(_))
    }

    pub fn density(&self) -> CMatrix {
        match self {
            QuantumState::Pure(v) => linalg::outer(v, v),
            QuantumState::Mixed(m) => m.clone(),
        }
    }

    pub fn norm_squared(&self) -> f64 {
        match self {
            QuantumState::Pure(v) => v.norm_squared(),
            QuantumState::Mixed(m) => linalg::trace(m).re,
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let w = self.norm_squared();
        if w <= PROBABILITY_FLOOR {
            return Err(Error::Normalization(1.0 - w));
        }
        Ok(match self {
            QuantumState::Pure(v) => QuantumState::Pure(v.unscale(w.sqrt())),
            QuantumState::Mixed(m) => QuantumState::Mixed(m.unscale(w)),
        })
    }

    pub fn apply_unitary(&self, u: &CMatrix) -> Result<Self> {
        if u.ncols() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: u.ncols() });
        }
        Ok(match self {
            QuantumState::Pure(v) => QuantumState::Pure(u * v),
            QuantumState::Mixed(m) => QuantumState::Mixed(u * m * u.adjoint()),
        })
    }

    /// `tr(rho A)` for a Hermitian `A`.
    pub fn expectation(&self, a: &CMatrix) -> Result<f64> {
        if a.nrows() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: a.nrows() });
        }
        Ok(match self {
            QuantumState::Pure(v) => v.dotc(&(a * v)).re,
            QuantumState::Mixed(m) => linalg::trace(&(m * a)).re,
        })
    }

    /// `|0...0><0...0|` on `m` fresh qubits in front of this state.
    pub fn with_leading_zeros(&self, m: usize) -> Self {
        let dim = self.dim();
        match self {
            QuantumState::Pure(v) => {
                let mut out = CVector::zeros(dim << m);
                out.rows_mut(0, dim).copy_from(v);
                QuantumState::Pure(out)
            }
            QuantumState::Mixed(rho) => {
                let mut out = CMatrix::zeros(dim << m, dim << m);
                out.view_mut((0, 0), (dim, dim)).copy_from(rho);
                QuantumState::Mixed(out)
            }
        }
    }

    /// Probability that qubit `q` reads 0.
    pub fn probability_zero(&self, q: usize) -> Result<f64> {
        let n = self.require_qubits()?;
        if q >= n {
            return Err(Error::QubitIndex { index: q, n });
        }
        let bit = 1usize << (n - 1 - q);
        Ok(match self {
            QuantumState::Pure(v) => {
                v.iter().enumerate().filter(|(b, _)| b & bit == 0).map(|(_, a)| a.norm_sqr()).sum()
            }
            QuantumState::Mixed(m) => (0..m.nrows()).filter(|b| b & bit == 0).map(|b| m[(b, b)].re).sum(),
        })
    }

    /// Projective Z measurement of qubit `q` with the post-measurement state.
    pub fn measure_qubit<R: Rng + ?Sized>(&self, q: usize, rng: &mut R) -> Result<Measurement> {
        let p0 = self.probability_zero(q)?;
        let total = self.norm_squared();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization((total - 1.0).abs()));
        }
        let p1 = (total - p0).max(0.0);
        let bit: u8 = if rng.gen::<f64>() < p0 { 0 } else { 1 };
        let prob = if bit == 0 { p0 } else { p1 };
        if prob <= PROBABILITY_FLOOR {
            return Err(Error::Normalization(1.0));
        }
        let state = self.project_qubit(q, bit)?.normalized()?;
        Ok(Measurement { bit, probability: prob, state })
    }

    /// Unnormalized projection of qubit `q` onto `|bit>`.
    pub fn project_qubit(&self, q: usize, bit: u8) -> Result<Self> {
        let n = self.require_qubits()?;
        if q >= n {
            return Err(Error::QubitIndex { index: q, n });
        }
        let mask = 1usize << (n - 1 - q);
        let keep = |b: usize| ((b & mask) != 0) == (bit == 1);
        Ok(match self {
            QuantumState::Pure(v) => {
                QuantumState::Pure(CVector::from_fn(v.len(), |b, _| if keep(b) { v[b] } else { ZERO }))
            }
            QuantumState::Mixed(m) => QuantumState::Mixed(CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
                if keep(i) && keep(j) {
                    m[(i, j)]
                } else {
                    ZERO
                }
            })),
        })
    }

    /// Unnormalized projection onto basis states below `len` (`inside`) or
    /// onto the rest. With `len = 2^(n-m)` this asks whether the leading `m`
    /// qubits are all zero.
    pub fn project_prefix(&self, len: usize, inside: bool) -> Self {
        let keep = |b: usize| (b < len) == inside;
        match self {
            QuantumState::Pure(v) => QuantumState::Pure(CVector::from_fn(v.len(), |b, _| if keep(b) { v[b] } else { ZERO })),
            QuantumState::Mixed(m) => QuantumState::Mixed(CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
                if keep(i) && keep(j) {
                    m[(i, j)]
                } else {
                    ZERO
                }
            })),
        }
    }

    /// Reduced state on the qubits in `keep`, listed in increasing order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let n = self.require_qubits()?;
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != keep.len() || sorted.iter().any(|&q| q >= n) {
            return Err(Error::Invalid(format!("bad qubit list {keep:?} for {n} qubits")));
        }
        let traced: Vec<usize> = (0..n).filter(|q| !sorted.contains(q)).collect();
        let k = sorted.len();
        let e = traced.len();
        let compose = |kept: usize, env: usize| -> usize {
            let mut idx = 0usize;
            for (pos, &q) in sorted.iter().enumerate() {
                if kept >> (k - 1 - pos) & 1 == 1 {
                    idx |= 1 << (n - 1 - q);
                }
            }
            for (pos, &q) in traced.iter().enumerate() {
                if env >> (e - 1 - pos) & 1 == 1 {
                    idx |= 1 << (n - 1 - q);
                }
            }
            idx
        };
        let kd = 1usize << k;
        let ed = 1usize << e;
        let mut out = CMatrix::zeros(kd, kd);
        match self {
            QuantumState::Pure(v) => {
                for env in 0..ed {
                    let col = CVector::from_fn(kd, |i, _| v[compose(i, env)]);
                    out += &col * col.adjoint();
                }
            }
            QuantumState::Mixed(m) => {
                for i in 0..kd {
                    for j in 0..kd {
                        let mut acc = ZERO;
                        for env in 0..ed {
                            acc += m[(compose(i, env), compose(j, env))];
                        }
                        out[(i, j)] = acc;
                    }
                }
            }
        }
        Ok(QuantumState::Mixed(out))
    }

    pub fn trace_distance(&self, other: &QuantumState) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: other.dim() });
        }
        linalg::trace_distance(&self.density(), &other.density())
    }

    /// Purity `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        match self {
            QuantumState::Pure(v) => v.norm_squared().powi(2),
            QuantumState::Mixed(m) => m.iter().map(|z| z.norm_sqr()).sum(),
        }
    }

    /// Pure components `(weight, vector)` of the state, dropping negligible weights.
    pub fn components(&self) -> Result<Vec<(f64, CVector)>> {
        match self {
            QuantumState::Pure(v) => Ok(vec![(1.0, v.clone())]),
            QuantumState::Mixed(m) => {
                let (vals, vecs) = linalg::hermitian_eigen(m)?;
                Ok(vals
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| w > PROBABILITY_FLOOR)
                    .map(|(j, &w)| (w, vecs.column(j).into_owned()))
                    .collect())
            }
        }
    }

    fn require_qubits(&self) -> Result<usize> {
        self.num_qubits()
            .ok_or_else(|| Error::Invalid(format!("dimension {} is not a qubit register", self.dim())))
    }
}

/// Computational-basis vector with the listed qubits set to one.
pub fn occupation_basis(n: usize, occupied: &[usize]) -> Result<QuantumState> {
    let mut index = 0usize;
    for &q in occupied {
        if q >= n {
            return Err(Error::QubitIndex { index: q, n });
        }
        let bit = 1 << (n - 1 - q);
        if index & bit != 0 {
            return Err(Error::Invalid(format!("orbital {q} listed twice")));
        }
        index |= bit;
    }
    QuantumState::basis(n, index)
}

/// Overlap magnitude of two pure vectors.
pub fn overlap(a: &CVector, b: &CVector) -> f64 {
    a.dotc(b).norm()
}

pub fn complex(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bell() -> QuantumState {
        let s = 0.5f64.sqrt();
        QuantumState::Pure(CVector::from_vec(vec![complex(s, 0.0), ZERO, ZERO, complex(s, 0.0)]))
    }

    #[test]
    fn bell_pair_reduces_to_maximally_mixed() {
        let red = bell().partial_trace(&[0]).unwrap();
        let target = QuantumState::maximally_mixed(1);
        assert!(red.trace_distance(&target).unwrap() < 1e-12);
    }

    #[test]
    fn partial_trace_keeps_requested_order() {
        // |0>|1>|+> keeping qubits 0 and 1 gives |01><01|.
        let s = 0.5f64.sqrt();
        let mut v = CVector::zeros(8);
        v[0b010] = complex(s, 0.0);
        v[0b011] = complex(s, 0.0);
        let red = QuantumState::Pure(v).partial_trace(&[0, 1]).unwrap().density();
        assert!((red[(1, 1)].re - 1.0).abs() < 1e-12);
        let red2 = QuantumState::Pure({
            let mut w = CVector::zeros(8);
            w[0b010] = ONE;
            w
        })
        .partial_trace(&[1])
        .unwrap()
        .density();
        assert!((red2[(1, 1)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measurement_collapses_bell_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = bell().measure_qubit(0, &mut rng).unwrap();
            assert!((m.probability - 0.5).abs() < 1e-12);
            let again = m.state.measure_qubit(1, &mut rng).unwrap();
            assert_eq!(again.bit, m.bit);
            assert!((again.probability - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn occupation_basis_is_big_endian() {
        let s = occupation_basis(8, &[0, 1, 2, 3]).unwrap();
        match s {
            QuantumState::Pure(v) => assert_eq!(v[0b1111_0000], ONE),
            _ => unreachable!(),
        }
    }

    #[test]
    fn unnormalized_input_rejected() {
        assert!(QuantumState::from_amplitudes(CVector::from_element(2, ONE)).is_err());
    }
}
