//! Restriction of number-conserving operators to fixed particle number.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix, CVector};
use crate::pauli::PauliSum;

/// Largest register for which blocks are built.
pub const BLOCK_CAP: usize = 20;

#[derive(Clone, Debug)]
pub struct RestrictedOperator {
    pub num_qubits: usize,
    pub occupation: usize,
    /// Basis states of the block in increasing order.
    pub basis: Vec<usize>,
    pub matrix: CMatrix,
}

/// Block of `h` on the span of basis states with `occupation` ones.
pub fn occupation_project(h: &PauliSum, occupation: usize) -> Result<RestrictedOperator> {
    let n = h.num_qubits();
    if occupation > n {
        return Err(Error::Invalid(format!("occupation {occupation} outside [0, {n}]")));
    }
    if n > BLOCK_CAP {
        return Err(Error::SizeCap { what: "occupation block", n, cap: BLOCK_CAP });
    }
    let basis: Vec<usize> = (0..1usize << n).filter(|b| b.count_ones() as usize == occupation).collect();
    let mut position = vec![usize::MAX; 1 << n];
    for (i, &b) in basis.iter().enumerate() {
        position[b] = i;
    }
    let mut matrix = CMatrix::zeros(basis.len(), basis.len());
    for (p, c) in h.terms() {
        let act = p.masks();
        for (col, &b) in basis.iter().enumerate() {
            let row = position[b ^ act.flip];
            if row != usize::MAX {
                matrix[(row, col)] += act.coefficient(b) * c;
            }
        }
    }
    Ok(RestrictedOperator { num_qubits: n, occupation, basis, matrix })
}

impl RestrictedOperator {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Lowest eigenvalue and its eigenvector in block coordinates.
    pub fn ground(&self) -> Result<(f64, CVector)> {
        let (values, vectors) = hermitian_eigen(&self.matrix)?;
        Ok((values[0], vectors.column(0).into_owned()))
    }

    /// Lifts block coordinates to the full register.
    pub fn embed(&self, v: &CVector) -> Result<CVector> {
        if v.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: v.len() });
        }
        let mut out = CVector::zeros(1 << self.num_qubits);
        for (i, &b) in self.basis.iter().enumerate() {
            out[b] = v[i];
        }
        Ok(out)
    }

    /// Block coordinates of a full-register vector.
    pub fn restrict(&self, v: &CVector) -> Result<CVector> {
        if v.len() != 1 << self.num_qubits {
            return Err(Error::Dimension { expected: 1 << self.num_qubits, got: v.len() });
        }
        Ok(CVector::from_iterator(self.dim(), self.basis.iter().map(|&b| v[b])))
    }
}

/// Ground energy of every occupation block, indexed by particle number.
pub fn block_ground_energies(h: &PauliSum) -> Result<Vec<f64>> {
    (0..=h.num_qubits()).map(|k| Ok(occupation_project(h, k)?.ground()?.0)).collect()
}

/// `mu(N) = E(N) - E(N - 1)` for `N = 1..`.
pub fn chemical_potentials(energies: &[f64]) -> Vec<f64> {
    energies.windows(2).map(|w| w[1] - w[0]).collect()
}
