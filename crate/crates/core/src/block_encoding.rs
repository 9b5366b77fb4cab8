//! Block encoding of a Pauli sum by linear combination of unitaries.
//!
//! The ancilla register (leading qubits) is prepared with amplitudes
//! `sqrt(|a_k| / alpha)`, each Pauli string is applied with its sign under
//! control of ancilla value `k`, and the preparation is undone. A reflection
//! about `|0...0>` on the ancillas closes the walk, so on each two-dimensional
//! invariant subspace spanned by `|0>|psi_j>` the unitary is a rotation with
//! eigenphases `+-tau_j`, `cos tau_j = lambda_j / alpha`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::pauli::{PauliString, PauliSum, DENSE_CAP};
use crate::spectral::UnitarySpectrum;

#[derive(Clone, Debug, Serialize)]
pub struct BlockEncoding {
    pub ancillas: usize,
    pub system: usize,
    pub alpha: f64,
    /// Prepared ancilla amplitudes, padded to `2^ancillas`.
    pub prepare: Vec<f64>,
    /// Pauli strings with the sign of their coefficient.
    #[serde(skip)]
    pub terms: Vec<(PauliString, f64)>,
}

pub fn build_block_encoding(h: &PauliSum) -> Result<BlockEncoding> {
    let terms: Vec<(PauliString, f64)> = h.terms().filter(|(_, c)| *c != 0.0).map(|(p, c)| (p.clone(), c)).collect();
    if terms.is_empty() {
        return Err(Error::Invalid("cannot block-encode the zero operator".into()));
    }
    let alpha: f64 = terms.iter().map(|(_, c)| c.abs()).sum();
    let ancillas = if terms.len() == 1 { 0 } else { (usize::BITS - (terms.len() - 1).leading_zeros()) as usize };
    let mut prepare = vec![0.0; 1 << ancillas];
    for (k, (_, c)) in terms.iter().enumerate() {
        prepare[k] = (c.abs() / alpha).sqrt();
    }
    let system = h.num_qubits();
    if ancillas + system > DENSE_CAP {
        return Err(Error::SizeCap { what: "block encoding", n: ancillas + system, cap: DENSE_CAP });
    }
    let terms = terms.into_iter().map(|(p, c)| (p, c.signum())).collect();
    Ok(BlockEncoding { ancillas, system, alpha, prepare, terms })
}

impl BlockEncoding {
    pub fn total_qubits(&self) -> usize {
        self.ancillas + self.system
    }

    /// Householder reflection sending `|0>` to the prepared amplitudes.
    fn prepare_matrix(&self) -> CMatrix {
        let d = self.prepare.len();
        let mut u: Vec<f64> = self.prepare.iter().map(|a| -a).collect();
        u[0] += 1.0;
        let norm2: f64 = u.iter().map(|x| x * x).sum();
        CMatrix::from_fn(d, d, |i, j| {
            let delta = if i == j { 1.0 } else { 0.0 };
            let h = if norm2 > 1e-30 { delta - 2.0 * u[i] * u[j] / norm2 } else { delta };
            C64::new(h, 0.0)
        })
    }

    /// Dense unitary on ancillas followed by the system.
    pub fn unitary(&self) -> Result<CMatrix> {
        let sd = 1usize << self.system;
        let ad = self.prepare.len();
        let prep = self.prepare_matrix().kronecker(&CMatrix::identity(sd, sd));
        let mut select = CMatrix::zeros(ad * sd, ad * sd);
        for k in 0..ad {
            let block = match self.terms.get(k) {
                Some((p, sign)) => {
                    let mut single = PauliSum::new(self.system);
                    single.add_term(p.clone(), *sign)?;
                    single.to_dense()?
                }
                None => CMatrix::identity(sd, sd),
            };
            select.view_mut((k * sd, k * sd), (sd, sd)).copy_from(&block);
        }
        let walk = &prep * select * &prep;
        // Reflection 2|0><0| - I on the ancillas.
        let mut out = -walk.clone();
        out.rows_mut(0, sd).copy_from(&walk.rows(0, sd));
        Ok(out)
    }

    /// The top-left system block, which equals `H / alpha`.
    pub fn corner(&self) -> Result<CMatrix> {
        let sd = 1usize << self.system;
        Ok(self.unitary()?.view((0, 0), (sd, sd)).into_owned())
    }

    pub fn spectrum(&self) -> Result<UnitarySpectrum> {
        UnitarySpectrum::from_unitary(&self.unitary()?)
    }
}

/// Maps a block-encoding eigenphase to the energy it encodes.
pub fn phase_to_energy(tau: f64, alpha: f64) -> f64 {
    alpha * tau.cos()
}
