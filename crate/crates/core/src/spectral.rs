//! Exact spectra of Hermitian operators and of the unitaries built from them.

use nalgebra::Schur;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, wrap_phase, CMatrix, CVector, C64};
use crate::pauli::PauliSum;
use crate::state::QuantumState;

/// Eigenvalues closer than this are one degenerate level.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Largest register handed to the dense eigensolver.
pub const DIAGONALIZE_CAP: usize = 14;

#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn from_hermitian(m: &CMatrix) -> Result<Self> {
        let defect = linalg::hermiticity_defect(m);
        if defect > 1e-10 {
            return Err(Error::NotHermitian(defect));
        }
        let (eigenvalues, eigenvectors) = linalg::hermitian_eigen(m)?;
        Ok(SpectralDecomposition { eigenvalues, eigenvectors })
    }

    pub fn diagonalize(h: &PauliSum) -> Result<Self> {
        if h.num_qubits() > DIAGONALIZE_CAP {
            return Err(Error::SizeCap { what: "diagonalization", n: h.num_qubits(), cap: DIAGONALIZE_CAP });
        }
        Self::from_hermitian(&h.to_dense()?)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn ground_degeneracy(&self) -> usize {
        let e0 = self.eigenvalues[0];
        self.eigenvalues.iter().take_while(|&&e| e - e0 <= DEGENERACY_TOL).count()
    }

    /// Distance from the ground level to the next distinct level.
    pub fn gap(&self) -> Option<f64> {
        let d = self.ground_degeneracy();
        self.eigenvalues.get(d).map(|e| e - self.eigenvalues[0])
    }

    pub fn ground_vector(&self) -> CVector {
        self.eigenvectors.column(0).into_owned()
    }

    /// Projector onto the whole ground eigenspace.
    pub fn ground_projector(&self) -> CMatrix {
        let d = self.ground_degeneracy();
        let v = self.eigenvectors.columns(0, d);
        &v * v.adjoint()
    }

    /// `tr(rho Pi)` for the ground projector `Pi`.
    pub fn ground_weight(&self, state: &QuantumState) -> Result<f64> {
        if state.dim() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: state.dim() });
        }
        let d = self.ground_degeneracy();
        let v = self.eigenvectors.columns(0, d);
        Ok(match state {
            QuantumState::Pure(psi) => (v.adjoint() * psi).norm_squared(),
            QuantumState::Mixed(rho) => linalg::trace(&(v.adjoint() * rho * v)).re,
        })
    }

    /// Square root of the ground weight.
    pub fn ground_overlap(&self, state: &QuantumState) -> Result<f64> {
        Ok(self.ground_weight(state)?.max(0.0).sqrt())
    }

    /// Diagonal of `V^dagger rho V`: the weight on each eigenvector.
    pub fn populations(&self, state: &QuantumState) -> Vec<f64> {
        eigen_populations(&self.eigenvectors, state)
    }

    pub fn reconstruct(&self) -> CMatrix {
        let d: Vec<C64> = self.eigenvalues.iter().map(|&e| C64::new(e, 0.0)).collect();
        linalg::from_spectrum(&self.eigenvectors, &d)
    }
}

pub(crate) fn eigen_populations(vectors: &CMatrix, state: &QuantumState) -> Vec<f64> {
    match state {
        QuantumState::Pure(psi) => (vectors.adjoint() * psi).iter().map(|z| z.norm_sqr()).collect(),
        QuantumState::Mixed(rho) => {
            let r = linalg::conjugate_into(vectors, rho);
            (0..r.nrows()).map(|j| r[(j, j)].re).collect()
        }
    }
}

/// A unitary stored through its eigenphases: `U = sum_j e^{i phi_j} |v_j><v_j|`.
#[derive(Clone, Debug)]
pub struct UnitarySpectrum {
    phases: Vec<f64>,
    vectors: CMatrix,
}

/// `e^{-i shift} U^power`, the form every phase-search round applies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseMap {
    pub power: u64,
    pub shift: f64,
}

impl PhaseMap {
    pub const IDENTITY: PhaseMap = PhaseMap { power: 1, shift: 0.0 };

    /// `e^{-i x} self`.
    pub fn shifted(self, x: f64) -> PhaseMap {
        PhaseMap { power: self.power, shift: wrap_phase(self.shift + x) }
    }

    /// `self^k`.
    pub fn pow(self, k: u64) -> PhaseMap {
        PhaseMap {
            power: self.power * k,
            shift: wrap_phase(reduced_product(k, self.shift)),
        }
    }

    /// `power * phi - shift` before reduction mod 2 pi.
    pub fn raw_phase(self, phi: f64) -> f64 {
        self.power as f64 * phi - self.shift
    }

    /// Eigenphase of the mapped unitary for a base eigenphase `phi`.
    pub fn phase(self, phi: f64) -> f64 {
        wrap_phase(reduced_product(self.power, phi) - self.shift)
    }
}

fn reduced_product(k: u64, x: f64) -> f64 {
    wrap_phase(k as f64 * wrap_phase(x))
}

impl UnitarySpectrum {
    /// `e^{i t H}` for a diagonalized `H`.
    pub fn evolution(h: &SpectralDecomposition, t: f64) -> Self {
        UnitarySpectrum {
            phases: h.eigenvalues.iter().map(|&e| wrap_phase(t * e)).collect(),
            vectors: h.eigenvectors.clone(),
        }
    }

    /// Eigendecomposition of a dense unitary.
    ///
    /// A unitary is normal, so it shares eigenvectors with the Hermitian
    /// pencil `Re U + c Im U`. Clusters of nearly equal pencil eigenvalues are
    /// split by a small Schur step; the full Schur form is the fallback.
    pub fn from_unitary(u: &CMatrix) -> Result<Self> {
        let dim = u.nrows();
        let defect = (u.adjoint() * u - CMatrix::identity(dim, dim)).norm();
        if defect > 1e-9 {
            return Err(Error::Invalid(format!("matrix is not unitary (defect {defect:e})")));
        }
        if let Some(spec) = Self::from_pencil(u)? {
            return Ok(spec);
        }
        let schur = Schur::try_new(u.clone(), f64::EPSILON, 0).ok_or(Error::Eigen)?;
        let (q, t) = schur.unpack();
        let phases = (0..dim).map(|j| t[(j, j)].arg()).collect();
        Ok(UnitarySpectrum { phases, vectors: q })
    }

    fn from_pencil(u: &CMatrix) -> Result<Option<Self>> {
        const SLOPE: f64 = 0.4607; // generic, so distinct phases rarely share a pencil value
        const CLUSTER: f64 = 1e-6;
        let dim = u.nrows();
        let ua = u.adjoint();
        let re = (u + &ua).scale(0.5);
        let im = (u - &ua) * C64::new(0.0, -0.5);
        let pencil = re + im.scale(SLOPE);
        let pencil = (&pencil + pencil.adjoint()).scale(0.5);
        let (values, mut vectors) = linalg::hermitian_eigen(&pencil)?;
        let mut phases = vec![0.0; dim];
        let mut start = 0;
        while start < dim {
            let mut end = start + 1;
            while end < dim && values[end] - values[end - 1] < CLUSTER {
                end += 1;
            }
            let block = vectors.columns(start, end - start).into_owned();
            let m = block.adjoint() * u * &block;
            let k = end - start;
            let mean = m.trace() / C64::new(k as f64, 0.0);
            if (&m - CMatrix::identity(k, k) * mean).norm() < 1e-10 {
                phases[start..end].fill(mean.arg());
            } else {
                let (q, t) = Schur::try_new(m, f64::EPSILON, 0).ok_or(Error::Eigen)?.unpack();
                vectors.columns_mut(start, k).copy_from(&(&block * q));
                for j in 0..k {
                    phases[start + j] = t[(j, j)].arg();
                }
            }
            start = end;
        }
        let diag = CMatrix::from_diagonal(&CVector::from_iterator(dim, phases.iter().map(|&p| C64::from_polar(1.0, p))));
        let residual = (u * &vectors - &vectors * diag).norm();
        Ok((residual < 1e-9 * (dim as f64).sqrt()).then_some(UnitarySpectrum { phases, vectors }))
    }

    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn mapped_phases(&self, map: PhaseMap) -> Vec<f64> {
        self.phases.iter().map(|&p| map.phase(p)).collect()
    }

    /// Dense matrix of `e^{-i shift} U^power`.
    pub fn dense(&self, map: PhaseMap) -> CMatrix {
        let d: Vec<C64> = self.phases.iter().map(|&p| C64::from_polar(1.0, map.phase(p))).collect();
        linalg::from_spectrum(&self.vectors, &d)
    }

    pub fn populations(&self, state: &QuantumState) -> Vec<f64> {
        eigen_populations(&self.vectors, state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;

    #[test]
    fn single_z_has_unit_gap() {
        let mut h = PauliSum::new(1);
        h.add_term("Z".parse().unwrap(), 1.0).unwrap();
        let s = SpectralDecomposition::diagonalize(&h).unwrap();
        assert_eq!(s.eigenvalues(), &[-1.0, 1.0]);
        assert!((s.gap().unwrap() - 2.0).abs() < 1e-12);
        let p = s.ground_projector();
        assert!((p[(1, 1)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_ground_counted() {
        let mut h = PauliSum::new(2);
        h.add_term(PauliString::with_ops(2, &[(0, crate::pauli::Pauli::Z)]).unwrap(), 1.0).unwrap();
        let s = SpectralDecomposition::diagonalize(&h).unwrap();
        assert_eq!(s.ground_degeneracy(), 2);
        assert!((s.gap().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn schur_recovers_eigenphases() {
        let mut h = PauliSum::new(2);
        h.add_term("XY".parse().unwrap(), 0.4).unwrap();
        h.add_term("ZI".parse().unwrap(), 0.9).unwrap();
        let s = SpectralDecomposition::diagonalize(&h).unwrap();
        let u = UnitarySpectrum::evolution(&s, 1.3);
        let dense = u.dense(PhaseMap::IDENTITY);
        let back = UnitarySpectrum::from_unitary(&dense).unwrap();
        let mut a: Vec<f64> = u.phases().to_vec();
        let mut b: Vec<f64> = back.phases().to_vec();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!((back.dense(PhaseMap::IDENTITY) - dense).norm() < 1e-12);
    }

    #[test]
    fn phase_map_composition_matches_direct_powers() {
        let map = PhaseMap::IDENTITY.shifted(0.3).pow(5).shifted(-1.1).pow(3);
        let phi: f64 = 0.77;
        // ((e^{-0.3i} U)^5 e^{1.1 i})^3 has eigenphase 3*(5*(phi-0.3)+1.1).
        let expected = wrap_phase(3.0 * (5.0 * (phi - 0.3) + 1.1));
        assert!((map.phase(phi) - expected).abs() < 1e-12);
        let big = PhaseMap { power: 1 << 30, shift: 0.0 };
        let x = 1e-3;
        let exact = wrap_phase(((1u64 << 30) as f64 * x) % (2.0 * std::f64::consts::PI));
        assert!((big.phase(x) - exact).abs() < 1e-6);
    }
}
