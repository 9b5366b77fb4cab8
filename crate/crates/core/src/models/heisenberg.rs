//! Random nearest-neighbour Heisenberg chains.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

/// Whether every bond draws its own couplings or one triple is shared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingDraw {
    #[default]
    PerBond,
    Global,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    /// `(J_x, J_y, J_z)`.
    pub coupling: [f64; 3],
}

/// `H = sum_bonds sum_a J_a S^a_i S^a_j + sum_i h_i S^z_i` with `S = sigma / 2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeisenbergSpec {
    pub n: usize,
    pub bonds: Vec<Bond>,
    pub field: Vec<f64>,
    pub boundary: Boundary,
}

/// Nearest-neighbour pairs. A periodic chain of two sites has a single bond.
pub fn chain_bonds(n: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    if boundary == Boundary::Periodic && n > 2 {
        out.push((n - 1, 0));
    }
    out
}

impl HeisenbergSpec {
    pub fn uniform(n: usize, coupling: [f64; 3], boundary: Boundary) -> Result<Self> {
        check_size(n)?;
        let bonds = chain_bonds(n, boundary).into_iter().map(|(i, j)| Bond { i, j, coupling }).collect();
        Ok(HeisenbergSpec { n, bonds, field: vec![0.0; n], boundary })
    }

    pub fn to_pauli_sum(&self) -> Result<PauliSum> {
        let mut h = PauliSum::new(self.n);
        for b in &self.bonds {
            if b.coupling.iter().any(|c| !c.is_finite()) {
                return Err(Error::Invalid(format!("non-finite coupling on bond ({}, {})", b.i, b.j)));
            }
            for (axis, p) in [Pauli::X, Pauli::Y, Pauli::Z].into_iter().enumerate() {
                let c = b.coupling[axis] / 4.0;
                if c != 0.0 {
                    h.add_term(PauliString::with_ops(self.n, &[(b.i, p), (b.j, p)])?, c)?;
                }
            }
        }
        for (i, &hz) in self.field.iter().enumerate() {
            if hz != 0.0 {
                h.add_term(PauliString::with_ops(self.n, &[(i, Pauli::Z)])?, hz / 2.0)?;
            }
        }
        h.prune(0.0);
        Ok(h)
    }
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Invalid(format!("a Heisenberg chain needs at least 2 sites, got {n}")));
    }
    Ok(())
}

/// Couplings drawn uniformly from `[-1, 1]`, no field.
pub fn heisenberg_random(
    n: usize,
    seed: u64,
    boundary: Boundary,
    draw: CouplingDraw,
) -> Result<(HeisenbergSpec, PauliSum)> {
    check_size(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triple = |rng: &mut ChaCha8Rng| -> [f64; 3] { std::array::from_fn(|_| rng.gen_range(-1.0..=1.0)) };
    let shared = triple(&mut rng);
    let bonds = chain_bonds(n, boundary)
        .into_iter()
        .map(|(i, j)| {
            let coupling = match draw {
                CouplingDraw::PerBond => triple(&mut rng),
                CouplingDraw::Global => shared,
            };
            Bond { i, j, coupling }
        })
        .collect();
    let spec = HeisenbergSpec { n, bonds, field: vec![0.0; n], boundary };
    let h = spec.to_pauli_sum()?;
    Ok((spec, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralDecomposition;

    #[test]
    fn two_site_isotropic_singlet() {
        let spec = HeisenbergSpec::uniform(2, [1.0; 3], Boundary::Open).unwrap();
        let h = spec.to_pauli_sum().unwrap();
        assert_eq!(h.len(), 3);
        assert_eq!(h.coefficient(&"YY".parse().unwrap()), 0.25);
        let ground = SpectralDecomposition::diagonalize(&h).unwrap().ground_energy();
        assert!((ground + 0.75).abs() < 1e-12);
        let periodic = HeisenbergSpec::uniform(2, [1.0; 3], Boundary::Periodic).unwrap();
        assert_eq!(periodic.to_pauli_sum().unwrap(), h);
    }

    #[test]
    fn zero_couplings_give_zero_operator() {
        let spec = HeisenbergSpec::uniform(4, [0.0; 3], Boundary::Periodic).unwrap();
        assert!(spec.to_pauli_sum().unwrap().is_empty());
    }

    #[test]
    fn random_draw_is_reproducible_and_bounded() {
        let (spec, a) = heisenberg_random(6, 11, Boundary::Periodic, CouplingDraw::PerBond).unwrap();
        let (_, b) = heisenberg_random(6, 11, Boundary::Periodic, CouplingDraw::PerBond).unwrap();
        assert_eq!(a, b);
        assert_eq!(spec.bonds.len(), 6);
        assert!(spec.bonds.iter().flat_map(|b| b.coupling).all(|c| (-1.0..=1.0).contains(&c)));
        assert!(a.one_norm() <= 3.0 * 6.0 / 4.0);
        let (_, c) = heisenberg_random(6, 12, Boundary::Periodic, CouplingDraw::PerBond).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn global_draw_shares_couplings() {
        let (spec, _) = heisenberg_random(5, 3, Boundary::Open, CouplingDraw::Global).unwrap();
        assert!(spec.bonds.windows(2).all(|w| w[0].coupling == w[1].coupling));
        assert!(heisenberg_random(1, 0, Boundary::Open, CouplingDraw::PerBond).is_err());
    }
}
