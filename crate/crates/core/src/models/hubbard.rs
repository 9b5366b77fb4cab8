//! One-dimensional Fermi-Hubbard chain with a Gaussian trapping potential.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::models::fermion::{jordan_wigner_hermitian, FermionOperator, Ladder};
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::state::QuantumState;

/// Placement of the two spin modes of each site on the qubit register.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinLayout {
    /// Site `i` spin up on qubit `2i`, spin down on `2i + 1`.
    #[default]
    Interleaved,
    /// All spin-up modes first, then all spin-down modes.
    Blocked,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

/// Spin-resolved parameters are stored as `[up, down]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HubbardSpec {
    pub sites: usize,
    pub hopping: f64,
    pub onsite: f64,
    /// Depth of the Gaussian well.
    pub depth: [f64; 2],
    /// Well centre on the 1-based site axis.
    pub center: [f64; 2],
    pub width: [f64; 2],
    #[serde(default)]
    pub layout: SpinLayout,
}

impl HubbardSpec {
    /// Five sites, `J = 2`, `U = 3`, wells of depth 3 and 0.1 centred on site 3.
    pub fn reference_instance() -> Self {
        HubbardSpec {
            sites: 5,
            hopping: 2.0,
            onsite: 3.0,
            depth: [3.0, 0.1],
            center: [3.0, 3.0],
            width: [1.0, 1.0],
            layout: SpinLayout::Interleaved,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites == 0 {
            return Err(Error::Invalid("Hubbard chain needs at least one site".into()));
        }
        if self.width.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::Invalid("Gaussian widths must be positive".into()));
        }
        let all = [self.hopping, self.onsite, self.depth[0], self.depth[1], self.center[0], self.center[1]];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("Hubbard parameters must be finite".into()));
        }
        Ok(())
    }

    pub fn modes(&self) -> usize {
        2 * self.sites
    }

    /// Mode (and qubit) index of a 0-based site and spin.
    pub fn mode(&self, site: usize, spin: Spin) -> usize {
        let s = matches!(spin, Spin::Down) as usize;
        match self.layout {
            SpinLayout::Interleaved => 2 * site + s,
            SpinLayout::Blocked => s * self.sites + site,
        }
    }

    /// `-lambda exp(-(j - m)^2 / (2 sigma^2))` at 0-based `site`, `j = site + 1`.
    pub fn site_energy(&self, site: usize, spin: Spin) -> f64 {
        let s = matches!(spin, Spin::Down) as usize;
        let j = (site + 1) as f64;
        let d = j - self.center[s];
        -self.depth[s] * (-d * d / (2.0 * self.width[s] * self.width[s])).exp()
    }

    pub fn to_fermion(&self) -> Result<FermionOperator> {
        self.validate()?;
        let mut f = FermionOperator::new(self.modes());
        let hop = C64::new(-self.hopping, 0.0);
        for i in 0..self.sites.saturating_sub(1) {
            for spin in [Spin::Up, Spin::Down] {
                let a = self.mode(i, spin);
                let b = self.mode(i + 1, spin);
                f.add_term(vec![Ladder::create(a), Ladder::annihilate(b)], hop)?;
                f.add_term(vec![Ladder::create(b), Ladder::annihilate(a)], hop)?;
            }
        }
        for i in 0..self.sites {
            let up = self.mode(i, Spin::Up);
            let down = self.mode(i, Spin::Down);
            f.add_term(
                vec![Ladder::create(up), Ladder::annihilate(up), Ladder::create(down), Ladder::annihilate(down)],
                C64::new(self.onsite, 0.0),
            )?;
            for spin in [Spin::Up, Spin::Down] {
                let p = self.mode(i, spin);
                f.add_term(vec![Ladder::create(p), Ladder::annihilate(p)], C64::new(self.site_energy(i, spin), 0.0))?;
            }
        }
        Ok(f)
    }
}

pub fn hubbard_1d(spec: &HubbardSpec) -> Result<PauliSum> {
    let mut h = jordan_wigner_hermitian(&spec.to_fermion()?)?;
    h.prune(1e-14);
    Ok(h)
}

/// `sum_p n_p` on `modes` qubits.
pub fn number_operator(modes: usize) -> Result<PauliSum> {
    let mut h = PauliSum::new(modes);
    h.add_term(PauliString::identity(modes), modes as f64 / 2.0)?;
    for q in 0..modes {
        h.add_term(PauliString::with_ops(modes, &[(q, Pauli::Z)])?, -0.5)?;
    }
    Ok(h)
}

/// `sum_i (n_{i up} - n_{i down}) / 2`.
pub fn total_sz(spec: &HubbardSpec) -> Result<PauliSum> {
    let n = spec.modes();
    let mut h = PauliSum::new(n);
    for i in 0..spec.sites {
        h.add_term(PauliString::with_ops(n, &[(spec.mode(i, Spin::Up), Pauli::Z)])?, -0.25)?;
        h.add_term(PauliString::with_ops(n, &[(spec.mode(i, Spin::Down), Pauli::Z)])?, 0.25)?;
    }
    h.prune(0.0);
    Ok(h)
}

/// Charge and spin densities `<n_up> + <n_down>` and `<n_up> - <n_down>` at a 0-based site.
pub fn charge_spin_density(state: &QuantumState, spec: &HubbardSpec, site: usize) -> Result<(f64, f64)> {
    if site >= spec.sites {
        return Err(Error::Invalid(format!("site {site} outside a chain of {}", spec.sites)));
    }
    if state.dim() != 1 << spec.modes() {
        return Err(Error::Dimension { expected: 1 << spec.modes(), got: state.dim() });
    }
    let up = 1.0 - state.probability_zero(spec.mode(site, Spin::Up))?;
    let down = 1.0 - state.probability_zero(spec.mode(site, Spin::Down))?;
    Ok((up + down, up - down))
}
