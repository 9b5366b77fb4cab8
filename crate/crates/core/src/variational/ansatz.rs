//! Parameterized circuit templates and a statevector simulator for them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CVector, C64, ONE};

/// Largest register the simulator accepts.
pub const SIM_CAP: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnsatzKind {
    /// Hardware-efficient: `R_y` and `R_z` columns followed by a CNOT chain.
    Hea,
    /// Alternating layered: brickwork of two-qubit entanglers with `R_y` on
    /// the qubits each entangler touches.
    Alt,
    /// A single column of `R_y`.
    ProductRy,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Entangler {
    #[default]
    Cz,
    Cnot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub kind: AnsatzKind,
    pub qubits: usize,
    pub depth: usize,
    #[serde(default)]
    pub entangler: Entangler,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    /// `exp(-i theta Y / 2)` with `theta = params[param]`.
    Ry { qubit: usize, param: usize },
    /// `exp(-i theta Z / 2)`.
    Rz { qubit: usize, param: usize },
    Cz(usize, usize),
    Cnot { control: usize, target: usize },
}

/// Flat gate list, applied in order to `|0...0>`.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub qubits: usize,
    pub gates: Vec<Gate>,
    pub num_params: usize,
}

impl AnsatzSpec {
    pub fn new(kind: AnsatzKind, qubits: usize, depth: usize) -> Self {
        AnsatzSpec { kind, qubits, depth, entangler: Entangler::Cz }
    }

    pub fn validate(&self) -> Result<()> {
        if self.qubits == 0 || self.qubits > SIM_CAP {
            return Err(Error::SizeCap { what: "ansatz", n: self.qubits, cap: SIM_CAP });
        }
        if self.depth == 0 && self.kind != AnsatzKind::ProductRy {
            return Err(Error::Invalid("ansatz depth must be at least 1".into()));
        }
        Ok(())
    }

    pub fn num_params(&self) -> usize {
        let n = self.qubits;
        match self.kind {
            AnsatzKind::Hea => 2 * n * (self.depth + 1),
            AnsatzKind::Alt => n + self.depth * (2 * (n / 2) + 2 * ((n - 1) / 2)),
            AnsatzKind::ProductRy => n,
        }
    }

    pub fn circuit(&self) -> Result<Circuit> {
        self.validate()?;
        let n = self.qubits;
        let mut b = Builder::default();
        match self.kind {
            AnsatzKind::ProductRy => (0..n).for_each(|q| b.ry(q)),
            AnsatzKind::Hea => {
                for block in 0..=self.depth {
                    (0..n).for_each(|q| b.ry(q));
                    (0..n).for_each(|q| b.rz(q));
                    if block < self.depth {
                        for q in 0..n - 1 {
                            b.gates.push(Gate::Cnot { control: q, target: q + 1 });
                        }
                    }
                }
            }
            AnsatzKind::Alt => {
                (0..n).for_each(|q| b.ry(q));
                for _ in 0..self.depth {
                    for offset in [0, 1] {
                        let pairs: Vec<usize> = (offset..n.saturating_sub(1)).step_by(2).collect();
                        for &a in &pairs {
                            b.gates.push(match self.entangler {
                                Entangler::Cz => Gate::Cz(a, a + 1),
                                Entangler::Cnot => Gate::Cnot { control: a, target: a + 1 },
                            });
                        }
                        for &a in &pairs {
                            b.ry(a);
                            b.ry(a + 1);
                        }
                    }
                }
            }
        }
        debug_assert_eq!(b.next, self.num_params());
        Ok(Circuit { qubits: n, gates: b.gates, num_params: b.next })
    }
}

#[derive(Default)]
struct Builder {
    gates: Vec<Gate>,
    next: usize,
}

impl Builder {
    fn ry(&mut self, qubit: usize) {
        self.gates.push(Gate::Ry { qubit, param: self.next });
        self.next += 1;
    }

    fn rz(&mut self, qubit: usize) {
        self.gates.push(Gate::Rz { qubit, param: self.next });
        self.next += 1;
    }
}

impl Circuit {
    pub fn run(&self, params: &[f64]) -> Result<CVector> {
        if params.len() != self.num_params {
            return Err(Error::Dimension { expected: self.num_params, got: params.len() });
        }
        let mut psi = CVector::zeros(1 << self.qubits);
        psi[0] = ONE;
        for g in &self.gates {
            apply_gate(psi.as_mut_slice(), self.qubits, *g, params);
        }
        Ok(psi)
    }
}

fn bit(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

pub fn apply_gate(psi: &mut [C64], n: usize, gate: Gate, params: &[f64]) {
    match gate {
        Gate::Ry { qubit, param } => {
            let (s, c) = (params[param] / 2.0).sin_cos();
            let b = bit(n, qubit);
            for i in (0..psi.len()).filter(|i| i & b == 0) {
                let (x, y) = (psi[i], psi[i | b]);
                psi[i] = x * c - y * s;
                psi[i | b] = x * s + y * c;
            }
        }
        Gate::Rz { qubit, param } => {
            let lo = C64::from_polar(1.0, -params[param] / 2.0);
            let hi = lo.conj();
            let b = bit(n, qubit);
            for (i, amp) in psi.iter_mut().enumerate() {
                *amp *= if i & b == 0 { lo } else { hi };
            }
        }
        Gate::Cz(a, b) => {
            let m = bit(n, a) | bit(n, b);
            for (i, amp) in psi.iter_mut().enumerate() {
                if i & m == m {
                    *amp = -*amp;
                }
            }
        }
        Gate::Cnot { control, target } => {
            let (c, t) = (bit(n, control), bit(n, target));
            for i in 0..psi.len() {
                if i & c != 0 && i & t == 0 {
                    psi.swap(i, i | t);
                }
            }
        }
    }
}
