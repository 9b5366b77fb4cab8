//! Fermionic operators and the Jordan-Wigner mapping.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ONE, ZERO};
use crate::pauli::{Pauli, PauliString, PauliSum, QubitOperator, DENSE_CAP};

/// A single creation (`dagger`) or annihilation operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(mode: usize) -> Self {
        Ladder { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Ladder { mode, dagger: false }
    }
}

/// Sum of products of ladder operators, each product read left to right.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionOperator {
    modes: usize,
    terms: BTreeMap<Vec<Ladder>, C64>,
}

impl FermionOperator {
    pub fn new(modes: usize) -> Self {
        FermionOperator { modes, terms: BTreeMap::new() }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn add_term(&mut self, ops: Vec<Ladder>, coeff: C64) -> Result<()> {
        if let Some(bad) = ops.iter().find(|l| l.mode >= self.modes) {
            return Err(Error::QubitIndex { index: bad.mode, n: self.modes });
        }
        *self.terms.entry(ops).or_insert(ZERO) += coeff;
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Ladder>, C64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `n_p = a_p^dagger a_p`.
    pub fn number(modes: usize, p: usize) -> Result<Self> {
        let mut f = FermionOperator::new(modes);
        f.add_term(vec![Ladder::create(p), Ladder::annihilate(p)], ONE)?;
        Ok(f)
    }

    pub fn adjoint(&self) -> FermionOperator {
        let mut out = FermionOperator::new(self.modes);
        for (ops, c) in self.terms() {
            let rev = ops.iter().rev().map(|l| Ladder { mode: l.mode, dagger: !l.dagger }).collect();
            *out.terms.entry(rev).or_insert(ZERO) += c.conj();
        }
        out
    }

    /// Matrix on the occupation-number basis, built directly from the
    /// anticommutation signs. Mode `p` is the `p`-th leftmost bit.
    pub fn to_dense(&self) -> Result<CMatrix> {
        if self.modes > DENSE_CAP {
            return Err(Error::SizeCap { what: "dense fermion operator", n: self.modes, cap: DENSE_CAP });
        }
        let dim = 1usize << self.modes;
        let mut m = CMatrix::zeros(dim, dim);
        for (ops, c) in self.terms() {
            for b in 0..dim {
                let mut state = b;
                let mut sign = 1.0;
                let mut alive = true;
                for l in ops.iter().rev() {
                    let bit = 1usize << (self.modes - 1 - l.mode);
                    let occupied = state & bit != 0;
                    if occupied == l.dagger {
                        alive = false;
                        break;
                    }
                    let before = state >> (self.modes - l.mode);
                    if before.count_ones() % 2 == 1 {
                        sign = -sign;
                    }
                    state ^= bit;
                }
                if alive {
                    m[(state, b)] += c * sign;
                }
            }
        }
        Ok(m)
    }
}

fn ladder_image(modes: usize, l: Ladder) -> QubitOperator {
    let mut ops: Vec<(usize, Pauli)> = (0..l.mode).map(|q| (q, Pauli::Z)).collect();
    ops.push((l.mode, Pauli::X));
    let x = PauliString::with_ops(modes, &ops).expect("mode checked on insertion");
    ops.pop();
    ops.push((l.mode, Pauli::Y));
    let y = PauliString::with_ops(modes, &ops).expect("mode checked on insertion");
    let mut out = QubitOperator::zero(modes);
    out.add_term(x, C64::new(0.5, 0.0));
    out.add_term(y, C64::new(0.0, if l.dagger { -0.5 } else { 0.5 }));
    out
}

/// `a_p^dagger -> (X_p - i Y_p) / 2` and `a_p -> (X_p + i Y_p) / 2`, each with
/// a string of `Z` on modes below `p`.
pub fn jordan_wigner(f: &FermionOperator) -> QubitOperator {
    let n = f.modes();
    let mut out = QubitOperator::zero(n);
    for (ops, c) in f.terms() {
        let mut prod = QubitOperator::scalar(n, c);
        for &l in ops {
            prod = prod.mul(&ladder_image(n, l));
        }
        out.add(&prod);
    }
    out.prune(1e-14);
    out
}

/// Jordan-Wigner image of a Hermitian operator as a real Pauli sum.
pub fn jordan_wigner_hermitian(f: &FermionOperator) -> Result<PauliSum> {
    jordan_wigner(f).to_hermitian(1e-12)
}
